//! Generators and independent oracles shared by the integration tests and the
//! acceptance harness. The oracles deliberately avoid the library's own
//! helpers (atomizer, evaluator, occurrence walker) so that agreement means
//! something.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use proofbench::kernel::{check_derivation, load_derivation, Derivation, Rule};
use proofbench::semantics::{empty_evidence_model, force, is_valid, Evidence, MModel, OpTable, Valuation};
use proofbench::syntax::{
    all_vars, exists_just_to_box, free_vars, occurrence_check, parse, parse_term, print_formula, print_term,
    subst_term_for_var, term_vars, Formula, OccurrenceMode, Term,
};

pub const PROPERTY_CASES: u32 = 500;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_derivation(id: &str) -> Derivation {
    let path = corpus_dir().join(format!("{id}.drv"));
    load_derivation(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

// ---------------------------------------------------------------- generators

const VARS: &[&str] = &["x", "y", "z"];

fn var_name() -> impl Strategy<Value = String> {
    prop::sample::select(VARS).prop_map(str::to_string)
}

/// Terms over the M-model fragment: no negative verifiers.
pub fn arb_m_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        var_name().prop_map(Term::Var),
        prop::sample::select(&["c", "a"][..]).prop_map(|c| Term::Const(c.to_string())),
        var_name().prop_map(|x| Term::Prim("f".into(), vec![x])),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sum(a, b)),
            inner.clone().prop_map(Term::bang),
            (inner, var_name()).prop_map(|(a, x)| Term::UAll(Box::new(a), x)),
        ]
    })
}

/// Every term constructor.
pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        var_name().prop_map(Term::Var),
        prop::sample::select(&["c", "a", "c#3"][..]).prop_map(|c| Term::Const(c.to_string())),
        (var_name(), var_name()).prop_map(|(x, y)| Term::Prim("g".into(), vec![x, y])),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sum(a, b)),
            inner.clone().prop_map(Term::bang),
            inner.clone().prop_map(|a| Term::Quest(Box::new(a))),
            inner.clone().prop_map(|a| Term::WQuest(Box::new(a))),
            (inner, var_name()).prop_map(|(a, x)| Term::UAll(Box::new(a), x)),
        ]
    })
}

fn atom() -> impl Strategy<Value = Formula> {
    prop::sample::select(&["p", "q", "r"][..]).prop_map(Formula::atom)
}

/// Formulas of the whole language; `mu` bodies are positive by construction.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![4 => atom(), 1 => Just(Formula::Falsum), 1 => Just(Formula::fix("d", vec![]))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::xor(a, b)),
            inner.clone().prop_map(Formula::boxed),
            (0u32..30, inner.clone()).prop_map(|(i, a)| Formula::knows(i, a)),
            (arb_term(), prop::option::of(prop::sample::select(&["s", "2"][..])), inner.clone())
                .prop_map(|(t, ag, a)| Formula::just_by(t, ag.map(str::to_string), a)),
            (var_name(), inner.clone()).prop_map(|(x, a)| Formula::forall(&x, a)),
            (var_name(), inner.clone()).prop_map(|(x, a)| Formula::exists(&x, a)),
            inner.clone().prop_map(|a| Formula::mu("m", Formula::or(Formula::atom("m"), a))),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::fix("d", vec![a, b])),
        ]
    })
}

/// Formulas interpreted by M-models: no modalities, no `mu`.
pub fn arb_m_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![4 => atom(), 1 => Just(Formula::Falsum), 1 => Just(Formula::fix("d", vec![]))];
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::xor(a, b)),
            (arb_m_term(), inner.clone()).prop_map(|(t, a)| Formula::just(t, a)),
            (arb_m_term(), inner.clone()).prop_map(|(t, a)| Formula::just(t, a)),
            (var_name(), inner.clone()).prop_map(|(x, a)| Formula::forall(&x, a)),
            (var_name(), inner).prop_map(|(x, a)| Formula::exists(&x, a)),
        ]
    })
}

/// Formulas where `(ex x) x:_` patterns are common, for the box-rewrite property.
pub fn arb_exists_just_formula() -> impl Strategy<Value = Formula> {
    let leaf = atom();
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (var_name(), inner.clone()).prop_map(|(x, a)| Formula::exists(&x, Formula::just(Term::var(&x), a))),
            (var_name(), inner.clone()).prop_map(|(x, a)| Formula::exists(&x, Formula::just(Term::var(&x), a))),
            (var_name(), inner.clone()).prop_map(|(x, a)| Formula::exists(&x, a)),
            (arb_m_term(), inner).prop_map(|(t, a)| Formula::just(t, a)),
        ]
    })
}

/// Entropy consumed by [`build_model`].
pub fn arb_bytes() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 96)
}

struct Bytes<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Bytes<'_> {
    fn next(&mut self) -> u8 {
        let b = self.data[self.pos % self.data.len()];
        self.pos += 1;
        b
    }

    fn below(&mut self, n: usize) -> usize {
        usize::from(self.next()) % n
    }

    fn coin(&mut self) -> bool {
        self.next().is_multiple_of(2)
    }
}

fn full_table(bytes: &mut Bytes, n: usize, arity: usize) -> OpTable {
    let mut entries = BTreeMap::new();
    let mut args = vec![vec![]];
    for _ in 0..arity {
        args = args.into_iter().flat_map(|a: Vec<usize>| (0..n).map(move |r| [a.clone(), vec![r]].concat())).collect();
    }
    for a in args {
        entries.insert(a, bytes.below(n));
    }
    OpTable { entries, default: None }
}

/// Every `A` with `t:A` somewhere in `f`.
fn justified_bodies(f: &Formula, out: &mut Vec<Formula>) {
    if let Formula::Just(_, _, a) = f {
        if !out.contains(a) {
            out.push((**a).clone());
        }
    }
    for c in f.children() {
        justified_bodies(c, out);
    }
}

/// A model with `1..=3` reasons whose evidence is drawn from the justified
/// subformulas of `f`, so that `t:A` is forced often enough to matter.
pub fn build_model(f: &Formula, entropy: &[u8]) -> MModel {
    let mut bytes = Bytes { data: entropy, pos: 0 };
    let n = 1 + bytes.below(3);
    let mut m = empty_evidence_model(n, &[]);
    m.app = full_table(&mut bytes, n, 2);
    m.sum = full_table(&mut bytes, n, 2);
    m.bang = full_table(&mut bytes, n, 1);
    m.uall = Some(full_table(&mut bytes, n, 2));
    m.prims.insert("f".into(), full_table(&mut bytes, n, 1));
    m.prim_default = Some(bytes.below(n));
    for letter in [Formula::atom("p"), Formula::atom("q"), Formula::atom("r"), Formula::fix("d", vec![])] {
        m.truth.insert(letter, bytes.coin());
    }
    let mut bodies = Vec::new();
    justified_bodies(f, &mut bodies);
    for a in bodies {
        let fv: Vec<String> = free_vars(&a).into_iter().collect();
        for r in 0..n {
            if bytes.below(3) == 0 {
                continue;
            }
            let mut restriction = BTreeMap::new();
            for x in &fv {
                if bytes.below(3) == 0 {
                    restriction.insert(x.clone(), bytes.below(n));
                }
            }
            m.evidence.push(Evidence { agent: None, reason: r, restriction, formula: a.clone() });
        }
    }
    m
}

// ------------------------------------------------------------------- oracles

/// Maximal subformulas that are not truth-functional compounds.
fn letters(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Falsum => {}
        Formula::Not(a) => letters(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::Xor(a, b) => {
            letters(a, out);
            letters(b, out);
        }
        other => {
            if !out.contains(other) {
                out.push(other.clone());
            }
        }
    }
}

pub fn truth_letters(formulas: &[&Formula]) -> Vec<Formula> {
    let mut out = Vec::new();
    for f in formulas {
        letters(f, &mut out);
    }
    out
}

fn table_eval(f: &Formula, letters: &[Formula], row: u32) -> bool {
    let go = |g: &Formula| table_eval(g, letters, row);
    match f {
        Formula::Falsum => false,
        Formula::Not(a) => !go(a),
        Formula::And(a, b) => go(a) && go(b),
        Formula::Or(a, b) => go(a) || go(b),
        Formula::Imp(a, b) => !go(a) || go(b),
        Formula::Iff(a, b) => go(a) == go(b),
        Formula::Xor(a, b) => go(a) != go(b),
        other => {
            let k = letters.iter().position(|l| l == other).expect("letter collected");
            row >> k & 1 == 1
        }
    }
}

/// Full truth-table enumeration of `premises ⊨ goal`.
pub fn truth_table_consequence(goal: &Formula, premises: &[&Formula]) -> bool {
    let mut all: Vec<&Formula> = premises.to_vec();
    all.push(goal);
    let ls = truth_letters(&all);
    (0..1u32 << ls.len())
        .all(|row| !premises.iter().all(|p| table_eval(p, &ls, row)) || table_eval(goal, &ls, row))
}

fn oracle_table(t: &OpTable, args: &[usize]) -> Option<usize> {
    t.entries.get(args).copied().or(t.default)
}

fn oracle_denote(m: &MModel, v: &Valuation, t: &Term) -> Option<usize> {
    let var = |x: &String| *v.get(x).unwrap_or(&0);
    match t {
        Term::Var(x) => Some(var(x)),
        Term::Const(c) => match m.prims.get(c) {
            Some(tab) => oracle_table(tab, &[]),
            None => m.prim_default,
        },
        Term::Prim(f, xs) => match m.prims.get(f) {
            Some(tab) => oracle_table(tab, &xs.iter().map(var).collect::<Vec<_>>()),
            None => m.prim_default,
        },
        Term::App(a, b) => oracle_table(&m.app, &[oracle_denote(m, v, a)?, oracle_denote(m, v, b)?]),
        Term::Sum(a, b) => oracle_table(&m.sum, &[oracle_denote(m, v, a)?, oracle_denote(m, v, b)?]),
        Term::Bang(a) => oracle_table(&m.bang, &[oracle_denote(m, v, a)?]),
        Term::UAll(a, x) => oracle_table(m.uall.as_ref()?, &[oracle_denote(m, v, a)?, var(x)]),
        Term::Quest(_) | Term::WQuest(_) => None,
    }
}

/// Direct reading of the forcing clauses; `None` outside the interpreted fragment.
pub fn oracle_force(m: &MModel, v: &Valuation, f: &Formula) -> Option<bool> {
    let go = |g: &Formula| oracle_force(m, v, g);
    Some(match f {
        Formula::Atom(_) | Formula::Fix(..) => m.truth.get(f).copied().unwrap_or(m.truth_default),
        Formula::Falsum => false,
        Formula::Not(a) => !go(a)?,
        Formula::And(a, b) => go(a)? & go(b)?,
        Formula::Or(a, b) => go(a)? | go(b)?,
        Formula::Imp(a, b) => !go(a)? | go(b)?,
        Formula::Iff(a, b) => go(a)? == go(b)?,
        Formula::Xor(a, b) => go(a)? ^ go(b)?,
        Formula::Just(t, agent, a) => {
            let r = oracle_denote(m, v, t)?;
            let evidenced = m.evidence.iter().any(|e| {
                e.agent == *agent
                    && e.reason == r
                    && e.formula == **a
                    && e.restriction.iter().all(|(x, rx)| v.get(x).unwrap_or(&0) == rx)
            });
            let truth = go(a)?;
            evidenced & truth
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let mut values = Vec::new();
            for r in 0..m.domain.len() {
                let mut w = v.clone();
                w.insert(x.clone(), r);
                values.push(oracle_force(m, &w, a)?);
            }
            if matches!(f, Formula::Forall(..)) {
                values.iter().all(|b| *b)
            } else {
                values.iter().any(|b| *b)
            }
        }
        Formula::Boxed(_) | Formula::Knows(..) | Formula::Mu(..) => return None,
    })
}

/// Validity by enumerating every valuation of every mentioned variable.
pub fn brute_force_valid(m: &MModel, f: &Formula) -> Option<bool> {
    let vars: Vec<String> = all_vars(f).into_iter().collect();
    let n = m.domain.len();
    let total = n.pow(vars.len() as u32);
    for code in 0..total {
        let mut v = Valuation::new();
        let mut c = code;
        for x in &vars {
            v.insert(x.clone(), c % n);
            c /= n;
        }
        if !oracle_force(m, &v, f)? {
            return Some(false);
        }
    }
    Some(true)
}

/// Per-occurrence flags of atom `p`: (negation parity odd, polarity undetermined, modalized).
fn classify(p: &str, f: &Formula, odd: bool, mixed: bool, modal: bool, out: &mut Vec<(bool, bool, bool)>) {
    match f {
        Formula::Atom(q) if q == p => out.push((odd, mixed, modal)),
        Formula::Atom(_) | Formula::Falsum => {}
        Formula::Not(a) => classify(p, a, !odd, mixed, modal, out),
        Formula::Imp(a, b) => {
            classify(p, a, !odd, mixed, modal, out);
            classify(p, b, odd, mixed, modal, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            classify(p, a, odd, mixed, modal, out);
            classify(p, b, odd, mixed, modal, out);
        }
        Formula::Iff(a, b) | Formula::Xor(a, b) => {
            classify(p, a, odd, true, modal, out);
            classify(p, b, odd, true, modal, out);
        }
        Formula::Boxed(a) | Formula::Knows(_, a) | Formula::Just(_, _, a) => classify(p, a, odd, mixed, true, out),
        Formula::Forall(_, a) | Formula::Exists(_, a) => classify(p, a, odd, mixed, modal, out),
        Formula::Mu(q, a) => {
            if q != p {
                classify(p, a, odd, mixed, modal, out)
            }
        }
        Formula::Fix(_, args) => {
            for a in args {
                classify(p, a, odd, true, modal, out);
            }
        }
    }
}

/// Brute-force classifier for the polarity and modal-depth modes.
pub fn oracle_occurrence(mode: OccurrenceMode, p: &str, f: &Formula) -> bool {
    let mut occ = Vec::new();
    classify(p, f, false, false, false, &mut occ);
    occ.iter().all(|&(odd, mixed, modal)| {
        let positive = !odd && !mixed;
        match mode {
            OccurrenceMode::Modalized => modal,
            OccurrenceMode::Positive => positive,
            OccurrenceMode::SemiPositive => modal || positive,
            OccurrenceMode::Justified | OccurrenceMode::ExistsJustified => unreachable!("not classified here"),
        }
    })
}

/// Whether `t` is free for `x` in `f`: no free occurrence of `x` sits under a
/// binder of a variable of `t`, and `x` is never a primitive-term argument
/// unless `t` is a variable.
pub fn free_for(f: &Formula, x: &str, t: &Term) -> bool {
    fn in_term(s: &Term, x: &str, t: &Term, bound: &BTreeSet<String>) -> bool {
        let tv = term_vars(t);
        match s {
            Term::Var(y) => y != x || bound.is_disjoint(&tv),
            Term::Const(_) => true,
            Term::Prim(_, args) => !args.iter().any(|a| a == x) || (matches!(t, Term::Var(_)) && bound.is_disjoint(&tv)),
            Term::App(a, b) | Term::Sum(a, b) => in_term(a, x, t, bound) && in_term(b, x, t, bound),
            Term::Bang(a) | Term::Quest(a) | Term::WQuest(a) => in_term(a, x, t, bound),
            Term::UAll(a, y) => {
                if y == x {
                    return true;
                }
                let mut inner = bound.clone();
                inner.insert(y.clone());
                in_term(a, x, t, &inner)
            }
        }
    }
    fn go(f: &Formula, x: &str, t: &Term, bound: &BTreeSet<String>) -> bool {
        match f {
            Formula::Just(s, _, a) => in_term(s, x, t, bound) && go(a, x, t, bound),
            Formula::Forall(y, a) | Formula::Exists(y, a) => {
                if y == x {
                    return true;
                }
                let mut inner = bound.clone();
                inner.insert(y.clone());
                go(a, x, t, &inner)
            }
            _ => f.children().iter().all(|c| go(c, x, t, bound)),
        }
    }
    go(f, x, t, &BTreeSet::new())
}

// ---------------------------------------------------------------- properties

pub fn prop_roundtrip(f: &Formula) -> Result<(), TestCaseError> {
    let text = print_formula(f);
    let back = parse(&text).map_err(|e| TestCaseError::fail(format!("`{text}` does not parse: {e}")))?;
    prop_assert_eq!(&back, f, "printed as `{}`", text);
    prop_assert_eq!(free_vars(&back), free_vars(f));
    Ok(())
}

pub fn prop_term_roundtrip(t: &Term) -> Result<(), TestCaseError> {
    let text = print_term(t);
    let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("`{text}` does not parse: {e}")))?;
    prop_assert_eq!(&back, t, "printed as `{}`", text);
    Ok(())
}

pub fn prop_subst(f: &Formula, x: &str, t: &Term) -> Result<(), TestCaseError> {
    let result = subst_term_for_var(f, x, t);
    if !free_vars(f).contains(x) {
        prop_assert_eq!(result, Ok(f.clone()));
        return Ok(());
    }
    let expect_ok = free_for(f, x, t);
    prop_assert_eq!(result.is_ok(), expect_ok, "subst {} for {} in `{}`: {:?}", print_term(t), x, f, result);
    if let Ok(g) = result {
        let mut want = free_vars(f);
        want.remove(x);
        want.extend(term_vars(t));
        prop_assert_eq!(free_vars(&g), want, "free variables after substitution in `{}`", g);
    }
    Ok(())
}

pub fn prop_occurrence(f: &Formula) -> Result<(), TestCaseError> {
    for p in ["p", "q", "r"] {
        let nn = Formula::not(Formula::not(f.clone()));
        prop_assert_eq!(
            occurrence_check(OccurrenceMode::Positive, p, &nn),
            occurrence_check(OccurrenceMode::Positive, p, f)
        );
        for mode in [OccurrenceMode::Modalized, OccurrenceMode::Positive, OccurrenceMode::SemiPositive] {
            prop_assert_eq!(occurrence_check(mode, p, f), oracle_occurrence(mode, p, f), "{:?} {} in `{}`", mode, p, f);
        }
        if occurrence_check(OccurrenceMode::ExistsJustified, p, f) {
            prop_assert!(occurrence_check(OccurrenceMode::Modalized, p, &exists_just_to_box(f)));
        }
        if occurrence_check(OccurrenceMode::Justified, p, f) {
            prop_assert!(occurrence_check(OccurrenceMode::Modalized, p, f));
        }
    }
    Ok(())
}

fn uniform_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::UAll(a, x) => {
            out.insert(x.clone());
            uniform_vars(a, out);
        }
        Term::App(a, b) | Term::Sum(a, b) => {
            uniform_vars(a, out);
            uniform_vars(b, out);
        }
        Term::Bang(a) | Term::Quest(a) | Term::WQuest(a) => uniform_vars(a, out),
        Term::Var(_) | Term::Const(_) | Term::Prim(..) => {}
    }
}

/// Variables bound by a uniform verifier `(t all x)` somewhere in `f`. Their
/// value enters the denotation of the verifier term even though they are bound.
pub fn verifier_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if let Formula::Just(t, _, _) = f {
        uniform_vars(t, &mut out);
    }
    for c in f.children() {
        out.extend(verifier_vars(c));
    }
    out
}

/// Forcing depends only on the free variables, plus the variables read by
/// uniform verifiers; without verifiers this is the free-variable lemma verbatim.
pub fn prop_free_var_forcing(f: &Formula, m: &MModel, v: &Valuation, w: &Valuation) -> Result<(), TestCaseError> {
    let mut agree = free_vars(f);
    agree.extend(verifier_vars(f));
    let mut w2 = w.clone();
    for x in &agree {
        w2.insert(x.clone(), *v.get(x).unwrap_or(&0));
    }
    let a = force(m, v, f).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = force(m, &w2, f).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a, b, "`{}` under {:?} vs {:?}", f, v, w2);
    Ok(())
}

pub fn prop_factivity(t: &Term, a: &Formula, m: &MModel, v: &Valuation) -> Result<(), TestCaseError> {
    let ta = Formula::just(t.clone(), a.clone());
    let forced = force(m, v, &ta).map_err(|e| TestCaseError::fail(e.to_string()))?;
    if forced {
        prop_assert!(force(m, v, a).map_err(|e| TestCaseError::fail(e.to_string()))?);
    }
    Ok(())
}

pub fn prop_empty_evidence(t: &Term, a: &Formula, size: usize, v: &Valuation) -> Result<(), TestCaseError> {
    let m = empty_evidence_model(size, &[Formula::atom("p"), Formula::atom("q"), Formula::fix("d", vec![])]);
    let ta = Formula::just(t.clone(), a.clone());
    prop_assert!(!force(&m, v, &ta).map_err(|e| TestCaseError::fail(e.to_string()))?);
    Ok(())
}

pub fn prop_validity_oracle(f: &Formula, m: &MModel) -> Result<(), TestCaseError> {
    let got = is_valid(m, f).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let want = brute_force_valid(m, f).ok_or_else(|| TestCaseError::fail("outside the oracle's fragment"))?;
    prop_assert_eq!(got, want, "validity of `{}`", f);
    Ok(())
}

pub fn arb_valuation() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..3, 3)
}

/// Valuation of `x, y, z` folded into the model's domain.
pub fn valuation(m: &MModel, vals: &[usize]) -> Valuation {
    VARS.iter().zip(vals).map(|(x, r)| (x.to_string(), r % m.domain.len())).collect()
}

// ----------------------------------------------------------- corpus helpers

/// Ids of every derivation entry in the manifest.
pub fn derivation_ids() -> Vec<String> {
    proofbench::corpus::load_manifest(&corpus_dir())
        .expect("manifest")
        .into_iter()
        .filter(|e| e.file.extension().is_some_and(|x| x == "drv"))
        .map(|e| e.id)
        .collect()
}

/// Step formulas of every corpus derivation, with the formulas each step cites
/// through a truth-functional rule.
pub fn corpus_prop_steps() -> Vec<(Formula, Vec<Formula>)> {
    let mut out = Vec::new();
    for id in derivation_ids() {
        let d = corpus_derivation(&id);
        for s in &d.steps {
            let cited = match &s.rule {
                Rule::TautCons(is) => is.iter().filter_map(|i| d.step(*i)).map(|c| c.formula.clone()).collect(),
                Rule::Mp(i, j) => [i, j].iter().filter_map(|i| d.step(**i)).map(|c| c.formula.clone()).collect(),
                _ => Vec::new(),
            };
            out.push((s.formula.clone(), cited));
        }
    }
    out
}

pub fn accepted(d: &Derivation) -> Result<(), String> {
    let r = check_derivation(d);
    match r.first_failure {
        None => Ok(()),
        Some((step, msg)) => Err(format!("step {step}: {msg}")),
    }
}
pub mod criteria;
