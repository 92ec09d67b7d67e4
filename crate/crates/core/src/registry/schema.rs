use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::kernel::taut_consequence;
use crate::syntax::{all_vars, free_vars, parse_pattern, subst_prop, subst_term_for_var, subterms, Formula, Term};

use super::LogicSpec;

/// What a metavariable is bound to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Formula(Formula),
    Term(Term),
    /// A bound justification variable (the `x` of `all x`).
    Var(String),
    Agent(Option<String>),
    Index(u32),
}

pub type Binding = BTreeMap<String, Bound>;

type SideCondition = fn(&Binding) -> bool;
type CustomMatcher = fn(&Formula, &LogicSpec) -> Option<Binding>;

enum Matcher {
    /// Alternative patterns sharing one side condition.
    Patterns(Vec<Formula>, Option<SideCondition>),
    Custom(CustomMatcher),
}

pub struct AxiomSchema {
    pub id: &'static str,
    /// Human-readable shape, shown by `logics list`.
    pub shape: &'static str,
    matcher: Matcher,
}

const AGENT_KEY: &str = "@";

fn pattern_schema(id: &'static str, shape: &'static str, patterns: &[&str], side: Option<SideCondition>) -> AxiomSchema {
    let parsed = patterns
        .iter()
        .map(|p| parse_pattern(p).unwrap_or_else(|e| panic!("schema {id} pattern `{p}` is malformed: {e}")))
        .collect();
    AxiomSchema { id, shape, matcher: Matcher::Patterns(parsed, side) }
}

fn custom(id: &'static str, shape: &'static str, m: CustomMatcher) -> AxiomSchema {
    AxiomSchema { id, shape, matcher: Matcher::Custom(m) }
}

pub fn schemas() -> &'static [AxiomSchema] {
    static TABLE: OnceLock<Vec<AxiomSchema>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

pub fn schema(id: &str) -> Option<&'static AxiomSchema> {
    schemas().iter().find(|s| s.id == id)
}

fn build_table() -> Vec<AxiomSchema> {
    vec![
        custom("Taut", "every propositional tautology", match_taut),
        // Modal.
        pattern_schema("K", "[](A->B) -> ([]A -> []B)", &["[]($A -> $B) -> ([]$A -> []$B)"], None),
        pattern_schema("T", "[]A -> A", &["[]$A -> $A"], None),
        pattern_schema("D", "[]A -> <>A", &["[]$A -> ~[]~$A"], None),
        pattern_schema("4", "[]A -> [][]A", &["[]$A -> [][]$A"], None),
        pattern_schema("B", "A -> []<>A", &["$A -> []~[]~$A"], None),
        pattern_schema("5", "<>A -> []<>A", &["~[]~$A -> []~[]~$A"], None),
        pattern_schema("Lob", "[]([]A -> A) -> []A", &["[]([]$A -> $A) -> []$A"], None),
        custom("Sac", "[]([]^n A -> A) -> []A", match_sacchetti),
        custom("SacBot", "[]^n false", match_sacchetti_bot),
        pattern_schema("GLA1", "t:A -> []A", &["$t:$A -> []$A"], None),
        pattern_schema("GLA2", "~t:A -> []~t:A", &["~$t:$A -> []~$t:$A"], None),
        pattern_schema("GLA3", "t:[]A -> A", &["$t:[]$A -> $A"], None),
        // Justification.
        pattern_schema("Sum", "s:A -> (s+t):A, s:A -> (t+s):A", &["$s:$A -> ($s+$t):$A", "$s:$A -> ($t+$s):$A"], None),
        pattern_schema("jK", "s:(A->B) -> (t:A -> (s*t):B)", &["$s:($A -> $B) -> ($t:$A -> ($s*$t):$B)"], None),
        pattern_schema("jT", "t:A -> A", &["$t:$A -> $A"], None),
        pattern_schema("jD", "t:false -> false", &["$t:false -> false"], None),
        pattern_schema("j4", "t:A -> !t:t:A", &["$t:$A -> !$t:$t:$A"], None),
        pattern_schema("jB", "~A -> ??t:~t:A", &["~$A -> ??$t:~$t:$A"], None),
        pattern_schema("j5", "~t:A -> ?t:~t:A", &["~$t:$A -> ?$t:~$t:$A"], None),
        pattern_schema("EGL", "s:(t:A -> A) -> t:A", &["$s:($t:$A -> $A) -> $t:$A"], None),
        // Quantified.
        custom("Q1", "(all x)A(x) -> A(t), t free for x", match_q1),
        pattern_schema(
            "Q2",
            "(all x)(A -> B) -> (A -> (all x)B), x not free in A",
            &["(all $x)($A -> $B) -> ($A -> (all $x)$B)"],
            Some(|b| !var_free_in(b, "$x", "$A")),
        ),
        custom("Q3", "A(t) -> (ex x)A(x), t free for x", match_q3),
        pattern_schema(
            "Q4",
            "(all x)(A -> B) -> ((ex x)A -> B), x not free in B",
            &["(all $x)($A -> $B) -> ((ex $x)$A -> $B)"],
            Some(|b| !var_free_in(b, "$x", "$B")),
        ),
        pattern_schema(
            "UF",
            "(ex y)y:(all x)t:A -> (t all x):(all x)A, y not free in t or A",
            &["(ex $y)$y:(all $x)$t:$A -> ($t all $x):(all $x)$A"],
            Some(|b| {
                let y = bound_name(b, "$y");
                let in_t = matches!(b.get("$t"), Some(Bound::Term(t)) if crate::syntax::term_vars(t).contains(&y));
                !in_t && !var_free_in(b, "$y", "$A")
            }),
        ),
        pattern_schema(
            "UB",
            "(all x)t:A -> (t all x):(all x)A",
            &["(all $x)$t:$A -> ($t all $x):(all $x)$A"],
            None,
        ),
        // Fixed points of the mu-calculus.
        custom("MuCL", "A(mu p.A(p)) <-> mu p.A(p)", match_mu_closure),
        // Timed knowledge.
        custom("tK", "K@i(A->B) -> (K@j A -> K@k B), i,j<k", match_tk),
        custom("Mon", "K@i A -> K@j A, i<j", match_mon),
        custom("tT", "K@i A -> A", match_tt),
        custom("t4", "K@i A -> K@j K@i A, i<j", match_t4),
    ]
}

fn bound_name(b: &Binding, key: &str) -> String {
    match b.get(key) {
        Some(Bound::Var(x)) => x.clone(),
        Some(Bound::Term(Term::Var(x))) => x.clone(),
        _ => String::new(),
    }
}

fn var_free_in(b: &Binding, var_key: &str, formula_key: &str) -> bool {
    let x = bound_name(b, var_key);
    matches!(b.get(formula_key), Some(Bound::Formula(f)) if free_vars(f).contains(&x))
}

impl AxiomSchema {
    pub fn matches(&self, f: &Formula, logic: &LogicSpec) -> Option<Binding> {
        match &self.matcher {
            Matcher::Patterns(patterns, side) => patterns.iter().find_map(|p| {
                let mut b = Binding::new();
                (match_formula(p, f, &mut b) && side.is_none_or(|c| c(&b))).then_some(b)
            }),
            Matcher::Custom(m) => m(f, logic),
        }
    }
}

fn is_meta(name: &str) -> bool {
    name.starts_with('$')
}

fn bind(b: &mut Binding, key: &str, value: Bound) -> bool {
    match b.get(key) {
        Some(existing) => *existing == value,
        None => {
            b.insert(key.to_string(), value);
            true
        }
    }
}

fn match_formula(pat: &Formula, f: &Formula, b: &mut Binding) -> bool {
    match (pat, f) {
        (Formula::Atom(m), _) if is_meta(m) => bind(b, m, Bound::Formula(f.clone())),
        (Formula::Atom(p), Formula::Atom(q)) => p == q,
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(a), Formula::Not(c)) | (Formula::Boxed(a), Formula::Boxed(c)) => match_formula(a, c, b),
        (Formula::And(a1, a2), Formula::And(c1, c2))
        | (Formula::Or(a1, a2), Formula::Or(c1, c2))
        | (Formula::Imp(a1, a2), Formula::Imp(c1, c2))
        | (Formula::Iff(a1, a2), Formula::Iff(c1, c2))
        | (Formula::Xor(a1, a2), Formula::Xor(c1, c2)) => match_formula(a1, c1, b) && match_formula(a2, c2, b),
        (Formula::Just(tp, agp, a), Formula::Just(t, ag, c)) => {
            let agent_ok = match agp {
                None => bind(b, AGENT_KEY, Bound::Agent(ag.clone())),
                Some(_) => agp == ag,
            };
            agent_ok && match_term(tp, t, b) && match_formula(a, c, b)
        }
        (Formula::Forall(xp, a), Formula::Forall(x, c)) | (Formula::Exists(xp, a), Formula::Exists(x, c)) => {
            match_binder_var(xp, x, b) && match_formula(a, c, b)
        }
        (Formula::Knows(i, a), Formula::Knows(j, c)) => i == j && match_formula(a, c, b),
        (Formula::Mu(p, a), Formula::Mu(q, c)) => p == q && match_formula(a, c, b),
        (Formula::Fix(n, xs), Formula::Fix(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_formula(x, y, b))
        }
        _ => false,
    }
}

/// Matches `pat` against `f`, where identifiers starting with `$` in `pat` are
/// metavariables; extends `b` consistently.
pub fn match_with_metavariables(pat: &Formula, f: &Formula, b: &mut Binding) -> bool {
    match_formula(pat, f, b)
}

fn match_binder_var(xp: &str, x: &str, b: &mut Binding) -> bool {
    if !is_meta(xp) {
        return xp == x;
    }
    match b.get(xp) {
        Some(Bound::Var(y)) => y == x,
        Some(Bound::Term(Term::Var(y))) => y == x,
        Some(_) => false,
        None => {
            b.insert(xp.to_string(), Bound::Var(x.to_string()));
            true
        }
    }
}

fn match_term(pat: &Term, t: &Term, b: &mut Binding) -> bool {
    match (pat, t) {
        (Term::Var(m), _) if is_meta(m) => match b.get(m) {
            Some(Bound::Var(y)) => *t == Term::Var(y.clone()),
            Some(Bound::Term(s)) => s == t,
            Some(_) => false,
            None => {
                b.insert(m.clone(), Bound::Term(t.clone()));
                true
            }
        },
        (Term::Var(x), Term::Var(y)) | (Term::Const(x), Term::Const(y)) => x == y,
        (Term::App(a1, a2), Term::App(c1, c2)) | (Term::Sum(a1, a2), Term::Sum(c1, c2)) => {
            match_term(a1, c1, b) && match_term(a2, c2, b)
        }
        (Term::Bang(a), Term::Bang(c)) | (Term::Quest(a), Term::Quest(c)) | (Term::WQuest(a), Term::WQuest(c)) => {
            match_term(a, c, b)
        }
        (Term::UAll(a, xp), Term::UAll(c, x)) => match_binder_var(xp, x, b) && match_term(a, c, b),
        _ => false,
    }
}

fn formula_binding(pairs: Vec<(&str, Bound)>) -> Binding {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn match_taut(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    taut_consequence(f, &[]).then(Binding::new)
}

/// Finds `t` with `body[t/x] == target`, trying every term that occurs in
/// `target` plus every variable name there and `x` itself.
fn find_instance(body: &Formula, x: &str, target: &Formula) -> Option<Term> {
    let mut candidates = vec![Term::Var(x.to_string())];
    candidates.extend(subterms(target));
    candidates.extend(all_vars(target).into_iter().map(Term::Var));
    candidates
        .into_iter()
        .find(|t| subst_term_for_var(body, x, t).is_ok_and(|g| g == *target))
}

fn match_q1(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Imp(l, r) = f else { return None };
    let Formula::Forall(x, body) = &**l else { return None };
    let t = find_instance(body, x, r)?;
    Some(formula_binding(vec![
        ("$x", Bound::Var(x.clone())),
        ("$A", Bound::Formula((**body).clone())),
        ("$t", Bound::Term(t)),
    ]))
}

fn match_q3(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Imp(l, r) = f else { return None };
    let Formula::Exists(x, body) = &**r else { return None };
    let t = find_instance(body, x, l)?;
    Some(formula_binding(vec![
        ("$x", Bound::Var(x.clone())),
        ("$A", Bound::Formula((**body).clone())),
        ("$t", Bound::Term(t)),
    ]))
}

fn boxes(mut f: &Formula) -> (u32, &Formula) {
    let mut n = 0;
    while let Formula::Boxed(a) = f {
        n += 1;
        f = a;
    }
    (n, f)
}

fn match_sacchetti(f: &Formula, logic: &LogicSpec) -> Option<Binding> {
    let n = logic.param?;
    let Formula::Imp(l, r) = f else { return None };
    let Formula::Boxed(inner) = &**l else { return None };
    let Formula::Imp(prem, a) = &**inner else { return None };
    let (k, core) = boxes(prem);
    (k == n && core == &**a && **r == Formula::boxed((**a).clone()))
        .then(|| formula_binding(vec![("$A", Bound::Formula((**a).clone()))]))
}

fn match_sacchetti_bot(f: &Formula, logic: &LogicSpec) -> Option<Binding> {
    let n = logic.param?;
    let (k, core) = boxes(f);
    (k == n && *core == Formula::Falsum).then(Binding::new)
}

fn match_mu_closure(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Iff(l, r) = f else { return None };
    let Formula::Mu(p, a) = &**r else { return None };
    let unfolded = subst_prop(a, p, r).ok()?;
    (unfolded == **l).then(|| formula_binding(vec![("$A", Bound::Formula((**a).clone()))]))
}

fn timed(f: &Formula) -> Option<(u32, &Formula)> {
    match f {
        Formula::Knows(i, a) => Some((*i, a)),
        _ => None,
    }
}

fn match_tk(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Imp(l, r) = f else { return None };
    let (i, ab) = timed(l)?;
    let Formula::Imp(a, bf) = ab else { return None };
    let Formula::Imp(ka, kb) = &**r else { return None };
    let (j, a2) = timed(ka)?;
    let (k, b2) = timed(kb)?;
    (a2 == &**a && b2 == &**bf && i < k && j < k).then(|| {
        formula_binding(vec![
            ("$A", Bound::Formula((**a).clone())),
            ("$B", Bound::Formula((**bf).clone())),
            ("i", Bound::Index(i)),
            ("j", Bound::Index(j)),
            ("k", Bound::Index(k)),
        ])
    })
}

fn match_mon(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Imp(l, r) = f else { return None };
    let (i, a) = timed(l)?;
    let (j, a2) = timed(r)?;
    (a == a2 && i < j).then(|| {
        formula_binding(vec![("$A", Bound::Formula(a.clone())), ("i", Bound::Index(i)), ("j", Bound::Index(j))])
    })
}

fn match_tt(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Imp(l, r) = f else { return None };
    let (i, a) = timed(l)?;
    (a == &**r).then(|| formula_binding(vec![("$A", Bound::Formula(a.clone())), ("i", Bound::Index(i))]))
}

fn match_t4(f: &Formula, _: &LogicSpec) -> Option<Binding> {
    let Formula::Imp(l, r) = f else { return None };
    let (i, a) = timed(l)?;
    let (j, inner) = timed(r)?;
    (inner == &**l && i < j).then(|| {
        formula_binding(vec![("$A", Bound::Formula(a.clone())), ("i", Bound::Index(i)), ("j", Bound::Index(j))])
    })
}
