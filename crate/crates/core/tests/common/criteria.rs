//! One function per acceptance criterion. Each returns a short summary on
//! success and the first discrepancy on failure; the acceptance harness prints
//! them and the integration tests assert them.

use proptest::prelude::*;
use proptest::strategy::ValueTree;

use proofbench::corpus::{load_manifest, run_corpus, DEFAULT_DEPTH};
use proofbench::fixedpoint::fp_axiom;
use proofbench::kernel::{check_derivation, Derivation, InlineRule, Rule};
use proofbench::registry::projection_target;
use proofbench::semantics::{check_evidence_conditions, is_valid, parse_model};
use proofbench::syntax::{parse, Formula, Term};
use proofbench::transforms::{deduction, lift, project_derivation};

use super::*;

pub type Outcome = Result<String, String>;

/// Entries whose derivations end in falsum.
pub const INCONSISTENCY: &[&str] = &[
    "modal-knower",
    "modal-examiner",
    "modal-believer",
    "jl-knower",
    "jl-believer",
    "qlp-knower",
    "qlp-examiner",
    "ts4-bot",
];

pub fn corpus_replay() -> Outcome {
    let results = run_corpus(&corpus_dir(), "*").map_err(|e| e.to_string())?;
    if let Some(bad) = results.iter().find(|r| !r.passed) {
        return Err(bad.to_string());
    }
    let derivations = derivation_ids();
    if derivations.len() < 20 {
        return Err(format!("only {} derivation entries", derivations.len()));
    }
    for id in INCONSISTENCY {
        let d = corpus_derivation(id);
        let r = check_derivation(&d);
        if !r.accepted() || r.final_formula != Some(Formula::Falsum) {
            return Err(format!("{id} does not derive false: {:?} {:?}", r.first_failure, r.final_formula));
        }
    }
    Ok(format!("{} entries ({} derivations) replayed; {} end in false", results.len(), derivations.len(), INCONSISTENCY.len()))
}

/// Countermodel id, the derivation whose operator it refutes, operator arguments.
const COUNTERMODELS: &[(&str, &str, &[&str])] = &[
    ("cm-13", "qlp-knower", &[]),
    ("cm-14", "qlp-examiner", &["E"]),
    ("cm-15", "qlp-oneday", &["E"]),
    ("cm-16", "qlp-twoday", &["E1", "E2"]),
];

pub fn countermodels() -> Outcome {
    let manifest = load_manifest(&corpus_dir()).map_err(|e| e.to_string())?;
    for (id, source, args) in COUNTERMODELS {
        let entry = manifest.iter().find(|e| e.id == *id).ok_or_else(|| format!("{id} missing from manifest"))?;
        let text = std::fs::read_to_string(corpus_dir().join(&entry.file)).map_err(|e| e.to_string())?;
        let m = parse_model(&text).map_err(|e| format!("{id}: {e}"))?;
        let d = corpus_derivation(source);
        let op = d.fixes.first().ok_or_else(|| format!("{source} declares no operator"))?;
        let args: Vec<Formula> = args.iter().map(|a| parse(a).unwrap()).collect();
        let axiom = fp_axiom(op, &args).map_err(|e| e.to_string())?;
        let delta = Formula::Fix(op.name.clone(), args);
        let universe = vec![axiom.clone(), delta.clone()];
        let report = check_evidence_conditions(&m, &universe, DEFAULT_DEPTH).map_err(|e| e.to_string())?;
        if !report.ok() {
            return Err(format!("{id}: {}", report.violations[0]));
        }
        for f in &universe {
            if is_valid(&m, f) != Ok(true) {
                return Err(format!("{id} does not validate `{f}`"));
            }
        }
    }
    Ok(format!("{} models satisfy the evidence conditions and validate their axiom and delta", COUNTERMODELS.len()))
}

/// Premise-free justification-logic derivations of the corpus that lifting covers.
pub const LIFTABLE: &[&str] =
    &["jd-lemma", "jl-knower", "jl-believer", "jl-believer-j4", "egl-fp", "jmu-closure", "mu-trivial-j"];

fn lp_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(&["x", "y"][..]).prop_map(Term::var),
        Just(Term::constant("a")),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sum(a, b)),
            inner.prop_map(Term::bang),
        ]
    })
}

fn lp_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop::sample::select(&["p", "q", "r"][..]).prop_map(Formula::atom),
        Just(Formula::Falsum)
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (lp_term(), inner).prop_map(|(t, a)| Formula::just(t, a)),
        ]
    })
}

/// A premise-free LP derivation using every LP rule and axiom kind, cut at `len` steps.
pub fn lp_derivation(a: Formula, b: Formula, t: Term, s: Term, len: usize) -> Derivation {
    let c = Term::constant("c");
    let ta = Formula::just(t.clone(), a.clone());
    let fact = Formula::imp(ta.clone(), a.clone());
    let c_fact = Formula::just(c.clone(), fact.clone());
    let mut d = Derivation::new("LP");
    let steps: Vec<(Formula, Rule)> = vec![
        (fact.clone(), Rule::Axiom("jT".into())),
        (Formula::imp(fact.clone(), Formula::imp(b.clone(), fact.clone())), Rule::Axiom("Taut".into())),
        (Formula::imp(b.clone(), fact.clone()), Rule::Mp(1, 2)),
        (c_fact.clone(), Rule::Ian),
        (Formula::imp(c_fact.clone(), Formula::just(Term::bang(c.clone()), c_fact.clone())), Rule::Axiom("j4".into())),
        (Formula::just(Term::bang(c.clone()), c_fact.clone()), Rule::Mp(4, 5)),
        (Formula::imp(c_fact.clone(), Formula::just(Term::sum(c.clone(), s.clone()), fact.clone())), Rule::Axiom("Sum".into())),
        (Formula::just(Term::sum(c.clone(), s), fact.clone()), Rule::Mp(4, 7)),
        (
            Formula::imp(c_fact.clone(), Formula::imp(Formula::just(Term::var("z"), ta.clone()), Formula::just(Term::app(c.clone(), Term::var("z")), a.clone()))),
            Rule::Axiom("jK".into()),
        ),
        (Formula::imp(Formula::just(Term::var("z"), ta), Formula::just(Term::app(c, Term::var("z")), a)), Rule::Mp(4, 9)),
        (Formula::not(Formula::not(Formula::imp(b, fact))), Rule::TautCons(vec![3])),
    ];
    for (f, r) in steps.into_iter().take(len.clamp(1, 11)) {
        d.push(f, r);
    }
    d
}

fn lift_ok(d: &Derivation) -> Result<(), String> {
    accepted(d).map_err(|e| format!("source rejected: {e}"))?;
    let f = d.final_formula().cloned().ok_or("empty derivation")?;
    let l = lift(d).map_err(|e| e.to_string())?;
    accepted(&l.derivation).map_err(|e| format!("lifted derivation rejected: {e}"))?;
    let want = Formula::just(l.term.clone(), f);
    if l.derivation.final_formula() != Some(&want) {
        return Err(format!("lifted final is not `{want}`"));
    }
    Ok(())
}

pub fn internalization(generated: u32) -> Outcome {
    for id in LIFTABLE {
        lift_ok(&corpus_derivation(id)).map_err(|e| format!("{id}: {e}"))?;
    }
    let mut runner = runner(generated);
    let strategy = (lp_formula(), lp_formula(), lp_term(), lp_term(), 1usize..=11);
    let mut count = 0;
    for _ in 0..generated {
        let (a, b, t, s, len) = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let d = lp_derivation(a, b, t, s, len);
        lift_ok(&d).map_err(|e| format!("generated LP derivation:\n{d}\n{e}"))?;
        count += 1;
    }
    Ok(format!("{} corpus and {count} generated derivations lift to t:F", LIFTABLE.len()))
}

/// Source derivation and the logic its projection must check in.
pub const PROJECTIONS: &[(&str, &str)] = &[
    ("jl-believer-j4", "K4(FP)"),
    ("jl-believer", "D4(FP)"),
    ("jl-knower", "T(FP)"),
    ("mu-trivial-j", "K(mu)"),
    ("jmu-induction", "K(mu)"),
    ("jmu-closure", "K(mu)"),
];

pub fn projection() -> Outcome {
    for (id, target) in PROJECTIONS {
        let d = corpus_derivation(id);
        if projection_target(&d.logic).as_deref() != Some(*target) {
            return Err(format!("{id}: {} projects to {:?}", d.logic, projection_target(&d.logic)));
        }
        let p = project_derivation(&d).map_err(|e| format!("{id}: {e}"))?;
        if p.logic != *target {
            return Err(format!("{id}: projected into {}", p.logic));
        }
        accepted(&p).map_err(|e| format!("{id} projected into {target}: {e}"))?;
        let want = proofbench::transforms::project(d.final_formula().unwrap());
        if p.final_formula() != Some(&want) {
            return Err(format!("{id}: projected final is not `{want}`"));
        }
    }
    Ok(format!("{} projections check in their modal counterparts", PROJECTIONS.len()))
}

pub const PREMISE_BEARING: &[&str] = &["tk-surprise", "tt-surprise", "ts4-surprise", "ts4-bot"];

/// Discharges each premise the final step uses, then re-applies MP to it.
pub fn deduction_round_trip() -> Outcome {
    let mut trips = 0;
    for id in PREMISE_BEARING {
        let d = corpus_derivation(id);
        let report = check_derivation(&d);
        let goal = report.final_formula.clone().ok_or("no final formula")?;
        if report.final_deps.is_empty() {
            return Err(format!("{id} has no premise-dependent conclusion"));
        }
        for name in &report.final_deps {
            let premise = d.premise(name).unwrap().clone();
            let mut out = deduction(&d, name).map_err(|e| format!("{id}/{name}: {e}"))?;
            let r = check_derivation(&out);
            if !r.accepted() || r.final_deps.contains(name) {
                return Err(format!("{id}/{name}: deduced derivation rejected or still uses {name}: {:?}", r.first_failure));
            }
            let imp = Formula::imp(premise.clone(), goal.clone());
            if out.final_formula() != Some(&imp) {
                return Err(format!("{id}/{name}: deduced final is not `{imp}`"));
            }
            if out.premise(name).is_none() {
                out.premises.push((name.clone(), premise.clone()));
            }
            let last = out.steps.last().unwrap().index;
            let p = out.push(premise, Rule::Premise(name.clone()));
            out.push(goal.clone(), Rule::Mp(p, last));
            let r = check_derivation(&out);
            if !r.accepted() || r.final_formula.as_ref() != Some(&goal) || r.final_deps != report.final_deps {
                return Err(format!("{id}/{name}: MP does not recover the conclusion: {:?}", r.first_failure));
            }
            trips += 1;
        }
    }
    Ok(format!("{trips} premise discharges over {} derivations round-trip", PREMISE_BEARING.len()))
}

pub fn oracles(generated: u32) -> Outcome {
    let mut taut = 0;
    for (goal, cited) in corpus_prop_steps() {
        let prems: Vec<&Formula> = cited.iter().collect();
        let mut cases: Vec<&[&Formula]> = vec![&[]];
        if !prems.is_empty() {
            cases.push(&prems);
        }
        for ps in cases {
            let mut fs = ps.to_vec();
            fs.push(&goal);
            if truth_letters(&fs).len() > 5 {
                continue;
            }
            if proofbench::kernel::taut_consequence(&goal, ps) != truth_table_consequence(&goal, ps) {
                return Err(format!("taut_consequence disagrees on `{goal}` from {} premises", ps.len()));
            }
            taut += 1;
        }
    }
    let mut runner = runner(generated);
    runner
        .run(&(arb_m_formula(), arb_bytes()), |(f, bytes)| prop_validity_oracle(&f, &build_model(&f, &bytes)))
        .map_err(|e| e.to_string())?;
    Ok(format!("{taut} tautological-consequence and {generated} validity comparisons agree"))
}

pub fn invariants(cases: u32) -> Outcome {
    let run = |name: &str, result: Result<(), String>| result.map_err(|e| format!("{name}: {e}"));
    run("round trip", runner(cases).run(&arb_formula(), |f| prop_roundtrip(&f)).map_err(|e| e.to_string()))?;
    run("term round trip", runner(cases).run(&arb_term(), |t| prop_term_roundtrip(&t)).map_err(|e| e.to_string()))?;
    run(
        "substitution",
        runner(cases)
            .run(&(arb_formula(), prop::sample::select(&["x", "y", "z"][..]), arb_term()), |(f, x, t)| prop_subst(&f, x, &t))
            .map_err(|e| e.to_string()),
    )?;
    run("occurrence", runner(cases).run(&arb_formula(), |f| prop_occurrence(&f)).map_err(|e| e.to_string()))?;
    run("exists-justified", runner(cases).run(&arb_exists_just_formula(), |f| prop_occurrence(&f)).map_err(|e| e.to_string()))?;
    run(
        "free-variable forcing",
        runner(cases)
            .run(&(arb_m_formula(), arb_bytes(), arb_valuation(), arb_valuation()), |(f, bytes, v, w)| {
                let m = build_model(&f, &bytes);
                prop_free_var_forcing(&f, &m, &valuation(&m, &v), &valuation(&m, &w))
            })
            .map_err(|e| e.to_string()),
    )?;
    run(
        "factivity",
        runner(cases)
            .run(&(arb_m_term(), arb_m_formula(), arb_bytes(), arb_valuation()), |(t, a, bytes, v)| {
                let m = build_model(&Formula::just(t.clone(), a.clone()), &bytes);
                prop_factivity(&t, &a, &m, &valuation(&m, &v))
            })
            .map_err(|e| e.to_string()),
    )?;
    run(
        "empty evidence",
        runner(cases)
            .run(&(arb_m_term(), arb_m_formula(), 1usize..4, arb_valuation()), |(t, a, n, v)| {
                let vals = ["x", "y", "z"].iter().zip(&v).map(|(x, r)| (x.to_string(), r % n)).collect();
                prop_empty_evidence(&t, &a, n, &vals)
            })
            .map_err(|e| e.to_string()),
    )?;
    Ok(format!("8 properties x {cases} cases hold"))
}

/// The first step of `d` that needs qNec, directly or through internalization.
fn first_qnec_step(d: &Derivation) -> Option<usize> {
    d.steps
        .iter()
        .find(|s| matches!(s.rule, Rule::QNec(..) | Rule::Inline(InlineRule::Internalize(_))))
        .map(|s| s.index)
}

/// The two QLP(FP) scripts read in QLP-(FP) must fail exactly at the step that
/// first needs qNec, and nowhere earlier.
pub fn negative_controls() -> Outcome {
    let mut out = Vec::new();
    for id in ["qlp-knower", "qlp-examiner"] {
        let src = corpus_derivation(id);
        let step = first_qnec_step(&src).ok_or_else(|| format!("{id} never uses qNec"))?;
        let d = src.retarget("QLP-(FP)").map_err(|e| format!("{id}: {e}"))?;
        let r = check_derivation(&d);
        match r.first_failure {
            Some((s, msg)) if s == step => out.push(format!("{id} rejected at step {s}: {msg}")),
            other => return Err(format!("{id}: expected rejection at step {step}, got {other:?}")),
        }
    }
    Ok(out.join("; "))
}
