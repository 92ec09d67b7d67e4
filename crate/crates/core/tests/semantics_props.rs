mod common;

use common::*;
use proptest::prelude::*;
use proofbench::corpus::DEFAULT_DEPTH;
use proofbench::semantics::{check_evidence_conditions, force, is_valid, parse_model, print_model, ModelError, Valuation};
use proofbench::syntax::{parse, Formula};

proptest! {
    #![proptest_config(ProptestConfig { cases: PROPERTY_CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn forcing_depends_only_on_free_variables(
        f in arb_m_formula(), bytes in arb_bytes(), v in arb_valuation(), w in arb_valuation(),
    ) {
        let m = build_model(&f, &bytes);
        prop_free_var_forcing(&f, &m, &valuation(&m, &v), &valuation(&m, &w))?;
    }

    #[test]
    fn justified_formulas_are_true(t in arb_m_term(), a in arb_m_formula(), bytes in arb_bytes(), v in arb_valuation()) {
        let m = build_model(&Formula::just(t.clone(), a.clone()), &bytes);
        prop_factivity(&t, &a, &m, &valuation(&m, &v))?;
    }

    #[test]
    fn empty_evidence_forces_no_justification(t in arb_m_term(), a in arb_m_formula(), size in 1usize..4, v in arb_valuation()) {
        let vals: Valuation = ["x", "y", "z"].iter().zip(&v).map(|(x, r)| (x.to_string(), r % size)).collect();
        prop_empty_evidence(&t, &a, size, &vals)?;
    }

    #[test]
    fn validity_agrees_with_brute_force(f in arb_m_formula(), bytes in arb_bytes()) {
        let m = build_model(&f, &bytes);
        prop_validity_oracle(&f, &m)?;
    }

    #[test]
    fn model_text_round_trips(f in arb_m_formula(), bytes in arb_bytes()) {
        let m = build_model(&f, &bytes);
        prop_assert_eq!(parse_model(&print_model(&m)), Ok(m));
    }
}

fn model(text: &str) -> proofbench::semantics::MModel {
    parse_model(text).unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn countermodels_validate_fixed_point_axioms() {
    let cases: &[(&str, &[&str])] = &[
        ("cm-13", &["fix(d) <-> ~(ex x) x:fix(d)", "fix(d)"]),
        ("cm-14", &["fix(d; E) <-> (ex x) x:~fix(d; E) | E & ~(ex x) x:(fix(d; E) -> E)", "fix(d; E)"]),
        ("cm-16", &["fix(d; E1, E2) <-> (E1 & ~(ex x) x:(fix(d; E1, E2) -> E1)) xor (E2 & ~(ex x) x:(fix(d; E1, E2) & ~E1 -> E2))", "fix(d; E1, E2)"]),
    ];
    for (id, formulas) in cases {
        let m = model(&std::fs::read_to_string(corpus_dir().join(format!("{id}.mdl"))).unwrap());
        let fs: Vec<Formula> = formulas.iter().map(|f| parse(f).unwrap()).collect();
        let r = check_evidence_conditions(&m, &fs, DEFAULT_DEPTH).unwrap();
        assert!(r.ok(), "{id}: {:?}", r.violations);
        for f in &fs {
            assert_eq!(is_valid(&m, f), Ok(true), "{id}: {f}");
        }
    }
}

#[test]
fn evidence_closure_violations_are_reported() {
    let m = model(
        "domain r1 r2\ninterp app default r2\ninterp sum default r1\ninterp bang default r1\ninterp default r1\n\
         evidence r1 : p -> q\nevidence r1 : p\nevidence r1 : x:p\nevidence r1 : x:(p -> q)\ntruth default = 1",
    );
    let r = check_evidence_conditions(&m, &[], 1).unwrap();
    assert!(r.violations.iter().any(|v| v.condition == "Application"), "{:?}", r.violations);
}

#[test]
fn restricted_evidence_follows_the_valuation() {
    let m = model("domain r1 r2\ninterp default r1\nevidence r1 {x=r2} : x:p\ntruth p = 1");
    let f = parse("c:x:p").unwrap();
    let v = |r: usize| Valuation::from([("x".to_string(), r)]);
    assert_eq!(force(&m, &v(0), &f), Ok(false));
    assert_eq!(is_valid(&m, &f), Ok(false));
    assert_eq!(is_valid(&m, &parse("ex x . c:x:p").unwrap()), Ok(false));
}

#[test]
fn modal_formulas_are_outside_m_models() {
    let m = model("domain r1\ninterp default r1");
    assert!(matches!(force(&m, &Valuation::new(), &parse("[]p").unwrap()), Err(ModelError::Unsupported(_))));
}

#[test]
fn evidence_keyed_on_bound_variable_is_rejected() {
    assert!(matches!(
        parse_model("domain r1 r2\nevidence r1 {y=r2} : x:p"),
        Err(ModelError::IrrelevantKey { .. })
    ));
}

/// The verifier's denotation reads the value of its bound variable, so two
/// valuations agreeing on the free variables can disagree on `(y all x):q`.
#[test]
fn uniform_verifier_reads_its_bound_variable() {
    let m = model("domain r1 r2\ninterp default r1\ninterp all default r1\ninterp all r1 r2 -> r2\nevidence r1 : q\ntruth q = 1");
    let f = parse("(y all x):q").unwrap();
    let at = |x: usize| Valuation::from([("x".to_string(), x), ("y".to_string(), 0)]);
    assert_eq!(force(&m, &at(0), &f), Ok(true));
    assert_eq!(force(&m, &at(1), &f), Ok(false));
    assert_eq!(is_valid(&m, &f), Ok(false));
}
