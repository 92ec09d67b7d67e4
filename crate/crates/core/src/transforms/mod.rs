//! Proof-to-proof transformations: deduction, substitution, lifting and
//! internalization, plus the formula translations between logics.

mod deduction;
mod lift;
mod translate;

use std::collections::{BTreeMap, BTreeSet};

pub use deduction::deduction;
pub use lift::{internalize_qlp, jug, lift, restricted_qnec, LiftResult};
pub use translate::{
    collapse_agents, collapse_derivation, exists_translate, project, project_derivation,
};

use crate::fixedpoint::FpError;
use crate::kernel::{check_derivation, CheckReport, Derivation, InlineRule, Rule, Step};
use crate::registry::Specification;
use crate::syntax::{subst_term_for_var, Formula, SubstError, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("the input is rejected at step {step}: {msg}")]
    Rejected { step: usize, msg: String },
    #[error("no premise named `{0}`")]
    UnknownPremise(String),
    #[error("{transform} does not apply to logic `{logic}`")]
    WrongLogic { transform: &'static str, logic: String },
    #[error("{transform} does not cover rule {rule} (step {step})")]
    UnsupportedRule { transform: &'static str, rule: &'static str, step: usize },
    #[error("substitution needs the total or the empty specification")]
    ExplicitSpec,
    #[error("{0} needs an axiomatically appropriate (total) specification")]
    NotAppropriate(&'static str),
    #[error("step {step}: `{var}` is the variable of a Gen/qNec step and cannot be substituted")]
    BoundByRule { step: usize, var: String },
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error("the final step depends on premises")]
    PremiseBearing,
    #[error("`{0}` is not an axiom instance")]
    NotAxiom(String),
    #[error("`{var}` occurs free in `{formula}`")]
    VarFree { var: String, formula: String },
    #[error("the final formula is not of the form t:A")]
    NotJustified,
    #[error("axiom {axiom} has no image in {logic}")]
    NoImage { axiom: String, logic: String },
    #[error("inline step {step} derives `{got}`, but the step states `{want}`")]
    InlineMismatch { step: usize, want: String, got: String },
    #[error("internal defect: emitted derivation rejected at step {step}: {msg}")]
    Defect { step: usize, msg: String },
}

/// Expands inline steps, then checks the result.
fn prepare(d: &Derivation) -> Result<(Derivation, CheckReport), TransformError> {
    let d = expand_inlines(d)?;
    let report = check_derivation(&d);
    match &report.first_failure {
        None => Ok((d, report)),
        Some((step, msg)) => Err(TransformError::Rejected { step: *step, msg: msg.clone() }),
    }
}

/// Every emitted derivation passes through here.
fn recheck(d: Derivation) -> Result<Derivation, TransformError> {
    match check_derivation(&d).first_failure {
        None => Ok(d),
        Some((step, msg)) => Err(TransformError::Defect { step, msg }),
    }
}

/// Output of the transform behind one inline step, run on its cone.
fn inline_output(d: &Derivation, r: &InlineRule) -> Result<Derivation, TransformError> {
    match r {
        InlineRule::Lift(i) => lift(&d.cone(*i)).map(|l| l.derivation),
        InlineRule::Internalize(i) => internalize_qlp(&d.cone(*i)).map(|l| l.derivation),
        InlineRule::Subst { step, var, term } => substitute_proof(&d.cone(*step), var, term),
        InlineRule::Deduce { step, premise } => deduction(&d.cone(*step), premise),
    }
}

/// Replaces each inline step by the steps of the transform output it stands
/// for. Citations of the inline step move to the last appended step.
pub fn expand_inlines(d: &Derivation) -> Result<Derivation, TransformError> {
    if !d.steps.iter().any(|s| matches!(s.rule, Rule::Inline(_))) {
        return Ok(d.clone());
    }
    let mut out = d.header_only();
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for s in &d.steps {
        let new = match &s.rule {
            Rule::Inline(r) => {
                let sub = inline_output(d, r)?;
                let got = sub.final_formula().expect("transform outputs have steps");
                if *got != s.formula {
                    return Err(TransformError::InlineMismatch {
                        step: s.index,
                        want: s.formula.to_string(),
                        got: got.to_string(),
                    });
                }
                let mut local = BTreeMap::new();
                for t in &sub.steps {
                    let k = out.push(t.formula.clone(), t.rule.renumber(&|i| local[&i]));
                    local.insert(t.index, k);
                }
                local[&sub.steps.last().expect("nonempty").index]
            }
            rule => out.push(s.formula.clone(), rule.renumber(&|i| map.get(&i).copied().unwrap_or(i))),
        };
        map.insert(s.index, new);
    }
    Ok(out)
}

/// `[t/x]` applied to every premise and step; the image is re-checked.
pub fn substitute_proof(d: &Derivation, x: &str, t: &Term) -> Result<Derivation, TransformError> {
    let (d, _) = prepare(d)?;
    if matches!(d.spec, Specification::Explicit(_)) {
        return Err(TransformError::ExplicitSpec);
    }
    let sub = |f: &Formula| subst_term_for_var(f, x, t);
    let mut out = d.header_only();
    out.premises = d.premises.iter().map(|(n, f)| Ok((n.clone(), sub(f)?))).collect::<Result<_, SubstError>>()?;
    for s in &d.steps {
        let rule = match &s.rule {
            Rule::Gen(_, y) | Rule::QNec(_, y) if y == x => {
                return Err(TransformError::BoundByRule { step: s.index, var: x.to_string() })
            }
            Rule::FpAx(name, args) => Rule::FpAx(name.clone(), args.iter().map(sub).collect::<Result<_, _>>()?),
            r => r.clone(),
        };
        out.steps.push(Step { index: s.index, formula: sub(&s.formula)?, rule });
    }
    recheck(out)
}

/// Names used anywhere in `d`: justification variables and constants.
fn used_names(d: &Derivation) -> BTreeSet<String> {
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(x) | Term::Const(x) => {
                out.insert(x.clone());
            }
            Term::Prim(f, args) => {
                out.insert(f.clone());
                out.extend(args.iter().cloned());
            }
            Term::App(a, b) | Term::Sum(a, b) => {
                term(a, out);
                term(b, out);
            }
            Term::Bang(a) | Term::Quest(a) | Term::WQuest(a) => term(a, out),
            Term::UAll(a, x) => {
                out.insert(x.clone());
                term(a, out);
            }
        }
    }
    fn formula(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Just(t, _, _) => term(t, out),
            Formula::Forall(x, _) | Formula::Exists(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        }
        for c in f.children() {
            formula(c, out);
        }
    }
    let mut out = BTreeSet::new();
    let all = d.premises.iter().map(|(_, f)| f).chain(d.steps.iter().map(|s| &s.formula));
    for f in all {
        formula(f, &mut out);
    }
    for op in &d.fixes {
        formula(&op.body, &mut out);
    }
    out
}

/// Deterministic fresh-name source: constants `c#n` past the largest one in
/// use, and variables `<stem>n` avoiding every used name.
struct Fresh {
    used: BTreeSet<String>,
    next_const: u32,
}

impl Fresh {
    fn new(d: &Derivation) -> Self {
        let used = used_names(d);
        let max = used.iter().filter_map(|n| n.strip_prefix("c#")?.parse::<u32>().ok()).max().unwrap_or(0);
        Fresh { used, next_const: max + 1 }
    }

    fn constant(&mut self) -> Term {
        let c = format!("c#{}", self.next_const);
        self.next_const += 1;
        Term::Const(c)
    }

    fn var(&mut self, stem: &str) -> String {
        let name = (1..).map(|k| format!("{stem}{k}")).find(|n| !self.used.contains(n)).expect("unbounded");
        self.used.insert(name.clone());
        name
    }
}
