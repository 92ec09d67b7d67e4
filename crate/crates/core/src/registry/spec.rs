use std::collections::BTreeSet;

use crate::syntax::{Formula, Term};

use super::{LogicSpec, SpecKind};

/// Which necessitation instances (`c:A`, `f(x):A`) a derivation may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specification {
    /// Every prefixed axiom instance; membership is decided by stripping prefixes.
    Total,
    Empty,
    Explicit(BTreeSet<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("`{0}` is not of the licensed shape (a constant prefix over an axiom instance)")]
    MalformedConstant(String),
    #[error("`{0}` is not of the licensed shape (a primitive term over an axiom instance)")]
    MalformedPrimitive(String),
    #[error("logic `{0}` has no specification")]
    NoSpecification(String),
}

fn is_constant(t: &Term) -> bool {
    matches!(t, Term::Const(_))
}

fn is_primitive(t: &Term) -> bool {
    matches!(t, Term::Const(_) | Term::Prim(..))
}

/// Cores of `f` below 1, 2, ... leading prefixes accepted by `prefix`.
fn cores(f: &Formula, prefix: fn(&Term) -> bool) -> Vec<&Formula> {
    let mut out = Vec::new();
    let mut cur = f;
    while let Formula::Just(t, _, a) = cur {
        if !prefix(t) {
            break;
        }
        out.push(&**a);
        cur = a;
    }
    out
}

/// Checks the shape of a candidate and decides membership. `extra_axiom`
/// accepts further axiom instances the logic gets from a derivation's
/// declarations (fixed-point axioms).
pub fn spec_membership_with(
    spec: &Specification,
    f: &Formula,
    logic: &LogicSpec,
    extra_axiom: &dyn Fn(&Formula) -> bool,
) -> Result<bool, SpecError> {
    let is_axiom = |g: &Formula| logic.match_axiom(g).is_some() || extra_axiom(g);
    let licensed = match logic.spec_kind {
        SpecKind::None => return Err(SpecError::NoSpecification(logic.id.clone())),
        SpecKind::Constant => {
            let cs = cores(f, is_constant);
            if cs.is_empty() {
                return Err(SpecError::MalformedConstant(f.to_string()));
            }
            cs.into_iter().any(is_axiom)
        }
        SpecKind::PrimitiveTerm => match f {
            Formula::Just(t, _, a) if is_primitive(t) => is_axiom(a),
            _ => return Err(SpecError::MalformedPrimitive(f.to_string())),
        },
    };
    Ok(match spec {
        Specification::Total => licensed,
        Specification::Empty => false,
        Specification::Explicit(set) => licensed && set.contains(f),
    })
}

pub fn spec_membership(spec: &Specification, f: &Formula, logic: &LogicSpec) -> Result<bool, SpecError> {
    spec_membership_with(spec, f, logic, &|_| false)
}
