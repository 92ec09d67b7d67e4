//! Fixed-point operators, their axioms, and mu-calculus closure support.

use std::collections::BTreeMap;

use crate::registry::{Binding, Bound};
use crate::syntax::{
    free_vars, occurrence_check, prop_vars, replace_free_atom, subst_prop, subst_props, subst_term_for_var,
    Formula, OccurrenceMode, SubstError, Term,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FpError {
    #[error("`{p}` is not {mode} in the body of `{name}`")]
    NotEligible { name: String, p: String, mode: String },
    #[error("the body of `{0}` must not contain mu or fix")]
    NotBaseLanguage(String),
    #[error("propositional variable `{var}` of the body of `{name}` is neither the diagonal variable nor a parameter")]
    UndeclaredVariable { name: String, var: String },
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("the body is not {0}-positive")]
    NotPositive(String),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// A diagonal operator `fix(name; q1..qn)` with axiom `fix(name; B) <-> body[fix(name; B)/p, B/q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpOperator {
    pub name: String,
    pub p: String,
    pub params: Vec<String>,
    pub body: Formula,
    pub mode: OccurrenceMode,
}

pub fn mode_name(mode: OccurrenceMode) -> &'static str {
    match mode {
        OccurrenceMode::Modalized => "modalized",
        OccurrenceMode::Justified => "justified",
        OccurrenceMode::ExistsJustified => "exists-justified",
        OccurrenceMode::Positive => "positive",
        OccurrenceMode::SemiPositive => "semi-positive",
    }
}

fn contains_mu_or_fix(f: &Formula) -> bool {
    matches!(f, Formula::Mu(..) | Formula::Fix(..)) || f.children().into_iter().any(contains_mu_or_fix)
}

/// Validates eligibility of `p` in `body` under `mode`.
pub fn make_fp_operator(
    name: &str,
    p: &str,
    params: &[String],
    body: Formula,
    mode: OccurrenceMode,
) -> Result<FpOperator, FpError> {
    if contains_mu_or_fix(&body) {
        return Err(FpError::NotBaseLanguage(name.to_string()));
    }
    if let Some(var) = prop_vars(&body).into_iter().find(|q| q != p && !params.contains(q)) {
        return Err(FpError::UndeclaredVariable { name: name.to_string(), var });
    }
    if !occurrence_check(mode, p, &body) {
        return Err(FpError::NotEligible {
            name: name.to_string(),
            p: p.to_string(),
            mode: mode_name(mode).to_string(),
        });
    }
    Ok(FpOperator { name: name.to_string(), p: p.to_string(), params: params.to_vec(), body, mode })
}

impl FpOperator {
    fn check_arity(&self, args: &[Formula]) -> Result<(), FpError> {
        if args.len() != self.params.len() {
            return Err(FpError::Arity { name: self.name.clone(), expected: self.params.len(), got: args.len() });
        }
        Ok(())
    }

    fn unfold(&self, body: &Formula, args: &[Formula]) -> Result<Formula, FpError> {
        let node = Formula::Fix(self.name.clone(), args.to_vec());
        let mut map = BTreeMap::from([(self.p.clone(), node)]);
        for (q, a) in self.params.iter().zip(args) {
            map.insert(q.clone(), a.clone());
        }
        Ok(subst_props(body, &map)?)
    }

    /// True iff `f` is `fix(name; args) <-> body'(..)` where `body'` is the body
    /// with its free justification variables replaced by arbitrary terms.
    /// Those variables are schematic, as the substitution lemma requires.
    pub fn is_axiom_instance(&self, f: &Formula) -> bool {
        let Formula::Iff(l, r) = f else { return false };
        let Formula::Fix(name, args) = &**l else { return false };
        if *name != self.name || self.check_arity(args).is_err() {
            return false;
        }
        let mut template = self.body.clone();
        for x in free_vars(&self.body) {
            match subst_term_for_var(&template, &x, &Term::Var(format!("${x}"))) {
                Ok(t) => template = t,
                Err(_) => return false,
            }
        }
        match self.unfold(&template, args) {
            Ok(t) => crate::registry::match_with_metavariables(&t, r, &mut Binding::new()),
            Err(_) => false,
        }
    }

    /// Binding of the schematic justification variables for an instance.
    pub fn instance_binding(&self, f: &Formula) -> Option<Binding> {
        let Formula::Iff(l, r) = f else { return None };
        let Formula::Fix(_, args) = &**l else { return None };
        let mut template = self.body.clone();
        for x in free_vars(&self.body) {
            template = subst_term_for_var(&template, &x, &Term::Var(format!("${x}"))).ok()?;
        }
        let t = self.unfold(&template, args).ok()?;
        let mut b = Binding::new();
        crate::registry::match_with_metavariables(&t, r, &mut b).then_some(b)
    }
}

/// `fix(name; args) <-> body[fix(name; args)/p, args/params]`.
pub fn fp_axiom(op: &FpOperator, args: &[Formula]) -> Result<Formula, FpError> {
    op.check_arity(args)?;
    let node = Formula::Fix(op.name.clone(), args.to_vec());
    Ok(Formula::iff(node, op.unfold(&op.body, args)?))
}

/// `A(mu p.A) <-> mu p.A`.
pub fn mu_closure_instance(p: &str, a: &Formula) -> Result<Formula, FpError> {
    if !occurrence_check(OccurrenceMode::Positive, p, a) {
        return Err(FpError::NotPositive(p.to_string()));
    }
    let mu = Formula::mu(p, a.clone());
    Ok(Formula::iff(subst_prop(a, p, &mu)?, mu))
}

/// `nu p.A` as `~mu p.~A(~p)`.
pub fn nu_expand(p: &str, a: &Formula) -> Result<Formula, FpError> {
    if !occurrence_check(OccurrenceMode::Positive, p, a) {
        return Err(FpError::NotPositive(p.to_string()));
    }
    let flipped = replace_free_atom(a, p, &Formula::not(Formula::atom(p)));
    Ok(Formula::not(Formula::mu(p, Formula::not(flipped))))
}

/// The GL fixed-point equation `D <-> A(D, q)` for a candidate `D`; the
/// caller discharges it with a GL derivation.
pub fn gl_fixedpoint_obligation(p: &str, a: &Formula, candidate: &Formula) -> Result<Formula, FpError> {
    if !occurrence_check(OccurrenceMode::Modalized, p, a) {
        return Err(FpError::NotEligible {
            name: "obligation".to_string(),
            p: p.to_string(),
            mode: mode_name(OccurrenceMode::Modalized).to_string(),
        });
    }
    Ok(Formula::iff(candidate.clone(), subst_prop(a, p, candidate)?))
}

/// Terms bound to the schematic variables of a fixed-point instance, by variable name.
pub fn schematic_terms(b: &Binding) -> BTreeMap<String, Term> {
    b.iter()
        .filter_map(|(k, v)| match v {
            Bound::Term(t) => Some((k.trim_start_matches('$').to_string(), t.clone())),
            _ => None,
        })
        .collect()
}
