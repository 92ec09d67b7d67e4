//! Single-world evidence models (M-models) for quantified logics of proofs:
//! term denotation, forcing, validity and the evidence closure conditions.

mod conditions;
mod format;

use std::collections::{BTreeMap, BTreeSet};

pub use conditions::{check_evidence_conditions, check_strong, ConditionReport, Violation};
pub use format::{parse_model, print_model};

use crate::syntax::{all_vars, free_vars, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("no interpretation for `{0}` at these arguments")]
    Uninterpreted(String),
    #[error("`{0}` is outside the language interpreted by M-models")]
    Unsupported(String),
    #[error("evidence for `{formula}` is keyed on `{var}`, which is not free in it")]
    IrrelevantKey { formula: String, var: String },
}

/// Reasons are indices into [`MModel::domain`].
pub type Reason = usize;

/// Finite map from justification variables to reasons. Unmapped variables
/// denote the first reason of the domain.
pub type Valuation = BTreeMap<String, Reason>;

/// A finite operation table with an optional default value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpTable {
    pub entries: BTreeMap<Vec<Reason>, Reason>,
    pub default: Option<Reason>,
}

impl OpTable {
    pub fn constant(r: Reason) -> Self {
        OpTable { entries: BTreeMap::new(), default: Some(r) }
    }

    fn get(&self, args: &[Reason]) -> Option<Reason> {
        self.entries.get(args).copied().or(self.default)
    }
}

/// One evidence fact: `formula` is in `E_agent(reason, v)` for every `v`
/// agreeing with `restriction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub agent: Option<String>,
    pub reason: Reason,
    pub restriction: BTreeMap<String, Reason>,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MModel {
    /// Reason names; never empty.
    pub domain: Vec<String>,
    /// Primitive symbols (constants have arity 0).
    pub prims: BTreeMap<String, OpTable>,
    /// Value of primitive symbols without a table.
    pub prim_default: Option<Reason>,
    pub app: OpTable,
    pub sum: OpTable,
    pub bang: OpTable,
    /// Interpretation of the uniform verifier; absent in models of QLP-.
    pub uall: Option<OpTable>,
    pub evidence: Vec<Evidence>,
    /// Truth of atoms and of fixed-point applications, which are evaluated as atoms.
    pub truth: BTreeMap<Formula, bool>,
    pub truth_default: bool,
    /// Primitive term specification: every `f(x):A` listed obliges `A` as evidence.
    pub spec: Vec<Formula>,
}

impl MModel {
    pub fn reason(&self, name: &str) -> Option<Reason> {
        self.domain.iter().position(|r| r == name)
    }

    fn var(&self, v: &Valuation, x: &str) -> Reason {
        v.get(x).copied().unwrap_or(0)
    }

    /// Membership `a ∈ E_agent(r, v)`.
    pub fn evidenced(&self, agent: Option<&str>, r: Reason, v: &Valuation, a: &Formula) -> bool {
        self.evidence.iter().any(|e| {
            e.agent.as_deref() == agent
                && e.reason == r
                && e.formula == *a
                && e.restriction.iter().all(|(x, ri)| self.var(v, x) == *ri)
        })
    }

    /// Checks the structural invariants: nonempty domain, reasons in range, and
    /// evidence keyed only on free variables of its formula.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        for e in &self.evidence {
            let fv = free_vars(&e.formula);
            if let Some(x) = e.restriction.keys().find(|x| !fv.contains(*x)) {
                return Err(ModelError::IrrelevantKey { formula: e.formula.to_string(), var: x.clone() });
            }
        }
        Ok(())
    }

    fn truth_of(&self, f: &Formula) -> bool {
        self.truth.get(f).copied().unwrap_or(self.truth_default)
    }

    /// Every valuation of `vars` over the domain.
    pub fn valuations(&self, vars: &BTreeSet<String>) -> Vec<Valuation> {
        let mut out = vec![Valuation::new()];
        for x in vars {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.domain.len()).map(move |r| {
                        let mut w = v.clone();
                        w.insert(x.clone(), r);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

fn op(table: &OpTable, name: &str, args: &[Reason]) -> Result<Reason, ModelError> {
    table.get(args).ok_or_else(|| ModelError::Uninterpreted(name.to_string()))
}

fn prim(m: &MModel, f: &str, args: &[Reason]) -> Result<Reason, ModelError> {
    match m.prims.get(f) {
        Some(table) => op(table, f, args),
        None => m.prim_default.ok_or_else(|| ModelError::Uninterpreted(f.to_string())),
    }
}

/// `t^v`.
pub fn denote_term(m: &MModel, v: &Valuation, t: &Term) -> Result<Reason, ModelError> {
    match t {
        Term::Var(x) => Ok(m.var(v, x)),
        Term::Const(c) => prim(m, c, &[]),
        Term::Prim(f, args) => {
            let vals: Vec<Reason> = args.iter().map(|x| m.var(v, x)).collect();
            prim(m, f, &vals)
        }
        Term::App(a, b) => op(&m.app, "*", &[denote_term(m, v, a)?, denote_term(m, v, b)?]),
        Term::Sum(a, b) => op(&m.sum, "+", &[denote_term(m, v, a)?, denote_term(m, v, b)?]),
        Term::Bang(a) => op(&m.bang, "!", &[denote_term(m, v, a)?]),
        Term::UAll(a, x) => {
            let table = m.uall.as_ref().ok_or_else(|| ModelError::Uninterpreted("all".to_string()))?;
            op(table, "all", &[denote_term(m, v, a)?, m.var(v, x)])
        }
        Term::Quest(_) | Term::WQuest(_) => Err(ModelError::Unsupported(t.to_string())),
    }
}

/// `M ⊩_v f`. Quantifiers range over the domain.
pub fn force(m: &MModel, v: &Valuation, f: &Formula) -> Result<bool, ModelError> {
    Ok(match f {
        Formula::Atom(_) | Formula::Fix(..) => m.truth_of(f),
        Formula::Falsum => false,
        Formula::Not(a) => !force(m, v, a)?,
        Formula::And(a, b) => force(m, v, a)? && force(m, v, b)?,
        Formula::Or(a, b) => force(m, v, a)? || force(m, v, b)?,
        Formula::Imp(a, b) => !force(m, v, a)? || force(m, v, b)?,
        Formula::Iff(a, b) => force(m, v, a)? == force(m, v, b)?,
        Formula::Xor(a, b) => force(m, v, a)? != force(m, v, b)?,
        Formula::Just(t, agent, a) => {
            let r = denote_term(m, v, t)?;
            m.evidenced(agent.as_deref(), r, v, a) && force(m, v, a)?
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut w = v.clone();
            let mut result = universal;
            for r in 0..m.domain.len() {
                w.insert(x.clone(), r);
                if force(m, &w, a)? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
        Formula::Boxed(_) | Formula::Knows(..) | Formula::Mu(..) => {
            return Err(ModelError::Unsupported(f.to_string()))
        }
    })
}

/// Valid iff forced under every valuation. Every variable of `f` is ranged
/// over, bound ones included: `(t all x)` denotes through `v(x)`.
pub fn is_valid(m: &MModel, f: &Formula) -> Result<bool, ModelError> {
    for v in m.valuations(&all_vars(f)) {
        if !force(m, &v, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The countermodel family with no evidence at all: every operation is
/// constantly the first reason, and `true_atoms` (atoms or fixed-point
/// applications) are the only true letters.
pub fn empty_evidence_model(domain_size: usize, true_atoms: &[Formula]) -> MModel {
    let domain: Vec<String> = (1..=domain_size.max(1)).map(|i| format!("r{i}")).collect();
    MModel {
        domain,
        prims: BTreeMap::new(),
        prim_default: Some(0),
        app: OpTable::constant(0),
        sum: OpTable::constant(0),
        bang: OpTable::constant(0),
        uall: Some(OpTable::constant(0)),
        evidence: Vec::new(),
        truth: true_atoms.iter().map(|a| (a.clone(), true)).collect(),
        truth_default: false,
        spec: Vec::new(),
    }
}
