use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{all_vars, free_vars, subterms, Formula, Term};

use super::{denote_term, force, MModel, ModelError, Reason, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub agent: Option<String>,
    pub valuation: Valuation,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.condition)?;
        if let Some(a) = &self.agent {
            write!(f, " [agent {a}]")?;
        }
        let v: Vec<String> = self.valuation.iter().map(|(x, r)| format!("{x}={r}")).collect();
        write!(f, " at {{{}}}: {}", v.join(", "), self.witness)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionReport {
    /// Conditions examined, in order.
    pub checked: Vec<&'static str>,
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn agents(m: &MModel) -> Vec<Option<String>> {
    let mut out: BTreeSet<Option<String>> = m.evidence.iter().map(|e| e.agent.clone()).collect();
    out.insert(None);
    out.into_iter().collect()
}

/// Formulas in `E_agent(r, v)`.
fn evidence_at(m: &MModel, agent: &Option<String>, r: Reason, v: &Valuation) -> Vec<Formula> {
    let mut out: Vec<Formula> = m
        .evidence
        .iter()
        .filter(|e| &e.agent == agent && e.reason == r)
        .filter(|e| e.restriction.iter().all(|(x, ri)| v.get(x).copied().unwrap_or(0) == *ri))
        .map(|e| e.formula.clone())
        .collect();
    out.dedup();
    out
}

/// Candidate terms for the proof-checker and uniform-verifier conditions:
/// subterms of the universe and the evidence, closed `depth` times under `!`.
fn candidate_terms(m: &MModel, universe: &[Formula], depth: usize) -> Vec<Term> {
    let mut terms: Vec<Term> = Vec::new();
    for f in universe.iter().chain(m.evidence.iter().map(|e| &e.formula)) {
        for t in subterms(f) {
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
    }
    let mut layer = terms.clone();
    for _ in 0..depth {
        layer = layer.into_iter().map(Term::bang).filter(|t| !terms.contains(t)).collect();
        terms.extend(layer.iter().cloned());
    }
    terms
}

/// Checks Application, Sum, Proof checker, Primitive proof term and, when the
/// model interprets the uniform verifier, its closure condition. The evidence
/// table is finite, so Application and Sum are checked exactly; the
/// conditions quantifying over terms range over [`candidate_terms`].
pub fn check_evidence_conditions(m: &MModel, universe: &[Formula], depth: usize) -> Result<ConditionReport, ModelError> {
    m.validate()?;
    let mut report = ConditionReport {
        checked: vec!["Application", "Sum", "Proof checker", "Primitive proof term"],
        violations: Vec::new(),
    };
    if m.uall.is_some() {
        report.checked.push("Uniform verifier");
    }
    let terms = candidate_terms(m, universe, depth);
    let mut vars: BTreeSet<String> = BTreeSet::new();
    for f in universe.iter().chain(m.evidence.iter().map(|e| &e.formula)).chain(&m.spec) {
        vars.extend(all_vars(f));
    }
    for e in &m.evidence {
        vars.extend(e.restriction.keys().cloned());
    }
    let n = m.domain.len();
    for v in m.valuations(&vars) {
        for agent in agents(m) {
            let ev: Vec<Vec<Formula>> = (0..n).map(|r| evidence_at(m, &agent, r, &v)).collect();
            let mut violate = |condition: &'static str, witness: String| {
                report.violations.push(Violation { condition, agent: agent.clone(), valuation: v.clone(), witness });
            };
            for r in 0..n {
                for r2 in 0..n {
                    let rr = |table: &super::OpTable, name: &str| super::op(table, name, &[r, r2]);
                    if !ev[r].is_empty() && !ev[r2].is_empty() {
                        let app = rr(&m.app, "*")?;
                        for f in &ev[r] {
                            if let Formula::Imp(a, b) = f {
                                if ev[r2].contains(a) && !ev[app].contains(b) {
                                    violate(
                                        "Application",
                                        format!("`{f}` at {}, `{a}` at {}, `{b}` missing at {}", m.domain[r], m.domain[r2], m.domain[app]),
                                    );
                                }
                            }
                        }
                    }
                    if !ev[r].is_empty() || !ev[r2].is_empty() {
                        let s = rr(&m.sum, "+")?;
                        for f in ev[r].iter().chain(&ev[r2]) {
                            if !ev[s].contains(f) {
                                violate("Sum", format!("`{f}` missing at {} = {} + {}", m.domain[s], m.domain[r], m.domain[r2]));
                            }
                        }
                    }
                }
            }
            for t in &terms {
                let r = denote_term(m, &v, t)?;
                if ev[r].is_empty() {
                    continue;
                }
                let b = super::op(&m.bang, "!", &[r])?;
                for a in &ev[r] {
                    let ta = Formula::just_by(t.clone(), agent.clone(), a.clone());
                    if !m.evidenced(agent.as_deref(), b, &v, &ta) {
                        violate("Proof checker", format!("`{ta}` missing at {}", m.domain[b]));
                    }
                }
            }
            for entry in &m.spec {
                let Formula::Just(t, ag, a) = entry else { continue };
                if *ag != agent {
                    continue;
                }
                let r = denote_term(m, &v, t)?;
                if !ev[r].contains(a) {
                    violate("Primitive proof term", format!("`{a}` missing at {} for `{entry}`", m.domain[r]));
                }
            }
            if let Some(uall) = &m.uall {
                check_uniform(m, uall, &agent, &v, &terms, &mut violate)?;
            }
        }
    }
    Ok(report)
}

/// If `A ∈ E(t^{v[x:=r]}, v[x:=r])` for every `r`, then `(all x)A ∈ E((t all x)^v, v)`.
fn check_uniform(
    m: &MModel,
    uall: &super::OpTable,
    agent: &Option<String>,
    v: &Valuation,
    terms: &[Term],
    violate: &mut dyn FnMut(&'static str, String),
) -> Result<(), ModelError> {
    let candidates: BTreeSet<&Formula> = m.evidence.iter().filter(|e| &e.agent == agent).map(|e| &e.formula).collect();
    let xs: BTreeSet<String> = candidates.iter().flat_map(|f| free_vars(f)).collect();
    for t in terms {
        for x in &xs {
            for a in &candidates {
                let everywhere = (0..m.domain.len()).try_fold(true, |acc, r| -> Result<bool, ModelError> {
                    let mut w = v.clone();
                    w.insert(x.clone(), r);
                    Ok(acc && m.evidenced(agent.as_deref(), denote_term(m, &w, t)?, &w, a))
                })?;
                if everywhere {
                    let target = super::op(uall, "all", &[denote_term(m, v, t)?, v.get(x).copied().unwrap_or(0)])?;
                    let fa = Formula::forall(x, (*a).clone());
                    if !m.evidenced(agent.as_deref(), target, v, &fa) {
                        violate("Uniform verifier", format!("`{fa}` missing at {}", m.domain[target]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Strong models evidence every forced formula: for each `A` in the universe
/// and each valuation with `M ⊩_v A`, some reason evidences `A`.
pub fn check_strong(m: &MModel, universe: &[Formula]) -> Result<ConditionReport, ModelError> {
    m.validate()?;
    let mut report = ConditionReport { checked: vec!["Strong"], violations: Vec::new() };
    for a in universe {
        for v in m.valuations(&all_vars(a)) {
            if !force(m, &v, a)? {
                continue;
            }
            let agents = agents(m);
            let found = (0..m.domain.len()).any(|r| agents.iter().any(|ag| m.evidenced(ag.as_deref(), r, &v, a)));
            if !found {
                report.violations.push(Violation {
                    condition: "Strong",
                    agent: None,
                    valuation: v,
                    witness: format!("`{a}` is forced but has no reason"),
                });
            }
        }
    }
    Ok(report)
}
