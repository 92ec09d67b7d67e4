use std::collections::BTreeMap;

use crate::kernel::{rule_name, Derivation, Rule};
use crate::syntax::Formula;

use super::{prepare, recheck, TransformError};

struct Builder<'a> {
    a: &'a Formula,
    out: Derivation,
    /// Copies of steps that do not depend on the discharged premise.
    plain: BTreeMap<usize, usize>,
    /// Steps proving `A -> F_k`.
    imp: BTreeMap<usize, usize>,
}

impl Builder<'_> {
    fn formula(&self, k: usize) -> &Formula {
        &self.out.step(k).expect("emitted step").formula
    }

    fn taut(&mut self, f: Formula) -> usize {
        self.out.push(f, Rule::Axiom("Taut".to_string()))
    }

    /// `A -> F_k`, weakening a plain copy on first request.
    fn implication(&mut self, k: usize) -> usize {
        if let Some(&i) = self.imp.get(&k) {
            return i;
        }
        let p = self.plain[&k];
        let f = self.formula(p).clone();
        let weaken = self.taut(Formula::imp(f.clone(), Formula::imp(self.a.clone(), f.clone())));
        let i = self.out.push(Formula::imp(self.a.clone(), f), Rule::Mp(p, weaken));
        self.imp.insert(k, i);
        i
    }
}

/// Discharges `premise`: from `S, A |- B` builds `S |- A -> B`.
pub fn deduction(d: &Derivation, premise: &str) -> Result<Derivation, TransformError> {
    let (d, report) = prepare(d)?;
    let a = d.premise(premise).ok_or_else(|| TransformError::UnknownPremise(premise.to_string()))?.clone();
    let depends: BTreeMap<usize, bool> = report.steps.iter().map(|v| (v.index, v.deps.contains(premise))).collect();
    let mut out = d.header_only();
    out.premises.retain(|(n, _)| n != premise);
    let mut b = Builder { a: &a, out, plain: BTreeMap::new(), imp: BTreeMap::new() };
    for s in &d.steps {
        if !depends[&s.index] {
            let k = b.out.push(s.formula.clone(), s.rule.renumber(&|i| b.plain[&i]));
            b.plain.insert(s.index, k);
            continue;
        }
        let a_to = |f: &Formula| Formula::imp(a.clone(), f.clone());
        let k = match &s.rule {
            // Only the discharged premise itself depends on it directly.
            Rule::Premise(_) => b.taut(a_to(&a)),
            Rule::Mp(i, j) => {
                let fi = &d.step(*i).expect("cited").formula;
                let (g, gf) = if d.step(*j).expect("cited").formula == Formula::imp(fi.clone(), s.formula.clone()) {
                    (*i, *j)
                } else {
                    (*j, *i)
                };
                let g_formula = d.step(g).expect("cited").formula.clone();
                let ag = b.implication(g);
                let agf = b.implication(gf);
                let conclusion = Formula::imp(a_to(&g_formula), a_to(&s.formula));
                let dist = b.taut(Formula::imp(b.formula(agf).clone(), conclusion.clone()));
                let m = b.out.push(conclusion, Rule::Mp(agf, dist));
                b.out.push(a_to(&s.formula), Rule::Mp(ag, m))
            }
            Rule::TautCons(is) => {
                let refs = is.iter().map(|i| if depends[i] { b.imp[i] } else { b.plain[i] }).collect();
                b.out.push(a_to(&s.formula), Rule::TautCons(refs))
            }
            // Everything else is premise-free by the kernel's discipline, except
            // AdmissibleK, whose premises cannot be discharged.
            other => {
                return Err(TransformError::UnsupportedRule {
                    transform: "deduction",
                    rule: rule_name(other),
                    step: s.index,
                })
            }
        };
        b.imp.insert(s.index, k);
    }
    let last = d.steps.last().expect("accepted derivations have steps").index;
    b.implication(last);
    let mut out = b.out;
    // The conclusion must come last; re-emit it if weakening left it earlier.
    let k = b.imp[&last];
    if out.steps.last().map(|s| s.index) != Some(k) {
        let f = out.step(k).expect("emitted").formula.clone();
        out.push(f, Rule::TautCons(vec![k]));
    }
    recheck(out)
}
