use std::collections::BTreeMap;

use crate::kernel::{rule_name, Derivation, Rule};
use crate::registry::{get_logic, Family, RuleKind, Specification};
use crate::syntax::{free_vars, Formula, Term};

use super::{prepare, recheck, Fresh, TransformError};

/// A term `t(x1..xn)` and a derivation of `t:F` from `x1:A1, .., xn:An`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    pub term: Term,
    /// The fresh variables, in premise order.
    pub vars: Vec<String>,
    pub derivation: Derivation,
}

struct Lifter<'a> {
    transform: &'static str,
    src: &'a Derivation,
    out: Derivation,
    fresh: Fresh,
    /// Necessitation of an axiom instance: IAN (constants) or AN (primitive terms).
    necessitation: Rule,
    /// Source step -> (term, emitted step proving `term:F`).
    lifted: BTreeMap<usize, (Term, usize)>,
}

impl Lifter<'_> {
    fn formula(&self, k: usize) -> &Formula {
        &self.out.step(k).expect("emitted step").formula
    }

    fn axiom(&mut self, f: Formula, id: &str) -> usize {
        self.out.push(f, Rule::Axiom(id.to_string()))
    }

    /// `c:F` for a fresh constant `c`.
    fn necessitate(&mut self, f: &Formula) -> (Term, usize) {
        let c = self.fresh.constant();
        let k = self.out.push(Formula::just(c.clone(), f.clone()), self.necessitation.clone());
        (c, k)
    }

    /// From `u:(G -> F)` and `v:G` derive `(u*v):F` by jK and MP.
    fn apply(&mut self, (u, ku): (Term, usize), (v, kv): (Term, usize)) -> (Term, usize) {
        let Formula::Just(_, _, gf) = self.formula(ku).clone() else { unreachable!("lifted steps are t:F") };
        let Formula::Imp(g, f) = *gf.clone() else { unreachable!("cited implication") };
        let uv = Term::app(u.clone(), v.clone());
        let tail = Formula::imp(Formula::just(v, *g), Formula::just(uv.clone(), *f));
        let jk = self.axiom(Formula::imp(Formula::just(u, *gf), tail.clone()), "jK");
        let m = self.out.push(tail.clone(), Rule::Mp(ku, jk));
        let Formula::Imp(_, conclusion) = tail else { unreachable!() };
        (uv, self.out.push(*conclusion, Rule::Mp(kv, m)))
    }

    fn lifted(&self, i: usize) -> (Term, usize) {
        self.lifted[&i].clone()
    }

    fn unsupported(&self, rule: &Rule, step: usize) -> TransformError {
        TransformError::UnsupportedRule { transform: self.transform, rule: rule_name(rule), step }
    }

    fn step(&mut self, index: usize, f: &Formula, rule: &Rule) -> Result<(Term, usize), TransformError> {
        Ok(match rule {
            Rule::Axiom(_) | Rule::MuCl | Rule::FpAx(..) => self.necessitate(f),
            Rule::Premise(name) => {
                let g = self.out.premise(name).expect("declared").clone();
                let Formula::Just(x, _, _) = &g else { unreachable!("lifted premises are x:A") };
                (x.clone(), self.out.push(g.clone(), Rule::Premise(name.clone())))
            }
            Rule::Ian => self.necessitate(f),
            Rule::An => {
                if self.necessitation == Rule::Ian {
                    self.necessitate(f)
                } else {
                    // `c:A` is not an axiom; `!c:c:A` comes from j4.
                    let Formula::Just(c, _, _) = f else { unreachable!("AN yields c:A") };
                    let an = self.out.push(f.clone(), Rule::An);
                    let banged = Formula::just(Term::bang(c.clone()), f.clone());
                    let j4 = self.axiom(Formula::imp(f.clone(), banged.clone()), "j4");
                    (Term::bang(c.clone()), self.out.push(banged, Rule::Mp(an, j4)))
                }
            }
            Rule::Mp(i, j) => {
                let fi = &self.src.step(*i).expect("cited").formula;
                let fj = &self.src.step(*j).expect("cited").formula;
                let (g, gf) = if *fj == Formula::imp(fi.clone(), f.clone()) { (*i, *j) } else { (*j, *i) };
                self.apply(self.lifted(gf), self.lifted(g))
            }
            Rule::TautCons(is) => {
                // F1 -> (F2 -> .. -> F) is a tautology; apply it to each lifted Fi.
                let chain = is.iter().rev().fold(f.clone(), |acc, i| {
                    Formula::imp(self.src.step(*i).expect("cited").formula.clone(), acc)
                });
                let mut cur = self.necessitate(&chain);
                for i in is {
                    cur = self.apply(cur, self.lifted(*i));
                }
                cur
            }
            Rule::Gen(i, x) => {
                if !self.src_logic_has(RuleKind::QNec) {
                    return Err(self.unsupported(rule, index));
                }
                let (u, ku) = self.lifted(*i);
                let Formula::Just(_, _, a) = self.formula(ku).clone() else { unreachable!() };
                let gen = Formula::forall(x, self.formula(ku).clone());
                let kg = self.out.push(gen.clone(), Rule::Gen(ku, x.clone()));
                let y = self.fresh.var("y");
                let ex = Formula::exists(&y, Formula::just(Term::var(&y), gen));
                let kq = self.out.push(ex.clone(), Rule::QNec(kg, y));
                let t = Term::UAll(Box::new(u), x.clone());
                let concl = Formula::just(t.clone(), Formula::forall(x, *a));
                let uf = self.axiom(Formula::imp(ex, concl.clone()), "UF");
                (t, self.out.push(concl, Rule::Mp(kq, uf)))
            }
            Rule::QNec(i, _) => {
                let (u, ku) = self.lifted(*i);
                let ua = self.formula(ku).clone();
                let bang = Formula::just(Term::bang(u.clone()), ua.clone());
                let j4 = self.axiom(Formula::imp(ua.clone(), bang.clone()), "j4");
                let kb = self.out.push(bang, Rule::Mp(ku, j4));
                let q3 = Formula::imp(ua, f.clone());
                let c = self.necessitate(&q3);
                self.apply(c, (Term::bang(u), kb))
            }
            other => return Err(self.unsupported(other, index)),
        })
    }

    fn src_logic_has(&self, r: RuleKind) -> bool {
        get_logic(&self.src.logic).map(|l| l.has_rule(r)).unwrap_or(false)
    }
}

fn run(d: &Derivation, transform: &'static str, family: Family) -> Result<LiftResult, TransformError> {
    let (d, _) = prepare(d)?;
    let logic = get_logic(&d.logic).map_err(|_| TransformError::WrongLogic { transform, logic: d.logic.clone() })?;
    if logic.family != family {
        return Err(TransformError::WrongLogic { transform, logic: d.logic.clone() });
    }
    if d.spec != Specification::Total {
        return Err(TransformError::NotAppropriate(transform));
    }
    let mut fresh = Fresh::new(&d);
    let mut out = d.header_only();
    let mut vars = Vec::new();
    out.premises = d
        .premises
        .iter()
        .map(|(n, a)| {
            let x = fresh.var("x");
            vars.push(x.clone());
            (n.clone(), Formula::just(Term::var(&x), a.clone()))
        })
        .collect();
    let necessitation = if logic.has_rule(RuleKind::Ian) { Rule::Ian } else { Rule::An };
    let mut l = Lifter { transform, src: &d, out, fresh, necessitation, lifted: BTreeMap::new() };
    for s in &d.steps {
        let r = l.step(s.index, &s.formula, &s.rule)?;
        l.lifted.insert(s.index, r);
    }
    let (term, k) = l.lifted(d.steps.last().expect("nonempty").index);
    let mut out = l.out;
    if out.steps.last().map(|s| s.index) != Some(k) {
        let f = out.step(k).expect("emitted").formula.clone();
        out.push(f, Rule::TautCons(vec![k]));
    }
    Ok(LiftResult { term, vars, derivation: recheck(out.renumbered())? })
}

/// Lifting in a justification logic with the total specification.
pub fn lift(d: &Derivation) -> Result<LiftResult, TransformError> {
    run(d, "lifting", Family::Justification)
}

/// Internalization in QLP; in QLP- it applies only to Gen-free derivations.
pub fn internalize_qlp(d: &Derivation) -> Result<LiftResult, TransformError> {
    run(d, "internalization", Family::Quantified)
}

/// JUG: from a premise-free `t:A(x)` derive `(t all x):(all x)A(x)`.
pub fn jug(d: &Derivation, x: &str) -> Result<Derivation, TransformError> {
    let (d, report) = prepare(d)?;
    let logic = get_logic(&d.logic).map_err(|_| TransformError::WrongLogic { transform: "JUG", logic: d.logic.clone() })?;
    if !logic.has_rule(RuleKind::Gen) || !logic.has_rule(RuleKind::QNec) || !logic.has_axiom("UF") {
        return Err(TransformError::WrongLogic { transform: "JUG", logic: d.logic.clone() });
    }
    if !report.final_deps.is_empty() {
        return Err(TransformError::PremiseBearing);
    }
    let Some(Formula::Just(t, _, a)) = d.final_formula().cloned() else { return Err(TransformError::NotJustified) };
    let mut fresh = Fresh::new(&d);
    let mut out = d.clone();
    let last = out.steps.last().expect("nonempty").index;
    let gen = Formula::forall(x, Formula::just(t.clone(), (*a).clone()));
    let kg = out.push(gen.clone(), Rule::Gen(last, x.to_string()));
    let y = fresh.var("y");
    let ex = Formula::exists(&y, Formula::just(Term::var(&y), gen));
    let kq = out.push(ex.clone(), Rule::QNec(kg, y));
    let concl = Formula::just(Term::UAll(Box::new(t), x.to_string()), Formula::forall(x, *a));
    let uf = out.push(Formula::imp(ex, concl.clone()), Rule::Axiom("UF".to_string()));
    out.push(concl, Rule::Mp(kq, uf));
    recheck(out)
}

/// The admissible rule of QLP-: from an axiom instance `A` derive `(ex x) x:A`.
pub fn restricted_qnec(a: &Formula, logic_id: &str, x: &str) -> Result<Derivation, TransformError> {
    let wrong = || TransformError::WrongLogic { transform: "restricted qNec", logic: logic_id.to_string() };
    let logic = get_logic(logic_id).map_err(|_| wrong())?;
    if logic.family != Family::Quantified || !logic.has_axiom("Q3") {
        return Err(wrong());
    }
    if logic.match_axiom(a).is_none() {
        return Err(TransformError::NotAxiom(a.to_string()));
    }
    if free_vars(a).contains(x) {
        return Err(TransformError::VarFree { var: x.to_string(), formula: a.to_string() });
    }
    let mut d = Derivation::new(logic_id);
    let mut fresh = Fresh::new(&Derivation { steps: vec![], premises: vec![("A".into(), a.clone())], ..d.clone() });
    let ca = Formula::just(fresh.constant(), a.clone());
    let goal = Formula::exists(x, Formula::just(Term::var(x), a.clone()));
    let k1 = d.push(ca.clone(), Rule::An);
    let k2 = d.push(Formula::imp(ca, goal.clone()), Rule::Axiom("Q3".to_string()));
    d.push(goal, Rule::Mp(k1, k2));
    recheck(d)
}
