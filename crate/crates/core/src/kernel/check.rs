use std::collections::{BTreeMap, BTreeSet};

use crate::registry::{get_logic, spec_membership_with, Family, LogicSpec, RuleKind, SpecKind};
use crate::syntax::{free_vars, occurrence_check, subst_prop, Formula, OccurrenceMode, Term};
use crate::transforms;

use super::derivation::{Derivation, InlineRule, Rule, Step};
use super::taut::taut_consequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepVerdict {
    pub index: usize,
    pub accepted: bool,
    pub message: Option<String>,
    pub deps: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub steps: Vec<StepVerdict>,
    /// First rejected step and the violated condition.
    pub first_failure: Option<(usize, String)>,
    pub final_formula: Option<Formula>,
    pub final_deps: BTreeSet<String>,
    /// Uses of rules a purist may want expanded (admissible rules).
    pub flags: Vec<String>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.first_failure.is_none()
    }

    fn fail_all(msg: String) -> Self {
        CheckReport {
            steps: Vec::new(),
            first_failure: Some((0, msg)),
            final_formula: None,
            final_deps: BTreeSet::new(),
            flags: Vec::new(),
        }
    }
}

struct Ctx<'a> {
    d: &'a Derivation,
    logic: LogicSpec,
    formulas: BTreeMap<usize, &'a Formula>,
    deps: BTreeMap<usize, BTreeSet<String>>,
    flags: Vec<String>,
}

type StepResult = Result<BTreeSet<String>, String>;

/// The logic of `d` with the derivation's agent declarations applied.
pub fn resolve_logic(d: &Derivation) -> Result<LogicSpec, String> {
    let mut logic = get_logic(&d.logic).map_err(|e| e.to_string())?;
    if logic.multi_agent {
        if let Some(agents) = &d.agents {
            logic.profile.agents = Some(agents.iter().cloned().collect());
        }
    } else if d.agents.is_some() {
        return Err(format!("logic `{}` is single-agent but the derivation declares agents", d.logic));
    }
    if !d.fixes.is_empty() && logic.fp.is_none() {
        return Err(format!("logic `{}` has no fixed-point operators", d.logic));
    }
    Ok(logic)
}

/// Checks every step; checking continues past a rejected step so that the
/// report has a verdict for each.
pub fn check_derivation(d: &Derivation) -> CheckReport {
    let logic = match resolve_logic(d) {
        Ok(l) => l,
        Err(e) => return CheckReport::fail_all(e),
    };
    if let Some(op) = d.fixes.iter().find(|op| Some(op.mode) != logic.fp) {
        return CheckReport::fail_all(format!("operator `{}` was declared for a different logic family", op.name));
    }
    for (name, f) in &d.premises {
        if let Some(msg) = language_violation(d, &logic, f) {
            return CheckReport::fail_all(format!("premise {name}: {msg}"));
        }
    }
    let mut ctx = Ctx { d, logic, formulas: BTreeMap::new(), deps: BTreeMap::new(), flags: Vec::new() };
    let mut verdicts = Vec::new();
    let mut first_failure = None;
    for step in &d.steps {
        let result = match language_violation(d, &ctx.logic, &step.formula) {
            Some(msg) => Err(msg),
            None => ctx.check_step(step),
        };
        let (accepted, message, deps) = match result {
            Ok(deps) => (true, None, deps),
            Err(msg) => {
                if first_failure.is_none() {
                    first_failure = Some((step.index, msg.clone()));
                }
                // Later steps still get verdicts; dependencies of a bad step are its citations'.
                let deps = step.rule.references().iter().filter_map(|i| ctx.deps.get(i)).flatten().cloned().collect();
                (false, Some(msg), deps)
            }
        };
        ctx.formulas.insert(step.index, &step.formula);
        ctx.deps.insert(step.index, deps.clone());
        verdicts.push(StepVerdict { index: step.index, accepted, message, deps });
    }
    if d.steps.is_empty() && first_failure.is_none() {
        first_failure = Some((0, "the derivation has no steps".to_string()));
    }
    let final_deps = verdicts.last().map(|v| v.deps.clone()).unwrap_or_default();
    CheckReport {
        steps: verdicts,
        first_failure,
        final_formula: d.final_formula().cloned(),
        final_deps,
        flags: ctx.flags,
    }
}

fn language_violation(d: &Derivation, logic: &LogicSpec, f: &Formula) -> Option<String> {
    if let Some(v) = logic.profile.violation(f) {
        return Some(v);
    }
    undeclared_fix(d, f)
}

fn undeclared_fix(d: &Derivation, f: &Formula) -> Option<String> {
    if let Formula::Fix(name, args) = f {
        match d.fix_operator(name) {
            None => return Some(format!("operator `{name}` is not declared")),
            Some(op) if op.params.len() != args.len() => {
                return Some(format!("`{name}` takes {} argument(s), got {}", op.params.len(), args.len()))
            }
            _ => {}
        }
    }
    f.children().into_iter().find_map(|c| undeclared_fix(d, c))
}

fn rule_kind(rule: &Rule) -> Option<RuleKind> {
    Some(match rule {
        Rule::Mp(..) => RuleKind::Mp,
        Rule::Nec(_) => RuleKind::Nec,
        Rule::Gen(..) => RuleKind::Gen,
        Rule::QNec(..) => RuleKind::QNec,
        Rule::Ian => RuleKind::Ian,
        Rule::An => RuleKind::An,
        Rule::MuInd(_) => RuleKind::MuInd,
        Rule::E(..) => RuleKind::E,
        Rule::De(..) => RuleKind::De,
        Rule::FpAx(..) => RuleKind::FpAx,
        Rule::TautCons(_) => RuleKind::TautCons,
        Rule::Reg(_) => RuleKind::Reg,
        Rule::AdmissibleK(..) => RuleKind::AdmissibleK,
        Rule::GlTheorem(..) => RuleKind::GlTheorem,
        Rule::Reflection(_) => RuleKind::Reflection,
        Rule::Axiom(_) | Rule::Premise(_) | Rule::MuCl | Rule::Inline(_) => return None,
    })
}

pub fn rule_name(rule: &Rule) -> &'static str {
    match rule {
        Rule::Axiom(_) => "axiom",
        Rule::Premise(_) => "premise",
        Rule::Mp(..) => "MP",
        Rule::Nec(_) => "Nec",
        Rule::Gen(..) => "Gen",
        Rule::QNec(..) => "qNec",
        Rule::Ian => "IAN",
        Rule::An => "AN",
        Rule::MuCl => "mu-CL",
        Rule::MuInd(_) => "mu-IND",
        Rule::E(..) => "E",
        Rule::De(..) => "DE",
        Rule::FpAx(..) => "FPAx",
        Rule::TautCons(_) => "prop",
        Rule::Reg(_) => "Reg",
        Rule::AdmissibleK(..) => "AdmissibleK",
        Rule::GlTheorem(..) => "GL-theorem",
        Rule::Reflection(_) => "reflection",
        Rule::Inline(InlineRule::Lift(_)) => "lifting",
        Rule::Inline(InlineRule::Internalize(_)) => "internalization",
        Rule::Inline(InlineRule::Subst { .. }) => "substitution",
        Rule::Inline(InlineRule::Deduce { .. }) => "deduction",
    }
}

impl Ctx<'_> {
    fn formula(&self, i: usize) -> &Formula {
        self.formulas[&i]
    }

    fn premise_free(&self, i: usize, rule: &str) -> Result<(), String> {
        let deps = &self.deps[&i];
        if deps.is_empty() {
            Ok(())
        } else {
            let names: Vec<&str> = deps.iter().map(String::as_str).collect();
            Err(format!("{rule} applies only to premise-free steps; step {i} depends on {}", names.join(", ")))
        }
    }

    fn union(&self, is: &[usize]) -> BTreeSet<String> {
        is.iter().flat_map(|i| self.deps[i].iter().cloned()).collect()
    }

    fn expect(&self, f: &Formula, want: &Formula, rule: &str) -> StepResult {
        if f == want {
            Ok(BTreeSet::new())
        } else {
            Err(format!("{rule} yields `{want}`, not `{f}`"))
        }
    }

    fn is_fp_instance(&self, f: &Formula) -> bool {
        self.d.fixes.iter().any(|op| op.is_axiom_instance(f))
    }

    fn check_step(&mut self, step: &Step) -> StepResult {
        let f = &step.formula;
        if let Some(kind) = rule_kind(&step.rule) {
            if !self.logic.has_rule(kind) {
                return Err(format!("rule {} is not a rule of {}", rule_name(&step.rule), self.logic.id));
            }
        }
        match &step.rule {
            Rule::Axiom(id) => {
                if !self.logic.has_axiom(id) {
                    return Err(format!("{id} is not an axiom schema of {}", self.logic.id));
                }
                match self.logic.match_schema(id, f) {
                    Some(_) => Ok(BTreeSet::new()),
                    None => Err(format!("`{f}` is not an instance of {id}")),
                }
            }
            Rule::Premise(name) => match self.d.premise(name) {
                None => Err(format!("no premise named `{name}`")),
                Some(p) if p == f => Ok(BTreeSet::from([name.clone()])),
                Some(p) => Err(format!("premise {name} is `{p}`, not `{f}`")),
            },
            Rule::Mp(i, j) => {
                let (a, b) = (self.formula(*i), self.formula(*j));
                let ok = *b == Formula::imp(a.clone(), f.clone()) || *a == Formula::imp(b.clone(), f.clone());
                if ok {
                    Ok(self.union(&[*i, *j]))
                } else {
                    Err(format!("MP needs steps of the form A and A -> `{f}`; steps {i} and {j} do not fit"))
                }
            }
            Rule::Nec(i) => {
                self.premise_free(*i, "Nec")?;
                self.expect(f, &Formula::boxed(self.formula(*i).clone()), "Nec")
            }
            Rule::Gen(i, x) => {
                self.premise_free(*i, "Gen")?;
                self.expect(f, &Formula::forall(x, self.formula(*i).clone()), "Gen")
            }
            Rule::QNec(i, x) => {
                self.premise_free(*i, "qNec")?;
                let a = self.formula(*i);
                if free_vars(a).contains(x) {
                    return Err(format!("qNec: `{x}` occurs free in `{a}`"));
                }
                match f {
                    Formula::Exists(y, body) if y == x => match &**body {
                        Formula::Just(Term::Var(z), _, inner) if z == x && **inner == *a => Ok(BTreeSet::new()),
                        _ => Err(format!("qNec yields `(ex {x}) {x}:{a}`")),
                    },
                    _ => Err(format!("qNec yields `(ex {x}) {x}:{a}`")),
                }
            }
            Rule::Ian | Rule::An => self.check_necessitation(f, matches!(step.rule, Rule::An)),
            Rule::MuCl => match self.logic.match_schema("MuCL", f) {
                Some(_) => Ok(BTreeSet::new()),
                None => Err(format!("`{f}` is not a mu-CL instance")),
            },
            Rule::MuInd(i) => {
                self.premise_free(*i, "mu-IND")?;
                self.check_mu_ind(f, self.formula(*i))
            }
            Rule::E(i, t) => {
                self.premise_free(*i, "E")?;
                self.expect(f, &Formula::knows(*t, self.formula(*i).clone()), "E")
            }
            Rule::De(i, t1, t2) => {
                self.premise_free(*i, "DE")?;
                if t1 >= t2 {
                    return Err(format!("DE needs {t1} < {t2}"));
                }
                let ka = Formula::knows(*t1, self.formula(*i).clone());
                self.expect(f, &Formula::imp(ka.clone(), Formula::knows(*t2, ka)), "DE")
            }
            Rule::FpAx(name, args) => {
                let op = self.d.fix_operator(name).ok_or_else(|| format!("operator `{name}` is not declared"))?;
                if op.params.len() != args.len() {
                    return Err(format!("`{name}` takes {} argument(s), got {}", op.params.len(), args.len()));
                }
                match f {
                    Formula::Iff(l, _) if **l == Formula::Fix(name.clone(), args.clone()) && op.is_axiom_instance(f) => {
                        Ok(BTreeSet::new())
                    }
                    _ => Err(format!("`{f}` is not the fixed-point axiom of `{name}` at the given arguments")),
                }
            }
            Rule::TautCons(is) => {
                let prems: Vec<&Formula> = is.iter().map(|i| self.formula(*i)).collect();
                if taut_consequence(f, &prems) {
                    Ok(self.union(is))
                } else {
                    Err(format!("`{f}` is not a tautological consequence of the cited steps"))
                }
            }
            Rule::Reg(i) => {
                self.premise_free(*i, "Reg")?;
                self.check_reg(f, self.formula(*i))
            }
            Rule::AdmissibleK(is, t) => self.check_admissible_k(f, is, *t),
            Rule::GlTheorem(path, inner) => {
                if inner.logic != "GL" || !inner.premises.is_empty() {
                    return Err(format!("`{}` must be a premise-free GL derivation", path.display()));
                }
                let report = check_derivation(inner);
                if let Some((i, msg)) = report.first_failure {
                    return Err(format!("`{}` is rejected at step {i}: {msg}", path.display()));
                }
                self.expect(f, inner.final_formula().expect("accepted derivations have steps"), "the GL derivation")
            }
            Rule::Reflection(i) => {
                self.premise_free(*i, "reflection")?;
                match self.formula(*i) {
                    Formula::Boxed(a) if **a == *f => Ok(BTreeSet::new()),
                    other => Err(format!("reflection needs `[]{f}`, step {i} is `{other}`")),
                }
            }
            Rule::Inline(r) => self.check_inline(f, r),
        }
    }

    /// IAN: `c_n:...:c_1:A`; AN: a single prefix (a primitive term in QLP).
    fn check_necessitation(&self, f: &Formula, single: bool) -> StepResult {
        if single {
            let ok_prefix = matches!(
                (f, self.logic.spec_kind),
                (Formula::Just(Term::Const(_), _, _), _) | (Formula::Just(Term::Prim(..), _, _), SpecKind::PrimitiveTerm)
            );
            if !ok_prefix {
                return Err(format!("AN yields `c:A` for an axiom instance A, not `{f}`"));
            }
            let Formula::Just(_, _, a) = f else { unreachable!() };
            if self.logic.match_axiom(a).is_none() && !self.is_fp_instance(a) {
                return Err(format!("`{a}` is not an axiom instance"));
            }
        }
        let extra = |g: &Formula| self.is_fp_instance(g);
        match spec_membership_with(&self.d.spec, f, &self.logic, &extra) {
            Ok(true) => Ok(BTreeSet::new()),
            Ok(false) => Err(format!("`{f}` is not in the constant specification")),
            Err(e) => Err(e.to_string()),
        }
    }

    fn check_mu_ind(&self, f: &Formula, premise: &Formula) -> StepResult {
        let Formula::Imp(mu, b) = f else { return Err("mu-IND yields `mu p.A(p) -> B`".to_string()) };
        let Formula::Mu(p, a) = &**mu else { return Err("mu-IND yields `mu p.A(p) -> B`".to_string()) };
        if !occurrence_check(OccurrenceMode::Positive, p, a) {
            return Err(format!("mu-IND: the body is not {p}-positive"));
        }
        let ab = subst_prop(a, p, b).map_err(|e| e.to_string())?;
        let want = Formula::imp(ab, (**b).clone());
        if *premise == want {
            Ok(BTreeSet::new())
        } else {
            Err(format!("mu-IND needs the premise `{want}`"))
        }
    }

    fn check_reg(&self, f: &Formula, premise: &Formula) -> StepResult {
        let Formula::Imp(a, b) = premise else { return Err("Reg needs a premise A -> B".to_string()) };
        let Formula::Imp(l, r) = f else { return Err("Reg yields an implication".to_string()) };
        let ok = match self.logic.family {
            Family::Timed => match (&**l, &**r) {
                (Formula::Knows(i, x), Formula::Knows(j, y)) => i < j && x == a && y == b,
                _ => false,
            },
            _ => **l == Formula::boxed((**a).clone()) && **r == Formula::boxed((**b).clone()),
        };
        if ok {
            Ok(BTreeSet::new())
        } else if self.logic.family == Family::Timed {
            Err(format!("Reg yields `K@i {a} -> K@j {b}` with i < j"))
        } else {
            Err(format!("Reg yields `[]{a} -> []{b}`"))
        }
    }

    fn check_admissible_k(&mut self, f: &Formula, is: &[usize], t: u32) -> StepResult {
        let last = *is.last().ok_or("admk cites no steps")?;
        let deps = self.union(is);
        for name in &deps {
            let p = self.d.premise(name).expect("dependencies are declared premises");
            match p {
                Formula::Knows(i, _) if *i < t => {}
                _ => return Err(format!("admk: premise {name} is not of the form K@i A with i < {t}")),
            }
        }
        self.flags.push(format!("admissible rule AdmissibleK used for `{f}`"));
        let want = Formula::knows(t, self.formula(last).clone());
        self.expect(f, &want, "admk").map(|_| deps)
    }

    fn check_inline(&self, f: &Formula, r: &InlineRule) -> StepResult {
        match r {
            InlineRule::Deduce { step, premise } => {
                let cone = self.d.cone(*step);
                let out = transforms::deduction(&cone, premise).map_err(|e| e.to_string())?;
                let got = out.final_formula().expect("deduction output has steps");
                self.expect(f, got, "the deduction theorem")?;
                let mut deps = self.deps[step].clone();
                deps.remove(premise);
                Ok(deps)
            }
            InlineRule::Lift(i) | InlineRule::Internalize(i) | InlineRule::Subst { step: i, .. } => {
                let what = match r {
                    InlineRule::Lift(_) => "lifting",
                    InlineRule::Internalize(_) => "internalization",
                    _ => "substitution",
                };
                self.premise_free(*i, what)?;
                let cone = self.d.cone(*i);
                let out = match r {
                    InlineRule::Lift(_) => transforms::lift(&cone).map(|l| l.derivation),
                    InlineRule::Internalize(_) => transforms::internalize_qlp(&cone).map(|l| l.derivation),
                    InlineRule::Subst { var, term, .. } => transforms::substitute_proof(&cone, var, term),
                    InlineRule::Deduce { .. } => unreachable!(),
                }
                .map_err(|e| e.to_string())?;
                let got = out.final_formula().expect("transform output has steps");
                self.expect(f, got, what)
            }
        }
    }
}
