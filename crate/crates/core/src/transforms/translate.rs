use std::collections::BTreeMap;

use crate::fixedpoint::make_fp_operator;
use crate::kernel::{rule_name, Derivation, Rule};
use crate::registry::{collapse_target, get_logic, projection_target, LogicSpec, Specification};
use crate::syntax::{Formula, Term};

use super::{prepare, recheck, TransformError};

/// Rebuilds `f` with `go` applied to each immediate subformula.
fn map_children(f: &Formula, go: &mut dyn FnMut(&Formula) -> Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Falsum => f.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::And(a, b) => Formula::and(go(a), go(b)),
        Formula::Or(a, b) => Formula::or(go(a), go(b)),
        Formula::Imp(a, b) => Formula::imp(go(a), go(b)),
        Formula::Iff(a, b) => Formula::iff(go(a), go(b)),
        Formula::Xor(a, b) => Formula::xor(go(a), go(b)),
        Formula::Boxed(a) => Formula::boxed(go(a)),
        Formula::Knows(i, a) => Formula::knows(*i, go(a)),
        Formula::Just(t, ag, a) => Formula::just_by(t.clone(), ag.clone(), go(a)),
        Formula::Forall(x, a) => Formula::forall(x, go(a)),
        Formula::Exists(x, a) => Formula::exists(x, go(a)),
        Formula::Mu(p, a) => Formula::mu(p, go(a)),
        Formula::Fix(n, args) => Formula::Fix(n.clone(), args.iter().map(go).collect()),
    }
}

/// Forgetful projection: `t:A` becomes `[]A`; everything else is kept.
pub fn project(f: &Formula) -> Formula {
    match f {
        Formula::Just(_, _, a) => Formula::boxed(project(a)),
        _ => map_children(f, &mut |g| project(g)),
    }
}

const BOUND_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// `[]A` becomes `(ex x) x:A`; the bound variable is chosen by box depth.
pub fn exists_translate(f: &Formula) -> Formula {
    fn go(f: &Formula, depth: usize) -> Formula {
        match f {
            Formula::Boxed(a) => {
                let x = match BOUND_NAMES.get(depth) {
                    Some(n) => n.to_string(),
                    None => format!("x{depth}"),
                };
                Formula::exists(&x, Formula::just(Term::var(&x), go(a, depth + 1)))
            }
            _ => map_children(f, &mut |g| go(g, depth)),
        }
    }
    go(f, 0)
}

/// Erases agent annotations: `t:@s A` becomes `t:A`.
pub fn collapse_agents(f: &Formula) -> Formula {
    match f {
        Formula::Just(t, _, a) => Formula::just(t.clone(), collapse_agents(a)),
        _ => map_children(f, &mut |g| collapse_agents(g)),
    }
}

/// Maps a multi-agent QLP derivation rule-for-rule into single-agent QLP.
pub fn collapse_derivation(d: &Derivation) -> Result<Derivation, TransformError> {
    let (d, _) = prepare(d)?;
    let target = collapse_target(&d.logic)
        .ok_or_else(|| TransformError::WrongLogic { transform: "agent collapse", logic: d.logic.clone() })?;
    let mut out = Derivation::new(&target);
    out.spec = match &d.spec {
        Specification::Explicit(set) => Specification::Explicit(set.iter().map(collapse_agents).collect()),
        other => other.clone(),
    };
    out.spec_source = d.spec_source.clone();
    for op in &d.fixes {
        out.fixes.push(make_fp_operator(&op.name, &op.p, &op.params, collapse_agents(&op.body), op.mode)?);
    }
    out.premises = d.premises.iter().map(|(n, f)| (n.clone(), collapse_agents(f))).collect();
    for s in &d.steps {
        let rule = match &s.rule {
            Rule::FpAx(n, args) => Rule::FpAx(n.clone(), args.iter().map(collapse_agents).collect()),
            r => r.clone(),
        };
        out.steps.push(crate::kernel::Step { index: s.index, formula: collapse_agents(&s.formula), rule });
    }
    recheck(out)
}

struct Projector<'a> {
    src_logic: LogicSpec,
    target: LogicSpec,
    src: &'a Derivation,
    out: Derivation,
}

impl Projector<'_> {
    fn push(&mut self, f: Formula, r: Rule) -> usize {
        self.out.push(f, r)
    }

    /// Emits the image of the axiom instance `f` (a step of the source).
    fn axiom_image(&mut self, f: &Formula, id: &str) -> Result<usize, TransformError> {
        let image = project(f);
        if let Formula::Iff(l, _) = f {
            if let Formula::Fix(name, args) = &**l {
                if self.src.fix_operator(name).is_some_and(|op| op.is_axiom_instance(f)) {
                    return Ok(self.push(image, Rule::FpAx(name.clone(), args.iter().map(project).collect())));
                }
            }
        }
        if id == "MuCL" {
            return Ok(self.push(image, Rule::MuCl));
        }
        if let Some((found, _)) = self.target.match_axiom(&image) {
            return Ok(self.push(image, Rule::Axiom(found.to_string())));
        }
        // `[]false -> false` from D: D gives `[]false -> ~[]~false`, and `[]~false` holds.
        if image == Formula::imp(Formula::boxed(Formula::Falsum), Formula::Falsum) && self.target.has_axiom("D") {
            let not_false = Formula::not(Formula::Falsum);
            let k1 = self.push(not_false.clone(), Rule::Axiom("Taut".to_string()));
            let k2 = self.push(Formula::boxed(not_false.clone()), Rule::Nec(k1));
            let d = Formula::imp(Formula::boxed(Formula::Falsum), Formula::not(Formula::boxed(not_false)));
            let k3 = self.push(d, Rule::Axiom("D".to_string()));
            return Ok(self.push(image, Rule::TautCons(vec![k2, k3])));
        }
        Err(TransformError::NoImage { axiom: id.to_string(), logic: self.target.id.clone() })
    }

    /// Which schema `f` instantiates in the source logic (fixed-point axioms included).
    fn source_axiom(&self, f: &Formula) -> Option<String> {
        if self.src.fixes.iter().any(|op| op.is_axiom_instance(f)) {
            return Some("FPAx".to_string());
        }
        self.src_logic.match_axiom(f).map(|(id, _)| id.to_string())
    }
}

/// Maps a justification derivation to its forgetful projection in the
/// corresponding modal logic. `c_n:..:c_1:A` becomes the image of `A`
/// followed by `n` necessitations.
pub fn project_derivation(d: &Derivation) -> Result<Derivation, TransformError> {
    let (d, _) = prepare(d)?;
    let wrong = || TransformError::WrongLogic { transform: "projection", logic: d.logic.clone() };
    let target_id = projection_target(&d.logic).ok_or_else(wrong)?;
    let target = get_logic(&target_id).map_err(|_| wrong())?;
    let src_logic = get_logic(&d.logic).map_err(|_| wrong())?;
    let mut out = Derivation::new(&target_id);
    out.spec = Specification::Empty;
    out.spec_source = crate::kernel::SpecSource::Empty;
    for op in &d.fixes {
        let mode = target.fp.expect("the image of an FP logic is an FP logic");
        out.fixes.push(make_fp_operator(&op.name, &op.p, &op.params, project(&op.body), mode)?);
    }
    out.premises = d.premises.iter().map(|(n, f)| (n.clone(), project(f))).collect();
    let mut p = Projector { src_logic, target, src: &d, out };
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for s in &d.steps {
        let m = |i: usize| map[&i];
        let k = match &s.rule {
            Rule::Axiom(id) => p.axiom_image(&s.formula, id)?,
            Rule::MuCl => p.axiom_image(&s.formula, "MuCL")?,
            Rule::FpAx(..) => p.axiom_image(&s.formula, "FPAx")?,
            Rule::Ian | Rule::An => {
                // Peel constant prefixes down to the first axiom core.
                let mut depth = 0;
                let mut core = &s.formula;
                let id = loop {
                    let Formula::Just(_, _, a) = core else {
                        return Err(TransformError::NotAxiom(s.formula.to_string()));
                    };
                    depth += 1;
                    core = a;
                    if let Some(id) = p.source_axiom(core) {
                        break id;
                    }
                };
                let mut k = p.axiom_image(core, &id)?;
                let mut f = project(core);
                for _ in 0..depth {
                    f = Formula::boxed(f);
                    k = p.push(f.clone(), Rule::Nec(k));
                }
                k
            }
            Rule::Premise(n) => p.push(project(&s.formula), Rule::Premise(n.clone())),
            Rule::Mp(i, j) => p.push(project(&s.formula), Rule::Mp(m(*i), m(*j))),
            Rule::TautCons(is) => p.push(project(&s.formula), Rule::TautCons(is.iter().map(|i| m(*i)).collect())),
            Rule::MuInd(i) => p.push(project(&s.formula), Rule::MuInd(m(*i))),
            other => {
                return Err(TransformError::UnsupportedRule {
                    transform: "projection",
                    rule: rule_name(other),
                    step: s.index,
                })
            }
        };
        map.insert(s.index, k);
    }
    recheck(p.out)
}
