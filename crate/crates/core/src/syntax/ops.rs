use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Formula, Term};
use super::SubstError;

/// Free justification variables of a term. `(t all x)` binds `x`.
pub fn term_vars(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_term_vars(t, &mut out);
    out
}

fn collect_term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Const(_) => {}
        Term::Prim(_, args) => out.extend(args.iter().cloned()),
        Term::App(a, b) | Term::Sum(a, b) => {
            collect_term_vars(a, out);
            collect_term_vars(b, out);
        }
        Term::Bang(a) | Term::Quest(a) | Term::WQuest(a) => collect_term_vars(a, out),
        Term::UAll(a, x) => {
            let mut inner = term_vars(a);
            inner.remove(x);
            out.extend(inner);
        }
    }
}

/// Free justification variables of a formula; `all`, `ex` and `(t all x)` bind.
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Atom(_) | Formula::Falsum => BTreeSet::new(),
        Formula::Just(t, _, a) => {
            let mut out = term_vars(t);
            out.extend(free_vars(a));
            out
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let mut out = free_vars(a);
            out.remove(x);
            out
        }
        _ => {
            let mut out = BTreeSet::new();
            for c in f.children() {
                out.extend(free_vars(c));
            }
            out
        }
    }
}

/// Every justification variable name occurring anywhere, bound or free.
pub fn all_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_all_vars(f, &mut out);
    out
}

fn collect_all_vars(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Just(t, _, a) => {
            collect_all_term_vars(t, out);
            collect_all_vars(a, out);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            out.insert(x.clone());
            collect_all_vars(a, out);
        }
        _ => {
            for c in f.children() {
                collect_all_vars(c, out);
            }
        }
    }
}

fn collect_all_term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Const(_) => {}
        Term::Prim(_, args) => out.extend(args.iter().cloned()),
        Term::App(a, b) | Term::Sum(a, b) => {
            collect_all_term_vars(a, out);
            collect_all_term_vars(b, out);
        }
        Term::Bang(a) | Term::Quest(a) | Term::WQuest(a) => collect_all_term_vars(a, out),
        Term::UAll(a, x) => {
            out.insert(x.clone());
            collect_all_term_vars(a, out);
        }
    }
}

/// Propositional variables with a free occurrence (µ binds).
pub fn prop_vars(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Atom(p) => BTreeSet::from([p.clone()]),
        Formula::Mu(p, a) => {
            let mut out = prop_vars(a);
            out.remove(p);
            out
        }
        _ => {
            let mut out = BTreeSet::new();
            for c in f.children() {
                out.extend(prop_vars(c));
            }
            out
        }
    }
}

/// Every term occurring in `f` (including subterms), in first-occurrence order.
pub fn subterms(f: &Formula) -> Vec<Term> {
    let mut out = Vec::new();
    collect_subterms(f, &mut out);
    out
}

fn collect_subterms(f: &Formula, out: &mut Vec<Term>) {
    if let Formula::Just(t, _, _) = f {
        push_term_tree(t, out);
    }
    for c in f.children() {
        collect_subterms(c, out);
    }
}

fn push_term_tree(t: &Term, out: &mut Vec<Term>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    match t {
        Term::App(a, b) | Term::Sum(a, b) => {
            push_term_tree(a, out);
            push_term_tree(b, out);
        }
        Term::Bang(a) | Term::Quest(a) | Term::WQuest(a) | Term::UAll(a, _) => push_term_tree(a, out),
        _ => {}
    }
}

/// `t[s/x]` on terms. Fails if `x` is a primitive-term argument and `s` is not a
/// variable, or if a uniform verifier would capture a variable of `s`.
pub fn subst_term_in_term(t: &Term, x: &str, s: &Term) -> Result<Term, SubstError> {
    Ok(match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Prim(f, args) => {
            let mut new_args = Vec::with_capacity(args.len());
            for a in args {
                if a == x {
                    match s {
                        Term::Var(y) => new_args.push(y.clone()),
                        _ => return Err(SubstError::PrimArgument { var: x.to_string(), prim: f.clone() }),
                    }
                } else {
                    new_args.push(a.clone());
                }
            }
            Term::Prim(f.clone(), new_args)
        }
        Term::App(a, b) => Term::app(subst_term_in_term(a, x, s)?, subst_term_in_term(b, x, s)?),
        Term::Sum(a, b) => Term::sum(subst_term_in_term(a, x, s)?, subst_term_in_term(b, x, s)?),
        Term::Bang(a) => Term::Bang(Box::new(subst_term_in_term(a, x, s)?)),
        Term::Quest(a) => Term::Quest(Box::new(subst_term_in_term(a, x, s)?)),
        Term::WQuest(a) => Term::WQuest(Box::new(subst_term_in_term(a, x, s)?)),
        Term::UAll(a, y) => {
            if y == x || !term_vars(a).contains(x) {
                t.clone()
            } else if term_vars(s).contains(y) {
                return Err(SubstError::NotFreeFor { var: x.to_string(), binder: y.clone() });
            } else {
                Term::UAll(Box::new(subst_term_in_term(a, x, s)?), y.clone())
            }
        }
    })
}

/// `f[t/x]`: replaces free occurrences of the justification variable `x`.
/// No renaming: a capturing binder is an error.
pub fn subst_term_for_var(f: &Formula, x: &str, t: &Term) -> Result<Formula, SubstError> {
    if !free_vars(f).contains(x) {
        return Ok(f.clone());
    }
    let tv = term_vars(t);
    subst_rec(f, x, t, &tv)
}

fn subst_rec(f: &Formula, x: &str, t: &Term, tv: &BTreeSet<String>) -> Result<Formula, SubstError> {
    let go = |g: &Formula| subst_rec(g, x, t, tv);
    Ok(match f {
        Formula::Atom(_) | Formula::Falsum => f.clone(),
        Formula::Not(a) => Formula::not(go(a)?),
        Formula::And(a, b) => Formula::and(go(a)?, go(b)?),
        Formula::Or(a, b) => Formula::or(go(a)?, go(b)?),
        Formula::Imp(a, b) => Formula::imp(go(a)?, go(b)?),
        Formula::Iff(a, b) => Formula::iff(go(a)?, go(b)?),
        Formula::Xor(a, b) => Formula::xor(go(a)?, go(b)?),
        Formula::Boxed(a) => Formula::boxed(go(a)?),
        Formula::Knows(i, a) => Formula::knows(*i, go(a)?),
        Formula::Just(s, ag, a) => Formula::just_by(subst_term_in_term(s, x, t)?, ag.clone(), go(a)?),
        Formula::Forall(y, a) | Formula::Exists(y, a) => {
            let body = if y == x || !free_vars(a).contains(x) {
                (**a).clone()
            } else if tv.contains(y) {
                return Err(SubstError::NotFreeFor { var: x.to_string(), binder: y.clone() });
            } else {
                go(a)?
            };
            match f {
                Formula::Forall(..) => Formula::forall(y, body),
                _ => Formula::exists(y, body),
            }
        }
        Formula::Mu(p, a) => Formula::mu(p, go(a)?),
        Formula::Fix(name, args) => Formula::Fix(name.clone(), args.iter().map(go).collect::<Result<_, _>>()?),
    })
}

/// Replaces free occurrences of atom `p` by `g` with no capture checks.
/// Only for internal rewrites where `g` cannot be captured.
pub(crate) fn replace_free_atom(f: &Formula, p: &str, g: &Formula) -> Formula {
    let map = BTreeMap::from([(p.to_string(), g.clone())]);
    replace_atoms_unchecked(f, &map)
}

fn replace_atoms_unchecked(f: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    let go = |h: &Formula| replace_atoms_unchecked(h, map);
    match f {
        Formula::Atom(q) => map.get(q).cloned().unwrap_or_else(|| f.clone()),
        Formula::Falsum => Formula::Falsum,
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
        Formula::Mu(q, a) => {
            if map.contains_key(q) {
                let mut inner = map.clone();
                inner.remove(q);
                Formula::mu(q, replace_atoms_unchecked(a, &inner))
            } else {
                Formula::mu(q, go(a))
            }
        }
        Formula::Fix(name, args) => Formula::Fix(name.clone(), args.iter().map(go).collect()),
    }
}

/// `f[g/p]` for a propositional variable `p`.
pub fn subst_prop(f: &Formula, p: &str, g: &Formula) -> Result<Formula, SubstError> {
    let map = BTreeMap::from([(p.to_string(), g.clone())]);
    subst_props(f, &map)
}

/// Simultaneous propositional substitution. Rejects formulas where a µ binds one
/// of the substituted variables, and any capture of a free variable of an image
/// (justification variables by quantifiers, propositional variables by µ).
pub fn subst_props(f: &Formula, map: &BTreeMap<String, Formula>) -> Result<Formula, SubstError> {
    let mut images_jvars = BTreeMap::new();
    let mut images_pvars = BTreeMap::new();
    for (p, g) in map {
        images_jvars.insert(p.clone(), free_vars(g));
        images_pvars.insert(p.clone(), prop_vars(g));
    }
    props_rec(f, map, &images_jvars, &images_pvars)
}

fn props_rec(
    f: &Formula,
    map: &BTreeMap<String, Formula>,
    jv: &BTreeMap<String, BTreeSet<String>>,
    pv: &BTreeMap<String, BTreeSet<String>>,
) -> Result<Formula, SubstError> {
    let go = |h: &Formula| props_rec(h, map, jv, pv);
    Ok(match f {
        Formula::Atom(q) => map.get(q).cloned().unwrap_or_else(|| f.clone()),
        Formula::Falsum => Formula::Falsum,
        Formula::Not(a) => Formula::not(go(a)?),
        Formula::And(a, b) => Formula::and(go(a)?, go(b)?),
        Formula::Or(a, b) => Formula::or(go(a)?, go(b)?),
        Formula::Imp(a, b) => Formula::imp(go(a)?, go(b)?),
        Formula::Iff(a, b) => Formula::iff(go(a)?, go(b)?),
        Formula::Xor(a, b) => Formula::xor(go(a)?, go(b)?),
        Formula::Boxed(a) => Formula::boxed(go(a)?),
        Formula::Knows(i, a) => Formula::knows(*i, go(a)?),
        Formula::Just(t, ag, a) => Formula::just_by(t.clone(), ag.clone(), go(a)?),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let occurring = prop_vars(a);
            for (p, vars) in jv {
                if occurring.contains(p) && vars.contains(x) {
                    return Err(SubstError::NotFreeFor { var: p.clone(), binder: x.clone() });
                }
            }
            let body = go(a)?;
            match f {
                Formula::Forall(..) => Formula::forall(x, body),
                _ => Formula::exists(x, body),
            }
        }
        Formula::Mu(q, a) => {
            if map.contains_key(q) {
                return Err(SubstError::MuBound { var: q.clone() });
            }
            let occurring = prop_vars(a);
            for (p, vars) in pv {
                if occurring.contains(p) && vars.contains(q) {
                    return Err(SubstError::NotFreeFor { var: p.clone(), binder: q.clone() });
                }
            }
            Formula::mu(q, go(a)?)
        }
        Formula::Fix(name, args) => Formula::Fix(name.clone(), args.iter().map(go).collect::<Result<_, _>>()?),
    })
}

/// Rewrites every `(ex x) x:G` into `[]G`, bottom-up.
pub fn exists_just_to_box(f: &Formula) -> Formula {
    let go = exists_just_to_box;
    match f {
        Formula::Exists(x, a) => match &**a {
            Formula::Just(Term::Var(y), _, g) if y == x => Formula::boxed(go(g)),
            _ => Formula::exists(x, go(a)),
        },
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
        Formula::Mu(p, a) => Formula::mu(p, go(a)),
        Formula::Fix(n, args) => Formula::Fix(n.clone(), args.iter().map(go).collect()),
    }
}
