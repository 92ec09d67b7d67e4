use super::ast::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccurrenceMode {
    /// Under some `[]`, `K@i` or `t:`.
    Modalized,
    /// Under some `t:`.
    Justified,
    /// Under some `(ex x) x:_`.
    ExistsJustified,
    /// Under an even number of negations (antecedents count as one).
    Positive,
    /// Every non-modalized occurrence is positive.
    SemiPositive,
}

/// Context flags of one free occurrence of an atom.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Occurrence {
    pub negations: u32,
    /// Under `<->`, `xor` or a fixed-point argument: polarity is not determined.
    pub mixed: bool,
    pub modalized: bool,
    pub justified: bool,
    pub exists_justified: bool,
}

impl Occurrence {
    pub fn positive(&self) -> bool {
        !self.mixed && self.negations.is_multiple_of(2)
    }
}

/// Context of every free occurrence of `p` in `f`, left to right.
pub fn occurrences(p: &str, f: &Formula) -> Vec<Occurrence> {
    let mut out = Vec::new();
    walk(p, f, Occurrence::default(), &mut out);
    out
}

fn walk(p: &str, f: &Formula, ctx: Occurrence, out: &mut Vec<Occurrence>) {
    match f {
        Formula::Atom(q) => {
            if q == p {
                out.push(ctx);
            }
        }
        Formula::Falsum => {}
        Formula::Not(a) => walk(p, a, Occurrence { negations: ctx.negations + 1, ..ctx }, out),
        Formula::Imp(a, b) => {
            walk(p, a, Occurrence { negations: ctx.negations + 1, ..ctx }, out);
            walk(p, b, ctx, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            walk(p, a, ctx, out);
            walk(p, b, ctx, out);
        }
        Formula::Iff(a, b) | Formula::Xor(a, b) => {
            let mixed = Occurrence { mixed: true, ..ctx };
            walk(p, a, mixed, out);
            walk(p, b, mixed, out);
        }
        Formula::Boxed(a) | Formula::Knows(_, a) => walk(p, a, Occurrence { modalized: true, ..ctx }, out),
        Formula::Just(_, _, a) => walk(p, a, Occurrence { modalized: true, justified: true, ..ctx }, out),
        Formula::Exists(x, a) => match &**a {
            Formula::Just(Term::Var(y), _, body) if y == x => {
                let inner = Occurrence { modalized: true, justified: true, exists_justified: true, ..ctx };
                walk(p, body, inner, out);
            }
            _ => walk(p, a, ctx, out),
        },
        Formula::Forall(_, a) => walk(p, a, ctx, out),
        Formula::Mu(q, a) => {
            if q != p {
                walk(p, a, ctx, out);
            }
        }
        Formula::Fix(_, args) => {
            // Argument occurrences are substituted into an opaque body.
            let opaque = Occurrence { mixed: true, ..ctx };
            for a in args {
                walk(p, a, opaque, out);
            }
        }
    }
}

/// True iff every free occurrence of `p` in `f` satisfies `mode`; vacuously
/// true when `p` does not occur free.
pub fn occurrence_check(mode: OccurrenceMode, p: &str, f: &Formula) -> bool {
    occurrences(p, f).iter().all(|o| match mode {
        OccurrenceMode::Modalized => o.modalized,
        OccurrenceMode::Justified => o.justified,
        OccurrenceMode::ExistsJustified => o.exists_justified,
        OccurrenceMode::Positive => o.positive(),
        OccurrenceMode::SemiPositive => o.modalized || o.positive(),
    })
}
