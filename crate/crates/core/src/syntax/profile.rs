use std::collections::BTreeSet;

use super::ast::{Formula, Term};
use super::parser::parse;
use super::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Not,
    And,
    Or,
    Imp,
    Iff,
    Xor,
    Box,
    Just,
    Mu,
    Fix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermOp {
    App,
    Sum,
    Bang,
    Quest,
    WQuest,
    UAll,
    Prim,
}

/// Which constructors a logic's language admits. Atoms, `false`, variables and
/// constants are always admitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageProfile {
    pub connectives: BTreeSet<Connective>,
    pub term_ops: BTreeSet<TermOp>,
    pub quantifiers: bool,
    pub timed: bool,
    /// Agent ids usable in `t:@s A`; `None` means single-agent only.
    pub agents: Option<BTreeSet<String>>,
}

const BOOLEAN: [Connective; 6] =
    [Connective::Not, Connective::And, Connective::Or, Connective::Imp, Connective::Iff, Connective::Xor];

impl LanguageProfile {
    pub fn propositional() -> Self {
        LanguageProfile {
            connectives: BOOLEAN.into_iter().collect(),
            term_ops: BTreeSet::new(),
            quantifiers: false,
            timed: false,
            agents: None,
        }
    }

    /// Admits every constructor and any agent id.
    pub fn unrestricted() -> Self {
        let mut p = Self::propositional();
        p.connectives.extend([Connective::Box, Connective::Just, Connective::Mu, Connective::Fix]);
        p.term_ops.extend([
            TermOp::App,
            TermOp::Sum,
            TermOp::Bang,
            TermOp::Quest,
            TermOp::WQuest,
            TermOp::UAll,
            TermOp::Prim,
        ]);
        p.quantifiers = true;
        p.timed = true;
        p
    }

    pub fn with(mut self, c: Connective) -> Self {
        self.connectives.insert(c);
        self
    }

    pub fn with_ops(mut self, ops: &[TermOp]) -> Self {
        self.term_ops.extend(ops.iter().copied());
        self
    }

    /// First constructor of `f` outside the profile, described for diagnostics.
    pub fn violation(&self, f: &Formula) -> Option<String> {
        let need = |c: Connective, what: &str| -> Option<String> {
            (!self.connectives.contains(&c)).then(|| format!("`{what}` is not in the language"))
        };
        let here = match f {
            Formula::Atom(_) | Formula::Falsum => None,
            Formula::Not(_) => need(Connective::Not, "~"),
            Formula::And(..) => need(Connective::And, "&"),
            Formula::Or(..) => need(Connective::Or, "|"),
            Formula::Imp(..) => need(Connective::Imp, "->"),
            Formula::Iff(..) => need(Connective::Iff, "<->"),
            Formula::Xor(..) => need(Connective::Xor, "xor"),
            Formula::Boxed(_) => need(Connective::Box, "[]"),
            Formula::Knows(..) => (!self.timed).then(|| "`K@i` is not in the language".to_string()),
            Formula::Just(t, agent, _) => need(Connective::Just, "t:A")
                .or_else(|| self.agent_violation(agent.as_deref()))
                .or_else(|| self.term_violation(t)),
            Formula::Forall(..) | Formula::Exists(..) => {
                (!self.quantifiers).then(|| "quantifiers are not in the language".to_string())
            }
            Formula::Mu(..) => need(Connective::Mu, "mu"),
            Formula::Fix(..) => need(Connective::Fix, "fix(...)"),
        };
        here.or_else(|| f.children().into_iter().find_map(|c| self.violation(c)))
    }

    fn agent_violation(&self, agent: Option<&str>) -> Option<String> {
        match (agent, &self.agents) {
            (None, _) => None,
            (Some(a), None) => Some(format!("agent `{a}` used in a single-agent language")),
            (Some(a), Some(set)) => (!set.contains(a)).then(|| format!("agent `{a}` is not declared")),
        }
    }

    pub fn term_violation(&self, t: &Term) -> Option<String> {
        let need = |op: TermOp, what: &str| -> Option<String> {
            (!self.term_ops.contains(&op)).then(|| format!("term operation `{what}` is not in the language"))
        };
        match t {
            Term::Var(_) | Term::Const(_) => None,
            Term::Prim(..) => need(TermOp::Prim, "f(x..)"),
            Term::App(a, b) => need(TermOp::App, "*")
                .or_else(|| self.term_violation(a))
                .or_else(|| self.term_violation(b)),
            Term::Sum(a, b) => need(TermOp::Sum, "+")
                .or_else(|| self.term_violation(a))
                .or_else(|| self.term_violation(b)),
            Term::Bang(a) => need(TermOp::Bang, "!").or_else(|| self.term_violation(a)),
            Term::Quest(a) => need(TermOp::Quest, "?").or_else(|| self.term_violation(a)),
            Term::WQuest(a) => need(TermOp::WQuest, "??").or_else(|| self.term_violation(a)),
            Term::UAll(a, _) => need(TermOp::UAll, "(t all x)").or_else(|| self.term_violation(a)),
        }
    }

    pub fn admits(&self, f: &Formula) -> bool {
        self.violation(f).is_none()
    }
}

/// Parses `text` and rejects it unless every constructor belongs to `profile`.
pub fn parse_formula(text: &str, profile: &LanguageProfile) -> Result<Formula, ParseError> {
    let f = parse(text)?;
    match profile.violation(&f) {
        Some(msg) => Err(ParseError::ProfileViolation(msg)),
        None => Ok(f),
    }
}
