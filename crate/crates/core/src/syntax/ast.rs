use std::fmt;

/// Justification terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    /// Primitive proof term `f(x1,...,xn)`; arguments are variables only.
    Prim(String, Vec<String>),
    App(Box<Term>, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Bang(Box<Term>),
    Quest(Box<Term>),
    /// Weak negative verifier `??t`.
    WQuest(Box<Term>),
    /// Uniform verifier `(t all x)`; binds `x`.
    UAll(Box<Term>, String),
}

/// Formulas of the whole language family.
///
/// `<>A` and `nu p . A` are not nodes: the parser expands them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Falsum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Boxed(Box<Formula>),
    Knows(u32, Box<Formula>),
    /// `t:A`, or `t:@s A` when an agent is given.
    Just(Term, Option<String>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Mu(String, Box<Formula>),
    /// Fixed-point operator application `fix(name; B1, ..., Bn)`.
    Fix(String, Vec<Formula>),
}

/// Justification variables are identifiers starting with `u`..`z`; every other
/// bare identifier in term position is a constant.
pub fn is_var_name(name: &str) -> bool {
    matches!(name.chars().next(), Some('u'..='z') | Some('$'))
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(l: Term, r: Term) -> Term {
        Term::App(Box::new(l), Box::new(r))
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(Box::new(l), Box::new(r))
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Box::new(t))
    }

    /// Identifier-like terms print without parentheses in front of `:`.
    pub fn is_compound_infix(&self) -> bool {
        matches!(self, Term::App(..) | Term::Sum(..))
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Boxed(Box::new(a))
    }

    pub fn knows(i: u32, a: Formula) -> Formula {
        Formula::Knows(i, Box::new(a))
    }

    pub fn just(t: Term, a: Formula) -> Formula {
        Formula::Just(t, None, Box::new(a))
    }

    pub fn just_by(t: Term, agent: Option<String>, a: Formula) -> Formula {
        Formula::Just(t, agent, Box::new(a))
    }

    pub fn forall(x: &str, a: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(a))
    }

    pub fn exists(x: &str, a: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(a))
    }

    pub fn mu(p: &str, a: Formula) -> Formula {
        Formula::Mu(p.to_string(), Box::new(a))
    }

    pub fn fix(name: &str, args: Vec<Formula>) -> Formula {
        Formula::Fix(name.to_string(), args)
    }

    /// True for nodes built only from atoms, falsum and boolean connectives at the top.
    pub fn is_boolean_node(&self) -> bool {
        matches!(
            self,
            Formula::Falsum
                | Formula::Not(_)
                | Formula::And(..)
                | Formula::Or(..)
                | Formula::Imp(..)
                | Formula::Iff(..)
                | Formula::Xor(..)
        )
    }

    /// Immediate subformulas, left to right. Fixed-point arguments count.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Falsum => vec![],
            Formula::Not(a)
            | Formula::Boxed(a)
            | Formula::Knows(_, a)
            | Formula::Just(_, _, a)
            | Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::Mu(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b)
            | Formula::Xor(a, b) => vec![a, b],
            Formula::Fix(_, args) => args.iter().collect(),
        }
    }

    /// Number of nodes; used to bound generated and expanded material.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::printer::print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::printer::print_formula(self))
    }
}
