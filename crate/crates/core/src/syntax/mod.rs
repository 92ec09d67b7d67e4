//! Formulas and justification terms: AST, concrete syntax, occurrence analysis
//! and substitution.

mod ast;
mod lexer;
mod occurrence;
mod ops;
mod parser;
mod printer;
mod profile;

pub use ast::{is_var_name, Formula, Term};
pub use occurrence::{occurrence_check, occurrences, Occurrence, OccurrenceMode};
pub use ops::{
    all_vars, exists_just_to_box, free_vars, prop_vars, subst_prop, subst_props, subst_term_for_var,
    subst_term_in_term, subterms, term_vars,
};
pub(crate) use ops::replace_free_atom;
pub use parser::{parse, parse_term};
pub(crate) use parser::parse_pattern;
pub use printer::{print_formula, print_term};
pub use profile::{parse_formula, Connective, LanguageProfile, TermOp};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("`mu {var}` at offset {pos}: body is not {var}-positive")]
    NotPositive { pos: usize, var: String },
    #[error("outside the language: {0}")]
    ProfileViolation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("substitution for `{var}` is not free: `{binder}` would be captured")]
    NotFreeFor { var: String, binder: String },
    #[error("`{var}` is an argument of primitive term `{prim}` and can only be replaced by a variable")]
    PrimArgument { var: String, prim: String },
    #[error("`{var}` is bound by a mu and cannot be substituted")]
    MuBound { var: String },
}
