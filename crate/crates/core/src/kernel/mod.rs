//! Step-by-step checking of Hilbert-style derivations.

mod check;
mod derivation;
mod taut;

pub use check::{check_derivation, resolve_logic, rule_name, CheckReport, StepVerdict};
pub use derivation::{
    load_spec_file, parse_derivation, Derivation, FormatError, InlineRule, RetargetError, Rule, SpecSource, Step,
};
pub use taut::{atomized_subformulas, eval_atomized, taut_consequence};

use std::path::Path;

/// Reads and parses a derivation file.
pub fn load_derivation(path: &Path) -> Result<Derivation, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_derivation(&text, path.parent().unwrap_or(Path::new(".")))
}
