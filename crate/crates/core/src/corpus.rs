//! The derivation and countermodel corpus: a `manifest.toml` listing entries,
//! and a runner checking each against its expectation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::kernel::{check_derivation, load_derivation};
use crate::semantics::{check_evidence_conditions, is_valid, parse_model};
use crate::syntax::{parse, Formula};

/// Depth of the term closure used when checking evidence conditions.
pub const DEFAULT_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    /// Path relative to the corpus directory; `.drv` or `.mdl`.
    pub file: PathBuf,
    /// Expected final formula of a derivation.
    #[serde(rename = "final")]
    pub final_formula: Option<String>,
    /// Formulas a model must validate.
    #[serde(default)]
    pub valid: Vec<String>,
    #[serde(default)]
    pub about: String,
}

#[derive(Debug, Deserialize)]
struct Manifest {
    entry: Vec<CorpusEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read `{path}`: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed manifest: {0}")]
    Manifest(String),
    #[error("bad selection pattern: {0}")]
    Pattern(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryResult {
    pub id: String,
    pub passed: bool,
    /// Final formula (derivations) or validated formulas (models).
    pub summary: String,
    /// Diagnostics of a failure.
    pub detail: Option<String>,
}

impl fmt::Display for EntryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}", self.id, self.summary)?;
        if let Some(d) = &self.detail {
            write!(f, " -- {d}")?;
        }
        Ok(())
    }
}

pub fn load_manifest(dir: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let path = dir.join("manifest.toml");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CorpusError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    let m: Manifest = toml::from_str(&text).map_err(|e| CorpusError::Manifest(e.to_string()))?;
    Ok(m.entry)
}

fn parse_expected(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| format!("expected formula `{text}` does not parse: {e}"))
}

fn fail(id: &str, summary: String, detail: String) -> EntryResult {
    EntryResult { id: id.to_string(), passed: false, summary, detail: Some(detail) }
}

pub fn run_entry(dir: &Path, entry: &CorpusEntry) -> EntryResult {
    let path = dir.join(&entry.file);
    let id = entry.id.as_str();
    match path.extension().and_then(|e| e.to_str()) {
        Some("drv") => {
            let d = match load_derivation(&path) {
                Ok(d) => d,
                Err(e) => return fail(id, String::new(), e.to_string()),
            };
            let report = check_derivation(&d);
            let got = report.final_formula.clone();
            let summary = got.as_ref().map(|f| format!("final = {f}")).unwrap_or_default();
            if let Some((step, msg)) = report.first_failure {
                return fail(id, summary, format!("step {step}: {msg}"));
            }
            if let Some(want) = &entry.final_formula {
                match parse_expected(want) {
                    Err(e) => return fail(id, summary, e),
                    Ok(w) if Some(&w) != got.as_ref() => return fail(id, summary, format!("expected final `{w}`")),
                    Ok(_) => {}
                }
            }
            EntryResult { id: id.to_string(), passed: true, summary, detail: None }
        }
        Some("mdl") => {
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) => return fail(id, String::new(), format!("cannot read `{}`: {e}", path.display())),
            };
            let m = match parse_model(&text) {
                Ok(m) => m,
                Err(e) => return fail(id, String::new(), e.to_string()),
            };
            let mut formulas = Vec::new();
            for v in &entry.valid {
                match parse_expected(v) {
                    Ok(f) => formulas.push(f),
                    Err(e) => return fail(id, String::new(), e),
                }
            }
            let summary = format!("valid: {}", formulas.iter().map(|f| format!("`{f}`")).collect::<Vec<_>>().join(", "));
            match check_evidence_conditions(&m, &formulas, DEFAULT_DEPTH) {
                Err(e) => return fail(id, summary, e.to_string()),
                Ok(r) if !r.ok() => return fail(id, summary, format!("condition violated: {}", r.violations[0])),
                Ok(_) => {}
            }
            for f in &formulas {
                match is_valid(&m, f) {
                    Ok(true) => {}
                    Ok(false) => return fail(id, summary, format!("`{f}` is not valid")),
                    Err(e) => return fail(id, summary, e.to_string()),
                }
            }
            EntryResult { id: id.to_string(), passed: true, summary, detail: None }
        }
        _ => fail(id, String::new(), format!("`{}` is neither a .drv nor a .mdl file", path.display())),
    }
}

/// Runs every manifest entry whose id matches the glob `pattern`.
pub fn run_corpus(dir: &Path, pattern: &str) -> Result<Vec<EntryResult>, CorpusError> {
    let pat = glob::Pattern::new(pattern).map_err(|e| CorpusError::Pattern(e.to_string()))?;
    let entries = load_manifest(dir)?;
    Ok(entries.iter().filter(|e| pat.matches(&e.id)).map(|e| run_entry(dir, e)).collect())
}
