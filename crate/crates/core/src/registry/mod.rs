//! Logic definitions: language profiles, axiom schemas, rules and
//! specifications of licensed necessitation instances.

mod schema;
mod spec;

use std::collections::BTreeSet;

pub use schema::{match_with_metavariables, schema, schemas, AxiomSchema, Binding, Bound};
pub use spec::{spec_membership, spec_membership_with, SpecError, Specification};

use crate::syntax::{Connective, Formula, LanguageProfile, OccurrenceMode, TermOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Mp,
    Nec,
    Gen,
    QNec,
    Ian,
    An,
    MuInd,
    E,
    De,
    FpAx,
    TautCons,
    Reg,
    AdmissibleK,
    /// A step backed by a separate GL derivation (the Solovay logic).
    GlTheorem,
    /// From `[]A` infer `A`.
    Reflection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Modal,
    Justification,
    Quantified,
    Timed,
}

/// What the necessitation-like rule IAN/AN produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    None,
    /// `c_n:...:c_1:A` over axiom instances.
    Constant,
    /// `f(x1,..,xn):A` over axiom instances.
    PrimitiveTerm,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicSpec {
    pub id: String,
    pub family: Family,
    pub profile: LanguageProfile,
    /// Schema ids in matching order; `Taut` is always last when present.
    pub axioms: Vec<&'static str>,
    pub rules: BTreeSet<RuleKind>,
    pub spec_kind: SpecKind,
    /// Fixed-point extension: eligibility of declared operator bodies.
    pub fp: Option<OccurrenceMode>,
    pub mu: bool,
    pub multi_agent: bool,
    /// `n` of the parameterized Sacchetti logics.
    pub param: Option<u32>,
}

impl LogicSpec {
    pub fn has_axiom(&self, id: &str) -> bool {
        self.axioms.contains(&id)
    }

    pub fn has_rule(&self, r: RuleKind) -> bool {
        self.rules.contains(&r)
    }

    /// First schema (in table order) matching `f`, with its binding. Formulas
    /// outside the logic's language never match.
    pub fn match_axiom(&self, f: &Formula) -> Option<(&'static str, Binding)> {
        if !self.profile.admits(f) {
            return None;
        }
        self.axioms.iter().find_map(|id| {
            let s = schema(id).expect("registered schema");
            s.matches(f, self).map(|b| (s.id, b))
        })
    }

    /// Matches `f` against one named schema of this logic.
    pub fn match_schema(&self, id: &str, f: &Formula) -> Option<Binding> {
        if !self.has_axiom(id) || !self.profile.admits(f) {
            return None;
        }
        schema(id)?.matches(f, self)
    }
}

/// Same as [`LogicSpec::match_axiom`]; the free-function form of the registry API.
pub fn match_axiom(logic: &LogicSpec, f: &Formula) -> Option<(&'static str, Binding)> {
    logic.match_axiom(f)
}

const MODAL: &[(&str, &[&str])] = &[
    ("K", &["K"]),
    ("T", &["K", "T"]),
    ("D", &["K", "D"]),
    ("K4", &["K", "4"]),
    ("KB", &["K", "B"]),
    ("K5", &["K", "5"]),
    ("KB5", &["K", "B", "5"]),
    ("K45", &["K", "4", "5"]),
    ("D5", &["K", "D", "5"]),
    ("DB", &["K", "D", "B"]),
    ("D4", &["K", "D", "4"]),
    ("D45", &["K", "D", "4", "5"]),
    ("TB", &["K", "T", "B"]),
    ("S4", &["K", "T", "4"]),
    ("S5", &["K", "T", "5"]),
    ("GL", &["K", "4", "Lob"]),
];

const JUSTIFICATION: &[&str] = &["J", "JT", "JD", "J4", "JB", "J5", "LP", "JD4", "JT45", "EGL"];

/// Canonical ids of the registered base logics, in display order. Suffixes
/// `(FP)` and `(mu)` extend modal and justification bases.
pub fn logic_ids() -> Vec<String> {
    let mut ids: Vec<String> = MODAL.iter().map(|(n, _)| n.to_string()).collect();
    ids.extend(["GLS", "GLA", "Sac_1", "SacBot_1"].map(String::from));
    ids.extend(JUSTIFICATION.iter().map(|s| s.to_string()));
    ids.extend(["QLP", "QLP-", "QLP_n", "QLP-_n", "QLP+UB", "tK", "tT", "tS4"].map(String::from));
    ids
}

fn modal_profile() -> LanguageProfile {
    LanguageProfile::propositional().with(Connective::Box)
}

fn rules(list: &[RuleKind]) -> BTreeSet<RuleKind> {
    list.iter().copied().collect()
}

fn base(
    id: &str,
    family: Family,
    profile: LanguageProfile,
    axioms: Vec<&'static str>,
    rule_list: &[RuleKind],
    spec_kind: SpecKind,
) -> LogicSpec {
    LogicSpec {
        id: id.to_string(),
        family,
        profile,
        axioms,
        rules: rules(rule_list),
        spec_kind,
        fp: None,
        mu: false,
        multi_agent: false,
        param: None,
    }
}

fn modal_logic(id: &str, axioms: &[&'static str]) -> LogicSpec {
    use RuleKind::*;
    base(id, Family::Modal, modal_profile(), axioms.to_vec(), &[Mp, Nec, Reg, TautCons], SpecKind::None)
}

/// `J` followed by any of `T`, `D`, `4`, `B`, `5`; plus the aliases `LP` and `EGL`.
fn justification_logic(id: &str) -> Option<LogicSpec> {
    use RuleKind::*;
    let (letters, egl) = match id {
        "LP" => ("T4", false),
        "EGL" => ("4", true),
        _ => (id.strip_prefix('J')?, false),
    };
    let mut axioms = vec!["jK", "Sum"];
    let mut ops = vec![TermOp::App, TermOp::Sum];
    let mut seen = BTreeSet::new();
    for ch in letters.chars() {
        if !seen.insert(ch) {
            return None;
        }
        let (ax, op) = match ch {
            'T' => ("jT", None),
            'D' => ("jD", None),
            '4' => ("j4", Some(TermOp::Bang)),
            'B' => ("jB", Some(TermOp::WQuest)),
            '5' => ("j5", Some(TermOp::Quest)),
            _ => return None,
        };
        axioms.push(ax);
        ops.extend(op);
    }
    if egl {
        axioms.push("EGL");
    }
    let mut rule_list = vec![Mp, Ian, TautCons];
    if axioms.contains(&"j4") {
        rule_list.push(An);
    }
    let profile = LanguageProfile::propositional().with(Connective::Just).with_ops(&ops);
    Some(base(id, Family::Justification, profile, axioms, &rule_list, SpecKind::Constant))
}

fn qlp(minus: bool, id: &str) -> LogicSpec {
    use RuleKind::*;
    let mut axioms = vec!["Q1", "Q2", "Q3", "Q4", "jK", "jT", "j4", "Sum"];
    let mut ops = vec![TermOp::App, TermOp::Sum, TermOp::Bang, TermOp::Prim];
    let mut rule_list = vec![Mp, Gen, An, TautCons];
    if !minus {
        axioms.push("UF");
        ops.push(TermOp::UAll);
        rule_list.push(QNec);
    }
    let mut profile = LanguageProfile::propositional().with(Connective::Just).with_ops(&ops);
    profile.quantifiers = true;
    base(id, Family::Quantified, profile, axioms, &rule_list, SpecKind::PrimitiveTerm)
}

fn timed_logic(id: &str) -> Option<LogicSpec> {
    use RuleKind::*;
    let (axioms, extra): (Vec<&'static str>, &[RuleKind]) = match id {
        "tK" => (vec!["tK", "Mon"], &[]),
        "tT" => (vec!["tK", "Mon", "tT"], &[]),
        "tS4" => (vec!["tK", "Mon", "tT", "t4"], &[AdmissibleK]),
        _ => return None,
    };
    let mut profile = LanguageProfile::propositional();
    profile.timed = true;
    let mut spec = base(id, Family::Timed, profile, axioms, &[Mp, E, De, Reg, TautCons], SpecKind::None);
    spec.rules.extend(extra);
    Some(spec)
}

fn parse_param(s: &str) -> Option<u32> {
    s.parse::<u32>().ok().filter(|n| *n >= 1)
}

fn base_logic(id: &str) -> Option<LogicSpec> {
    use RuleKind::*;
    if let Some((_, axioms)) = MODAL.iter().find(|(n, _)| *n == id) {
        return Some(modal_logic(id, axioms));
    }
    if let Some(l) = justification_logic(id) {
        return Some(l);
    }
    if let Some(l) = timed_logic(id) {
        return Some(l);
    }
    match id {
        "GLS" => {
            let mut l = modal_logic(id, &["T"]);
            l.rules = rules(&[Mp, GlTheorem, TautCons]);
            return Some(l);
        }
        "GLA" => {
            let mut l = modal_logic(id, &["K", "4", "Lob", "jK", "Sum", "jT", "j4", "GLA1", "GLA2", "GLA3"]);
            l.profile = l.profile.with(Connective::Just).with_ops(&[TermOp::App, TermOp::Sum, TermOp::Bang]);
            l.rules.extend([Ian, An, Reflection]);
            l.spec_kind = SpecKind::Constant;
            return Some(l);
        }
        "QLP" | "QLP⁻" | "QLP-" => return Some(qlp(id != "QLP", id)),
        "QLP+UB" => {
            let mut l = qlp(false, id);
            l.axioms.push("UB");
            return Some(l);
        }
        _ => {}
    }
    if let Some(n) = id.strip_prefix("SacBot_").and_then(parse_param) {
        let mut l = modal_logic(id, &["K", "SacBot"]);
        l.param = Some(n);
        return Some(l);
    }
    if let Some(n) = id.strip_prefix("Sac_").and_then(parse_param) {
        let mut l = modal_logic(id, &["K", "Sac"]);
        l.param = Some(n);
        return Some(l);
    }
    for prefix in ["QLP-_", "QLP⁻_", "QLP_"] {
        if let Some(rest) = id.strip_prefix(prefix) {
            if rest == "n" || parse_param(rest).is_some() {
                let mut l = qlp(prefix != "QLP_", id);
                l.multi_agent = true;
                l.profile.agents = Some((1..=parse_param(rest).unwrap_or(0)).map(|i| i.to_string()).collect());
                return Some(l);
            }
        }
    }
    None
}

/// Looks up a logic id such as `LP`, `GL(FP)`, `J(mu)`, `QLP-_n` or `tS4`.
pub fn get_logic(id: &str) -> Result<LogicSpec, RegistryError> {
    let unknown = || RegistryError::UnknownLogic(id.to_string());
    let (rest, fp) = match id.strip_suffix("(FP)") {
        Some(r) => (r, true),
        None => (id, false),
    };
    let (rest, mu) = match rest.strip_suffix("(mu)").or_else(|| rest.strip_suffix("(µ)")) {
        Some(r) => (r, true),
        None => (rest, false),
    };
    let mut spec = base_logic(rest).ok_or_else(unknown)?;
    spec.id = id.to_string();
    if mu {
        if !matches!(spec.family, Family::Modal | Family::Justification) {
            return Err(unknown());
        }
        spec.mu = true;
        spec.profile = spec.profile.with(Connective::Mu);
        spec.axioms.push("MuCL");
        spec.rules.insert(RuleKind::MuInd);
    }
    if fp {
        spec.fp = Some(match spec.family {
            Family::Modal => OccurrenceMode::Modalized,
            Family::Justification => OccurrenceMode::Justified,
            Family::Quantified => OccurrenceMode::ExistsJustified,
            Family::Timed => return Err(unknown()),
        });
        spec.profile = spec.profile.with(Connective::Fix);
        spec.rules.insert(RuleKind::FpAx);
    }
    // Taut is checked last so that named schemas win the first match.
    spec.axioms.push("Taut");
    Ok(spec)
}

/// The modal counterpart of a justification logic under forgetful projection.
pub fn projection_target(id: &str) -> Option<String> {
    let (rest, suffix) = split_suffixes(id);
    let target = match rest {
        "J" => "K",
        "JT" => "T",
        "JD" => "D",
        "J4" => "K4",
        "JD4" => "D4",
        "LP" | "JT4" => "S4",
        "JT45" => "S5",
        "JB" => "KB",
        "J5" => "K5",
        "EGL" => "GL",
        _ => return None,
    };
    Some(format!("{target}{suffix}"))
}

fn split_suffixes(id: &str) -> (&str, String) {
    let mut rest = id;
    let mut suffix = String::new();
    for s in ["(FP)", "(mu)", "(µ)"] {
        if let Some(r) = rest.strip_suffix(s) {
            rest = r;
            suffix = format!("{s}{suffix}");
        }
    }
    (rest, suffix)
}

/// The single-agent logic a multi-agent QLP collapses to.
pub fn collapse_target(id: &str) -> Option<String> {
    let (rest, suffix) = split_suffixes(id);
    let (name, _) = rest.split_once('_')?;
    matches!(name, "QLP" | "QLP-" | "QLP⁻").then(|| format!("{name}{suffix}"))
}
