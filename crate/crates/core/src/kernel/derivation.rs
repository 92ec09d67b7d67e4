use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use crate::fixedpoint::{make_fp_operator, FpOperator};
use crate::registry::{get_logic, Specification};
use crate::syntax::{parse, parse_term, print_formula, Formula, ParseError, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InlineRule {
    /// Lifting (internalization) of the premise-free cone of a step.
    Lift(usize),
    /// Internalization in QLP, covering Gen and qNec.
    Internalize(usize),
    /// Substitution lemma: `[t/x]` applied to the cone of a step.
    Subst { step: usize, var: String, term: Term },
    /// Deduction theorem: discharge a premise from a step.
    Deduce { step: usize, premise: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Axiom(String),
    Premise(String),
    Mp(usize, usize),
    Nec(usize),
    Gen(usize, String),
    QNec(usize, String),
    Ian,
    An,
    MuCl,
    MuInd(usize),
    /// `e i t`: from `A` infer `K@t A`.
    E(usize, u32),
    /// `de i t1 t2`: from `A` infer `K@t1 A -> K@t2 K@t1 A`.
    De(usize, u32, u32),
    FpAx(String, Vec<Formula>),
    TautCons(Vec<usize>),
    Reg(usize),
    AdmissibleK(Vec<usize>, u32),
    /// A theorem of GL, established by the referenced derivation file.
    GlTheorem(PathBuf, Box<Derivation>),
    Reflection(usize),
    Inline(InlineRule),
}

impl Rule {
    /// Step numbers this rule cites.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Rule::Mp(i, j) => vec![*i, *j],
            Rule::Nec(i)
            | Rule::Gen(i, _)
            | Rule::QNec(i, _)
            | Rule::MuInd(i)
            | Rule::E(i, _)
            | Rule::De(i, _, _)
            | Rule::Reg(i)
            | Rule::Reflection(i) => vec![*i],
            Rule::TautCons(is) | Rule::AdmissibleK(is, _) => is.clone(),
            Rule::Inline(r) => match r {
                InlineRule::Lift(i) | InlineRule::Internalize(i) => vec![*i],
                InlineRule::Subst { step, .. } | InlineRule::Deduce { step, .. } => vec![*step],
            },
            _ => vec![],
        }
    }

    /// Rewrites every cited step number through `f`.
    pub fn renumber(&self, f: &dyn Fn(usize) -> usize) -> Rule {
        match self {
            Rule::Mp(i, j) => Rule::Mp(f(*i), f(*j)),
            Rule::Nec(i) => Rule::Nec(f(*i)),
            Rule::Gen(i, x) => Rule::Gen(f(*i), x.clone()),
            Rule::QNec(i, x) => Rule::QNec(f(*i), x.clone()),
            Rule::MuInd(i) => Rule::MuInd(f(*i)),
            Rule::E(i, t) => Rule::E(f(*i), *t),
            Rule::De(i, a, b) => Rule::De(f(*i), *a, *b),
            Rule::Reg(i) => Rule::Reg(f(*i)),
            Rule::Reflection(i) => Rule::Reflection(f(*i)),
            Rule::TautCons(is) => Rule::TautCons(is.iter().map(|i| f(*i)).collect()),
            Rule::AdmissibleK(is, t) => Rule::AdmissibleK(is.iter().map(|i| f(*i)).collect(), *t),
            Rule::Inline(r) => Rule::Inline(match r {
                InlineRule::Lift(i) => InlineRule::Lift(f(*i)),
                InlineRule::Internalize(i) => InlineRule::Internalize(f(*i)),
                InlineRule::Subst { step, var, term } => {
                    InlineRule::Subst { step: f(*step), var: var.clone(), term: term.clone() }
                }
                InlineRule::Deduce { step, premise } => InlineRule::Deduce { step: f(*step), premise: premise.clone() },
            }),
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub formula: Formula,
    pub rule: Rule,
}

/// How the specification was given, kept for printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecSource {
    Tcs,
    Empty,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub logic: String,
    pub spec: Specification,
    pub spec_source: SpecSource,
    pub agents: Option<Vec<String>>,
    pub fixes: Vec<FpOperator>,
    pub premises: Vec<(String, Formula)>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("cannot read `{path}`: {msg}")]
    Io { path: String, msg: String },
}

impl Derivation {
    pub fn new(logic: &str) -> Self {
        Derivation {
            logic: logic.to_string(),
            spec: Specification::Total,
            spec_source: SpecSource::Tcs,
            agents: None,
            fixes: Vec::new(),
            premises: Vec::new(),
            steps: Vec::new(),
        }
    }

    /// A copy of the header (logic, spec, agents, operators, premises) with no steps.
    pub fn header_only(&self) -> Self {
        Derivation { steps: Vec::new(), ..self.clone() }
    }

    pub fn premise(&self, name: &str) -> Option<&Formula> {
        self.premises.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn fix_operator(&self, name: &str) -> Option<&FpOperator> {
        self.fixes.iter().find(|op| op.name == name)
    }

    pub fn step(&self, index: usize) -> Option<&Step> {
        self.steps.iter().find(|s| s.index == index)
    }

    pub fn final_formula(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Appends a step numbered one past the last; returns its number.
    pub fn push(&mut self, formula: Formula, rule: Rule) -> usize {
        let index = self.steps.last().map_or(1, |s| s.index + 1);
        self.steps.push(Step { index, formula, rule });
        index
    }

    /// Step `index` and every step it cites transitively, in order.
    pub fn cone(&self, index: usize) -> Derivation {
        let mut keep = BTreeSet::new();
        let mut todo = vec![index];
        while let Some(i) = todo.pop() {
            if keep.insert(i) {
                if let Some(s) = self.step(i) {
                    todo.extend(s.rule.references());
                }
            }
        }
        let mut out = self.header_only();
        out.steps = self.steps.iter().filter(|s| keep.contains(&s.index)).cloned().collect();
        out
    }

    /// Renumbers steps to 1..n, keeping citations consistent.
    pub fn renumbered(&self) -> Derivation {
        let map: std::collections::BTreeMap<usize, usize> =
            self.steps.iter().enumerate().map(|(k, s)| (s.index, k + 1)).collect();
        let mut out = self.header_only();
        out.steps = self
            .steps
            .iter()
            .map(|s| Step {
                index: map[&s.index],
                formula: s.formula.clone(),
                rule: s.rule.renumber(&|i| map.get(&i).copied().unwrap_or(i)),
            })
            .collect();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RetargetError {
    #[error(transparent)]
    Registry(#[from] crate::registry::RegistryError),
    #[error("logic `{0}` has no fixed-point operators")]
    NoFixedPoints(String),
    #[error(transparent)]
    Fp(#[from] crate::fixedpoint::FpError),
}

impl Derivation {
    /// The same steps read in another logic. Operator declarations are
    /// re-validated under that logic's eligibility condition.
    pub fn retarget(&self, logic: &str) -> Result<Derivation, RetargetError> {
        let spec = get_logic(logic)?;
        let mut out = self.clone();
        out.logic = logic.to_string();
        if !self.fixes.is_empty() {
            let mode = spec.fp.ok_or_else(|| RetargetError::NoFixedPoints(logic.to_string()))?;
            out.fixes = self
                .fixes
                .iter()
                .map(|op| make_fp_operator(&op.name, &op.p, &op.params, op.body.clone(), mode))
                .collect::<Result<_, _>>()?;
        }
        Ok(out)
    }
}

fn line_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Line { line, msg: msg.into() }
}

fn parse_f(text: &str, line: usize) -> Result<Formula, FormatError> {
    parse(text.trim()).map_err(|e| line_err(line, format!("{e} in `{}`", text.trim())))
}

/// Splits at the first `;` outside parentheses.
fn split_top(text: &str) -> (&str, Option<&str>) {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => return (&text[..i], Some(&text[i + 1..])),
            _ => {}
        }
    }
    (text, None)
}

fn parse_index(s: &str, line: usize) -> Result<usize, FormatError> {
    s.trim().parse::<usize>().map_err(|_| line_err(line, format!("expected a step number, found `{s}`")))
}

fn parse_time(s: &str, line: usize) -> Result<u32, FormatError> {
    s.trim().parse::<u32>().map_err(|_| line_err(line, format!("expected a time index, found `{s}`")))
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>, FormatError> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).map(|p| parse_index(p, line)).collect()
}

/// Reads a specification file: one licensed formula per line, `#` comments.
pub fn load_spec_file(path: &Path) -> Result<BTreeSet<Formula>, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    let mut out = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        out.insert(parse_f(l, n + 1)?);
    }
    Ok(out)
}

/// Joins physical lines: a line starting with whitespace continues the previous one.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if raw.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.1.push(' ');
                last.1.push_str(trimmed);
                continue;
            }
        }
        out.push((n + 1, trimmed.to_string()));
    }
    out
}

/// Parses a derivation file. `base_dir` resolves relative `spec: file` and
/// `gl` references.
pub fn parse_derivation(text: &str, base_dir: &Path) -> Result<Derivation, FormatError> {
    let mut d = Derivation::new("");
    let mut have_logic = false;
    for (line, l) in logical_lines(text) {
        if let Some(rest) = l.strip_prefix("logic:") {
            d.logic = rest.trim().to_string();
            have_logic = true;
        } else if let Some(rest) = l.strip_prefix("spec:") {
            let rest = rest.trim();
            if rest == "tcs" {
                d.spec = Specification::Total;
                d.spec_source = SpecSource::Tcs;
            } else if rest == "empty" {
                d.spec = Specification::Empty;
                d.spec_source = SpecSource::Empty;
            } else if let Some(p) = rest.strip_prefix("file") {
                let rel = PathBuf::from(p.trim());
                d.spec = Specification::Explicit(load_spec_file(&base_dir.join(&rel))?);
                d.spec_source = SpecSource::File(rel);
            } else {
                return Err(line_err(line, format!("unknown specification `{rest}`")));
            }
        } else if let Some(rest) = l.strip_prefix("agents:") {
            let rest = rest.trim();
            d.agents = Some(match rest.parse::<u32>() {
                Ok(n) => (1..=n).map(|i| i.to_string()).collect(),
                Err(_) => rest.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect(),
            });
        } else if let Some(rest) = l.strip_prefix("fix ") {
            d.fixes.push(parse_fix_header(rest, line, &d.logic)?);
        } else if let Some(rest) = l.strip_prefix("premise ") {
            let (name, f) = rest
                .split_once(':')
                .ok_or_else(|| line_err(line, "expected `premise <name>: <formula>`"))?;
            d.premises.push((name.trim().to_string(), parse_f(f, line)?));
        } else if l.starts_with(|c: char| c.is_ascii_digit()) {
            let (num, rest) = l.split_once('.').ok_or_else(|| line_err(line, "expected `<n>. <formula> ; <rule>`"))?;
            let index = parse_index(num, line)?;
            if d.steps.last().is_some_and(|s| s.index >= index) {
                return Err(line_err(line, format!("step {index} is not numbered above its predecessor")));
            }
            let (ftext, rule) = split_top(rest);
            let rule = rule.ok_or_else(|| line_err(line, "missing `; <rule>`"))?;
            let formula = parse_f(ftext, line)?;
            let rule = parse_rule(rule.trim(), line, base_dir)?;
            for r in rule.references() {
                if r >= index || d.step(r).is_none() {
                    return Err(line_err(line, format!("step {index} cites step {r}, which is not an earlier step")));
                }
            }
            d.steps.push(Step { index, formula, rule });
        } else {
            return Err(line_err(line, format!("unrecognized line `{l}`")));
        }
    }
    if !have_logic {
        return Err(line_err(1, "missing `logic:` header"));
    }
    Ok(d)
}

/// `fix <name> <p> (<q1,...>) := <body>`; eligibility follows the logic family.
fn parse_fix_header(rest: &str, line: usize, logic: &str) -> Result<FpOperator, FormatError> {
    let (head, body) = rest.split_once(":=").ok_or_else(|| line_err(line, "expected `:=` in fix declaration"))?;
    let (names, params) = match head.split_once('(') {
        Some((n, p)) => (n, p.trim().trim_end_matches(')')),
        None => (head, ""),
    };
    let mut words = names.split_whitespace();
    let (Some(name), Some(p), None) = (words.next(), words.next(), words.next()) else {
        return Err(line_err(line, "expected `fix <name> <p> (<params>) := <body>`"));
    };
    let params: Vec<String> =
        params.split(',').map(|q| q.trim().to_string()).filter(|q| !q.is_empty()).collect();
    let body = parse_f(body, line)?;
    let spec = get_logic(logic).map_err(|e| line_err(line, format!("{e} (declare `logic:` before `fix`)")))?;
    let mode = spec.fp.ok_or_else(|| line_err(line, format!("logic `{logic}` has no fixed-point operators")))?;
    make_fp_operator(name, p, &params, body, mode).map_err(|e| line_err(line, e.to_string()))
}

fn parse_rule(text: &str, line: usize, base_dir: &Path) -> Result<Rule, FormatError> {
    let (head, tail) = split_top(text);
    let mut words = head.split_whitespace();
    let name = words.next().ok_or_else(|| line_err(line, "missing rule"))?;
    let args: Vec<&str> = words.collect();
    let arg = |k: usize| -> Result<&str, FormatError> {
        args.get(k).copied().ok_or_else(|| line_err(line, format!("rule `{name}` needs more arguments")))
    };
    let rest_after = |k: usize| args[k.min(args.len())..].join(" ");
    let rule = match name {
        "ax" => Rule::Axiom(arg(0)?.to_string()),
        "premise" => Rule::Premise(arg(0)?.to_string()),
        "mp" => match parse_list(&rest_after(0), line)?.as_slice() {
            [i, j] => Rule::Mp(*i, *j),
            _ => return Err(line_err(line, "`mp` cites exactly two steps")),
        },
        "nec" => Rule::Nec(parse_index(arg(0)?, line)?),
        "gen" => Rule::Gen(parse_index(arg(0)?, line)?, arg(1)?.to_string()),
        "qnec" => Rule::QNec(parse_index(arg(0)?, line)?, arg(1)?.to_string()),
        "ian" => Rule::Ian,
        "an" => Rule::An,
        "mu-cl" => Rule::MuCl,
        "mu-ind" => Rule::MuInd(parse_index(arg(0)?, line)?),
        "e" => Rule::E(parse_index(arg(0)?, line)?, parse_time(arg(1)?, line)?),
        "de" => Rule::De(parse_index(arg(0)?, line)?, parse_time(arg(1)?, line)?, parse_time(arg(2)?, line)?),
        "fp" => {
            let args = match tail {
                Some(t) => split_args(t).iter().map(|a| parse_f(a, line)).collect::<Result<_, _>>()?,
                None => Vec::new(),
            };
            return Ok(Rule::FpAx(arg(0)?.to_string(), args));
        }
        "prop" => Rule::TautCons(parse_list(&rest_after(0), line)?),
        "reg" => Rule::Reg(parse_index(arg(0)?, line)?),
        "admk" => {
            let t = args.last().ok_or_else(|| line_err(line, "`admk` needs steps and a time"))?;
            Rule::AdmissibleK(parse_list(&args[..args.len() - 1].join(" "), line)?, parse_time(t, line)?)
        }
        "gl" => {
            let rel = PathBuf::from(arg(0)?);
            let path = base_dir.join(&rel);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| FormatError::Io { path: path.display().to_string(), msg: e.to_string() })?;
            let inner = parse_derivation(&text, path.parent().unwrap_or(base_dir))?;
            Rule::GlTheorem(rel, Box::new(inner))
        }
        "refl" => Rule::Reflection(parse_index(arg(0)?, line)?),
        "inline" => Rule::Inline(parse_inline(&args, line)?),
        other => return Err(line_err(line, format!("unknown rule `{other}`"))),
    };
    if tail.is_some() {
        return Err(line_err(line, format!("rule `{name}` takes no `;` arguments")));
    }
    Ok(rule)
}

fn parse_inline(args: &[&str], line: usize) -> Result<InlineRule, FormatError> {
    let need = |k: usize| -> Result<&str, FormatError> {
        args.get(k).copied().ok_or_else(|| line_err(line, "incomplete `inline` rule"))
    };
    Ok(match need(0)? {
        "lift" => InlineRule::Lift(parse_index(need(1)?, line)?),
        "internalize" => InlineRule::Internalize(parse_index(need(1)?, line)?),
        "subst" => {
            let term_text = args[3.min(args.len())..].join(" ");
            let term = parse_term(&term_text)
                .map_err(|e: ParseError| line_err(line, format!("{e} in term `{term_text}`")))?;
            InlineRule::Subst { step: parse_index(need(1)?, line)?, var: need(2)?.to_string(), term }
        }
        "deduce" => InlineRule::Deduce { step: parse_index(need(1)?, line)?, premise: need(2)?.to_string() },
        other => return Err(line_err(line, format!("unknown inline transform `{other}`"))),
    })
}

/// Splits at top-level commas.
fn split_args(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn rule_text(rule: &Rule) -> String {
    let list = |is: &[usize]| is.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    match rule {
        Rule::Axiom(id) => format!("ax {id}"),
        Rule::Premise(n) => format!("premise {n}"),
        Rule::Mp(i, j) => format!("mp {i},{j}"),
        Rule::Nec(i) => format!("nec {i}"),
        Rule::Gen(i, x) => format!("gen {i} {x}"),
        Rule::QNec(i, x) => format!("qnec {i} {x}"),
        Rule::Ian => "ian".to_string(),
        Rule::An => "an".to_string(),
        Rule::MuCl => "mu-cl".to_string(),
        Rule::MuInd(i) => format!("mu-ind {i}"),
        Rule::E(i, t) => format!("e {i} {t}"),
        Rule::De(i, a, b) => format!("de {i} {a} {b}"),
        Rule::FpAx(name, args) if args.is_empty() => format!("fp {name}"),
        Rule::FpAx(name, args) => {
            format!("fp {name} ; {}", args.iter().map(print_formula).collect::<Vec<_>>().join(", "))
        }
        Rule::TautCons(is) => format!("prop {}", list(is)),
        Rule::Reg(i) => format!("reg {i}"),
        Rule::AdmissibleK(is, t) => format!("admk {} {t}", list(is)),
        Rule::GlTheorem(path, _) => format!("gl {}", path.display()),
        Rule::Reflection(i) => format!("refl {i}"),
        Rule::Inline(r) => match r {
            InlineRule::Lift(i) => format!("inline lift {i}"),
            InlineRule::Internalize(i) => format!("inline internalize {i}"),
            InlineRule::Subst { step, var, term } => format!("inline subst {step} {var} {term}"),
            InlineRule::Deduce { step, premise } => format!("inline deduce {step} {premise}"),
        },
    }
}

impl fmt::Display for Derivation {
    /// The file format accepted by [`parse_derivation`]. Explicit specifications
    /// print as their file reference.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "logic: {}", self.logic)?;
        match &self.spec_source {
            SpecSource::Tcs => writeln!(out, "spec: tcs")?,
            SpecSource::Empty => writeln!(out, "spec: empty")?,
            SpecSource::File(p) => writeln!(out, "spec: file {}", p.display())?,
        }
        if let Some(agents) = &self.agents {
            writeln!(out, "agents: {}", agents.join(", "))?;
        }
        for op in &self.fixes {
            writeln!(out, "fix {} {} ({}) := {}", op.name, op.p, op.params.join(", "), op.body)?;
        }
        for (name, formula) in &self.premises {
            writeln!(out, "premise {name}: {formula}")?;
        }
        for s in &self.steps {
            writeln!(out, "{}. {} ; {}", s.index, s.formula, rule_text(&s.rule))?;
        }
        f.write_str(&out)
    }
}
