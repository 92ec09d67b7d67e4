//! Model text format, one declaration per line; lines starting with `#` are
//! comments. Operation tables are `app`, `sum`, `bang`, `all` or a primitive
//! symbol; `interp default r` covers every primitive symbol without a table.
//!
//! ```text
//! domain r1 r2
//! interp app r1 r2 -> r1
//! interp app default r1
//! interp default r1
//! evidence [agent s] r1 {x=r2} : x:p -> p
//! spec f(x):(x:p -> p)
//! truth fix(d) = 1
//! truth default = 0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::syntax::{parse, Formula};

use super::{Evidence, MModel, ModelError, OpTable, Reason};

fn err(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Format { line, msg: msg.into() }
}

pub fn parse_model(text: &str) -> Result<MModel, ModelError> {
    let mut m = MModel {
        domain: Vec::new(),
        prims: BTreeMap::new(),
        prim_default: None,
        app: OpTable::default(),
        sum: OpTable::default(),
        bang: OpTable::default(),
        uall: None,
        evidence: Vec::new(),
        truth: BTreeMap::new(),
        truth_default: false,
        spec: Vec::new(),
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        let reason = |m: &MModel, name: &str| -> Result<Reason, ModelError> {
            m.reason(name).ok_or_else(|| err(line, format!("unknown reason `{name}`")))
        };
        match kw {
            "domain" => {
                if !m.domain.is_empty() {
                    return Err(err(line, "the domain is declared twice"));
                }
                m.domain = rest.split_whitespace().map(str::to_string).collect();
                if m.domain.is_empty() {
                    return Err(ModelError::EmptyDomain);
                }
            }
            "interp" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match words.as_slice() {
                    ["default", r] => m.prim_default = Some(reason(&m, r)?),
                    [op, "default", r] => {
                        let r = reason(&m, r)?;
                        table(&mut m, op).default = Some(r);
                    }
                    [op, args @ .., "->", r] => {
                        let r = reason(&m, r)?;
                        let args = args.iter().map(|a| reason(&m, a)).collect::<Result<Vec<_>, _>>()?;
                        let arity = match *op {
                            "app" | "sum" | "all" => Some(2),
                            "bang" => Some(1),
                            _ => None,
                        };
                        if arity.is_some_and(|n| n != args.len()) {
                            return Err(err(line, format!("`{op}` takes {} argument(s)", arity.unwrap_or(0))));
                        }
                        table(&mut m, op).entries.insert(args, r);
                    }
                    _ => return Err(err(line, "expected `interp <op> <args> -> <reason>` or `interp <op> default <reason>`")),
                }
            }
            "evidence" => {
                let (agent, rest) = match rest.strip_prefix("agent ") {
                    Some(r) => {
                        let (a, r) = r.trim().split_once(char::is_whitespace).ok_or_else(|| err(line, "missing reason"))?;
                        (Some(a.to_string()), r.trim())
                    }
                    None => (None, rest),
                };
                let (head, formula) = rest.split_once(':').ok_or_else(|| err(line, "expected `: <formula>`"))?;
                let head = head.trim();
                let (r, restriction) = match head.split_once('{') {
                    Some((r, map)) => {
                        let map = map.strip_suffix('}').ok_or_else(|| err(line, "unclosed `{`"))?;
                        let mut out = BTreeMap::new();
                        for pair in map.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                            let (x, rv) = pair.split_once('=').ok_or_else(|| err(line, "expected `x=r`"))?;
                            out.insert(x.trim().to_string(), reason(&m, rv.trim())?);
                        }
                        (r.trim(), out)
                    }
                    None => (head, BTreeMap::new()),
                };
                let reason = reason(&m, r)?;
                let formula = parse(formula.trim()).map_err(|e| err(line, e.to_string()))?;
                m.evidence.push(Evidence { agent, reason, restriction, formula });
            }
            "spec" => m.spec.push(parse(rest).map_err(|e| err(line, e.to_string()))?),
            "truth" => {
                let (lhs, v) = rest.rsplit_once('=').ok_or_else(|| err(line, "expected `truth <letter> = 0|1`"))?;
                let value = match v.trim() {
                    "0" => false,
                    "1" => true,
                    other => return Err(err(line, format!("truth value `{other}` is not 0 or 1"))),
                };
                if lhs.trim() == "default" {
                    m.truth_default = value;
                } else {
                    let letter = parse(lhs.trim()).map_err(|e| err(line, e.to_string()))?;
                    if !matches!(letter, Formula::Atom(_) | Formula::Fix(..)) {
                        return Err(err(line, "only atoms and fixed-point applications carry truth values"));
                    }
                    m.truth.insert(letter, value);
                }
            }
            other => return Err(err(line, format!("unknown declaration `{other}`"))),
        }
        if kw != "domain" && m.domain.is_empty() {
            return Err(err(line, "`domain` must come first"));
        }
    }
    m.validate()?;
    Ok(m)
}

fn table<'a>(m: &'a mut MModel, op: &str) -> &'a mut OpTable {
    match op {
        "app" => &mut m.app,
        "sum" => &mut m.sum,
        "bang" => &mut m.bang,
        "all" => m.uall.get_or_insert_with(OpTable::default),
        f => m.prims.entry(f.to_string()).or_default(),
    }
}

pub fn print_model(m: &MModel) -> String {
    let mut out = String::new();
    let name = |r: &Reason| m.domain[*r].as_str();
    let _ = writeln!(out, "domain {}", m.domain.join(" "));
    let mut tables: Vec<(&str, &OpTable)> = vec![("app", &m.app), ("sum", &m.sum), ("bang", &m.bang)];
    if let Some(u) = &m.uall {
        tables.push(("all", u));
    }
    tables.extend(m.prims.iter().map(|(k, t)| (k.as_str(), t)));
    for (op, t) in tables {
        if let Some(d) = &t.default {
            let _ = writeln!(out, "interp {op} default {}", name(d));
        }
        for (args, r) in &t.entries {
            let args: Vec<&str> = args.iter().map(name).collect();
            let _ = writeln!(out, "interp {op} {} -> {}", args.join(" "), name(r));
        }
    }
    if let Some(d) = &m.prim_default {
        let _ = writeln!(out, "interp default {}", name(d));
    }
    for e in &m.evidence {
        let agent = e.agent.as_ref().map(|a| format!("agent {a} ")).unwrap_or_default();
        let map: Vec<String> = e.restriction.iter().map(|(x, r)| format!("{x}={}", name(r))).collect();
        let map = if map.is_empty() { String::new() } else { format!(" {{{}}}", map.join(", ")) };
        let _ = writeln!(out, "evidence {agent}{}{map} : {}", name(&e.reason), e.formula);
    }
    for s in &m.spec {
        let _ = writeln!(out, "spec {s}");
    }
    for (letter, v) in &m.truth {
        let _ = writeln!(out, "truth {letter} = {}", u8::from(*v));
    }
    let _ = writeln!(out, "truth default = {}", u8::from(m.truth_default));
    out
}
