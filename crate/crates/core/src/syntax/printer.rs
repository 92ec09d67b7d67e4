use super::ast::{Formula, Term};

// Binding levels: `->`/`<->` 1, `|`/`xor` 2, `&` 3, prefixes and atoms 4.
// Binders extend maximally right, so they need parentheses unless they end
// the enclosing text (`tail`).

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Imp(..) | Formula::Iff(..) => 1,
        Formula::Or(..) | Formula::Xor(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn is_binder(f: &Formula) -> bool {
    matches!(f, Formula::Forall(..) | Formula::Exists(..) | Formula::Mu(..))
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0, true);
    out
}

fn write_formula(out: &mut String, f: &Formula, min_level: u8, tail: bool) {
    let paren = if is_binder(f) { !tail } else { level(f) < min_level };
    if paren {
        out.push('(');
    }
    let tail = tail || paren;
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Falsum => out.push_str("false"),
        Formula::Not(a) => {
            out.push('~');
            write_formula(out, a, 4, tail);
        }
        Formula::Boxed(a) => {
            out.push_str("[]");
            write_formula(out, a, 4, tail);
        }
        Formula::Knows(i, a) => {
            out.push_str(&format!("K@{i} "));
            write_formula(out, a, 4, tail);
        }
        Formula::Just(t, agent, a) => {
            write_term_before_colon(out, t);
            match agent {
                Some(s) => {
                    out.push_str(":@");
                    out.push_str(s);
                    out.push(' ');
                }
                None => out.push(':'),
            }
            write_formula(out, a, 4, tail);
        }
        Formula::And(a, b) => binary(out, a, " & ", b, 3, 4, tail),
        Formula::Or(a, b) => binary(out, a, " | ", b, 2, 3, tail),
        Formula::Xor(a, b) => binary(out, a, " xor ", b, 2, 3, tail),
        Formula::Imp(a, b) => binary(out, a, " -> ", b, 2, 1, tail),
        Formula::Iff(a, b) => binary(out, a, " <-> ", b, 2, 1, tail),
        Formula::Forall(x, a) => binder(out, "all", x, a),
        Formula::Exists(x, a) => binder(out, "ex", x, a),
        Formula::Mu(p, a) => binder(out, "mu", p, a),
        Formula::Fix(name, args) => {
            out.push_str("fix(");
            out.push_str(name);
            for (i, arg) in args.iter().enumerate() {
                out.push_str(if i == 0 { "; " } else { ", " });
                write_formula(out, arg, 0, true);
            }
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

fn binary(out: &mut String, a: &Formula, op: &str, b: &Formula, left_min: u8, right_min: u8, tail: bool) {
    write_formula(out, a, left_min, false);
    out.push_str(op);
    write_formula(out, b, right_min, tail);
}

fn binder(out: &mut String, kw: &str, var: &str, body: &Formula) {
    out.push_str(kw);
    out.push(' ');
    out.push_str(var);
    out.push_str(" . ");
    write_formula(out, body, 0, true);
}

fn write_term_before_colon(out: &mut String, t: &Term) {
    if t.is_compound_infix() {
        out.push('(');
        write_term(out, t);
        out.push(')');
    } else {
        write_term(out, t);
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

// Term levels: `+` 1, `*` 2, prefixes and atoms 3; both infix operators are left-assoc.
fn term_level(t: &Term) -> u8 {
    match t {
        Term::Sum(..) => 1,
        Term::App(..) => 2,
        _ => 3,
    }
}

fn write_term_at(out: &mut String, t: &Term, min_level: u8) {
    if term_level(t) < min_level {
        out.push('(');
        write_term(out, t);
        out.push(')');
    } else {
        write_term(out, t);
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(x) | Term::Const(x) => out.push_str(x),
        Term::Prim(f, args) => {
            out.push_str(f);
            out.push('(');
            out.push_str(&args.join(","));
            out.push(')');
        }
        Term::App(a, b) => {
            write_term_at(out, a, 2);
            out.push('*');
            write_term_at(out, b, 3);
        }
        Term::Sum(a, b) => {
            write_term_at(out, a, 1);
            out.push('+');
            write_term_at(out, b, 2);
        }
        Term::Bang(a) => {
            out.push('!');
            write_prefix_operand(out, a);
        }
        Term::Quest(a) => {
            out.push('?');
            write_prefix_operand(out, a);
        }
        Term::WQuest(a) => {
            out.push_str("??");
            write_prefix_operand(out, a);
        }
        Term::UAll(a, x) => {
            out.push('(');
            write_term(out, a);
            out.push_str(" all ");
            out.push_str(x);
            out.push(')');
        }
    }
}

// `?` directly followed by `?` would lex as `??`.
fn write_prefix_operand(out: &mut String, t: &Term) {
    if matches!(t, Term::Quest(_) | Term::WQuest(_)) || term_level(t) < 3 {
        out.push('(');
        write_term(out, t);
        out.push(')');
    } else {
        write_term(out, t);
    }
}
