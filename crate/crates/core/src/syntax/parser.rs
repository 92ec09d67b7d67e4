use super::ast::{is_var_name, Formula, Term};
use super::lexer::{lex, Tok, Token};
use super::ops::replace_free_atom;
use super::occurrence::{occurrence_check, OccurrenceMode};
use super::ParseError;

const KEYWORDS: &[&str] = &["false", "all", "ex", "mu", "nu", "fix", "xor"];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    allow_meta: bool,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_meta: bool) -> PResult<Self> {
        Ok(Parser { src, toks: lex(src)?, pos: 0, allow_meta })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.pos).unwrap_or(self.src.len())
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn is_keyword(&self, name: &str) -> bool {
        KEYWORDS.contains(&name)
    }

    fn check_name(&self, name: &str) -> PResult<()> {
        if !self.allow_meta && name.contains('$') {
            return self.error(format!("`$` is reserved for schema metavariables (in `{name}`)"));
        }
        Ok(())
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(name)) if !self.is_keyword(name) => {
                let name = name.clone();
                self.check_name(&name)?;
                self.pos += 1;
                Ok(name)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn variable(&mut self) -> PResult<String> {
        let name = self.ident("a justification variable")?;
        if !is_var_name(&name) {
            self.pos -= 1;
            return self.error(format!("`{name}` is not a variable (variables start with u..z)"));
        }
        Ok(name)
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(n)) if n == kw)
    }

    // formula := or_level (('->' | '<->') formula)?
    fn formula(&mut self) -> PResult<Formula> {
        let left = self.or_level()?;
        if self.eat(&Tok::Arrow) {
            let right = self.formula()?;
            return Ok(Formula::imp(left, right));
        }
        if self.eat(&Tok::DArrow) {
            let right = self.formula()?;
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn or_level(&mut self) -> PResult<Formula> {
        let mut left = self.and_level()?;
        loop {
            if self.eat(&Tok::Bar) {
                let right = self.and_level()?;
                left = Formula::or(left, right);
            } else if self.keyword("xor") {
                self.pos += 1;
                let right = self.and_level()?;
                left = Formula::xor(left, right);
            } else {
                return Ok(left);
            }
        }
    }

    fn and_level(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::BoxOp) => {
                self.pos += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Tok::Diamond) => {
                self.pos += 1;
                let body = self.unary()?;
                Ok(Formula::not(Formula::boxed(Formula::not(body))))
            }
            Some(Tok::Knows(i)) => {
                self.pos += 1;
                Ok(Formula::knows(i, self.unary()?))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "false" => {
                    self.pos += 1;
                    Ok(Formula::Falsum)
                }
                "all" | "ex" => {
                    self.pos += 1;
                    let x = self.variable()?;
                    self.expect(&Tok::Dot, "`.` after the bound variable")?;
                    let body = self.formula()?;
                    Ok(if name == "all" { Formula::forall(&x, body) } else { Formula::exists(&x, body) })
                }
                "mu" | "nu" => self.fixpoint_binder(name == "nu"),
                "fix" => self.fix_application(),
                _ => self.justified_or_atom(),
            },
            Some(Tok::LParen) => {
                if let Some(f) = self.prefix_quantifier()? {
                    return Ok(f);
                }
                if let Some(f) = self.try_justification()? {
                    return Ok(f);
                }
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Bang) | Some(Tok::Quest) | Some(Tok::WQuest) => match self.try_justification()? {
                Some(f) => Ok(f),
                None => self.error("expected `:` after a justification term"),
            },
            Some(_) => self.error("expected a formula"),
            None => self.error("unexpected end of input"),
        }
    }

    /// `(all x) A` and `(ex x) A`: the quantifier binds like a prefix operator,
    /// so its scope is the next unary formula only.
    fn prefix_quantifier(&mut self) -> PResult<Option<Formula>> {
        let kw = match (self.peek_at(1), self.peek_at(3)) {
            (Some(Tok::Ident(kw)), Some(Tok::RParen)) if kw == "all" || kw == "ex" => kw.clone(),
            _ => return Ok(None),
        };
        self.pos += 2;
        let x = self.variable()?;
        self.pos += 1;
        let body = self.unary()?;
        Ok(Some(if kw == "all" { Formula::forall(&x, body) } else { Formula::exists(&x, body) }))
    }

    fn fixpoint_binder(&mut self, greatest: bool) -> PResult<Formula> {
        let start = self.offset();
        self.pos += 1;
        let p = self.ident("a propositional variable")?;
        self.expect(&Tok::Dot, "`.` after the bound variable")?;
        let body = self.formula()?;
        if !occurrence_check(OccurrenceMode::Positive, &p, &body) {
            return Err(ParseError::NotPositive { pos: start, var: p });
        }
        if greatest {
            let flipped = replace_free_atom(&body, &p, &Formula::not(Formula::Atom(p.clone())));
            Ok(Formula::not(Formula::mu(&p, Formula::not(flipped))))
        } else {
            Ok(Formula::mu(&p, body))
        }
    }

    fn fix_application(&mut self) -> PResult<Formula> {
        self.pos += 1;
        self.expect(&Tok::LParen, "`(` after `fix`")?;
        let name = self.ident("a fixed-point operator name")?;
        let mut args = Vec::new();
        if self.eat(&Tok::Semi) {
            args.push(self.formula()?);
            while self.eat(&Tok::Comma) {
                args.push(self.formula()?);
            }
        }
        self.expect(&Tok::RParen, "`)` closing `fix(`")?;
        Ok(Formula::Fix(name, args))
    }

    fn justified_or_atom(&mut self) -> PResult<Formula> {
        if let Some(f) = self.try_justification()? {
            return Ok(f);
        }
        let name = self.ident("a propositional variable")?;
        Ok(Formula::Atom(name))
    }

    /// Parses `t : A` / `t :@s A` if a term followed by a colon starts here;
    /// otherwise restores the position and returns `None`.
    fn try_justification(&mut self) -> PResult<Option<Formula>> {
        let save = self.pos;
        let term = match self.term() {
            Ok(t) => t,
            Err(_) => {
                self.pos = save;
                return Ok(None);
            }
        };
        let agent = match self.peek() {
            Some(Tok::Colon) => {
                self.pos += 1;
                None
            }
            Some(Tok::ColonAt) => {
                self.pos += 1;
                match self.bump() {
                    Some(Tok::Ident(a)) => Some(a),
                    Some(Tok::Num(n)) => Some(n.to_string()),
                    _ => {
                        self.pos -= 1;
                        return self.error("expected an agent after `:@`");
                    }
                }
            }
            _ => {
                self.pos = save;
                return Ok(None);
            }
        };
        let body = self.unary()?;
        Ok(Some(Formula::just_by(term, agent, body)))
    }

    // term := app ('+' app)*
    fn term(&mut self) -> PResult<Term> {
        let mut left = self.term_app()?;
        while self.eat(&Tok::Plus) {
            let right = self.term_app()?;
            left = Term::sum(left, right);
        }
        Ok(left)
    }

    fn term_app(&mut self) -> PResult<Term> {
        let mut left = self.term_prefix()?;
        while self.eat(&Tok::Star) {
            let right = self.term_prefix()?;
            left = Term::app(left, right);
        }
        Ok(left)
    }

    fn term_prefix(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Term::Bang(Box::new(self.term_prefix()?)))
            }
            Some(Tok::Quest) => {
                self.pos += 1;
                Ok(Term::Quest(Box::new(self.term_prefix()?)))
            }
            Some(Tok::WQuest) => {
                self.pos += 1;
                Ok(Term::WQuest(Box::new(self.term_prefix()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                if self.keyword("all") {
                    self.pos += 1;
                    let x = self.variable()?;
                    self.expect(&Tok::RParen, "`)` closing the uniform verifier")?;
                    return Ok(Term::UAll(Box::new(inner), x));
                }
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("a term")?;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        args.push(self.variable()?);
                        while self.eat(&Tok::Comma) {
                            args.push(self.variable()?);
                        }
                        self.expect(&Tok::RParen, "`)` closing the primitive term")?;
                    }
                    return Ok(Term::Prim(name, args));
                }
                Ok(if is_var_name(&name) { Term::Var(name) } else { Term::Const(name) })
            }
            _ => self.error("expected a term"),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            return self.error("unexpected trailing input");
        }
        Ok(())
    }
}

/// Parses a formula without any language-profile restriction.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, false)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a schema pattern: identifiers starting with `$` are metavariables.
pub(crate) fn parse_pattern(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, true)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a justification term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
