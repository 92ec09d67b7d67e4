use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    BoxOp,
    Diamond,
    /// `K@i`
    Knows(u32),
    Colon,
    /// `:@`
    ColonAt,
    Dot,
    LParen,
    RParen,
    Comma,
    Semi,
    Star,
    Plus,
    Bang,
    Quest,
    WQuest,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    /// Byte offset into the source text.
    pub pos: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '#' | '\'' | '$')
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: String| ParseError::Syntax { pos, msg };
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let next2 = chars.get(i + 2).map(|&(_, c)| c);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, width) = match c {
            '~' => (Tok::Tilde, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Bar, 1),
            '.' => (Tok::Dot, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '*' => (Tok::Star, 1),
            '+' => (Tok::Plus, 1),
            '!' => (Tok::Bang, 1),
            '?' if next == Some('?') => (Tok::WQuest, 2),
            '?' => (Tok::Quest, 1),
            ':' if next == Some('@') => (Tok::ColonAt, 2),
            ':' => (Tok::Colon, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '<' if next == Some('-') && next2 == Some('>') => (Tok::DArrow, 3),
            '<' if next == Some('>') => (Tok::Diamond, 2),
            '[' if next == Some(']') => (Tok::BoxOp, 2),
            'K' if next == Some('@') => {
                let mut j = i + 2;
                let start = j;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(err(pos, "expected a time index after `K@`".into()));
                }
                let digits: String = chars[start..j].iter().map(|&(_, c)| c).collect();
                let n = digits
                    .parse::<u32>()
                    .map_err(|_| err(pos, format!("time index `{digits}` out of range")))?;
                out.push(Token { tok: Tok::Knows(n), pos });
                i = j;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let n = digits
                    .parse::<u32>()
                    .map_err(|_| err(pos, format!("number `{digits}` out of range")))?;
                out.push(Token { tok: Tok::Num(n), pos });
                i = j;
                continue;
            }
            c if ident_start(c) => {
                let mut j = i;
                while j < chars.len() && ident_char(chars[j].1) {
                    j += 1;
                }
                let name: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                out.push(Token { tok: Tok::Ident(name), pos });
                i = j;
                continue;
            }
            other => return Err(err(pos, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, pos });
        i += width;
    }
    Ok(out)
}
