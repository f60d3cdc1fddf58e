use std::fmt;

use super::Formula;

/// A syntax error at a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.pos + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Not,
    And,
    Or,
    Bar,
    Arrow,
    Iff,
    LParen,
    RParen,
    Zero,
    One,
    Name(String),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Not => "`~`",
            Tok::And => "`&`",
            Tok::Or => "`\\/`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`->`",
            Tok::Iff => "`<->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Zero => "`0`",
            Tok::One => "`1`",
            Tok::Name(n) => return write!(f, "`{n}`"),
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

fn err(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str, allow_meta: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                i += 1;
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if text[i..].starts_with("<->") => {
                i += 2;
                Tok::Iff
            }
            b'0' | b'1' => {
                if bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
                    return Err(err(i, "constants are `0` and `1`; names cannot start with a digit"));
                }
                if c == b'0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            b'$' if allow_meta => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(i, "`$` must be followed by a metavariable name"));
                }
                let name = text[i..j].to_string();
                i = j;
                out.push((start, Tok::Name(name)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let name = text[i..j].to_string();
                i = j;
                out.push((start, Tok::Name(name)));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(i, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.imp()?;
        while self.eat(&Tok::Iff) {
            f = Formula::iff(f, self.imp()?);
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let f = self.cond()?;
        if self.eat(&Tok::Arrow) {
            return Ok(Formula::implies(f, self.imp()?));
        }
        Ok(f)
    }

    fn cond(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.or()?;
        while self.eat(&Tok::Bar) {
            f = Formula::cond(f, self.or()?);
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Not => Ok(Formula::negate(self.unary()?)),
            Tok::Zero => Ok(Formula::False),
            Tok::One => Ok(Formula::True),
            Tok::Name(n) => Ok(Formula::atom(&n)),
            Tok::LParen => {
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(err(
                        self.pos(),
                        format!("unbalanced parentheses: expected `)` to close `(` at column {}, found {}", pos + 1, self.peek()),
                    ));
                }
                Ok(f)
            }
            Tok::RParen => Err(err(pos, "unbalanced parentheses: unexpected `)`")),
            t => Err(err(pos, format!("expected a formula, found {t}"))),
        }
    }
}

fn parse_impl(text: &str, allow_meta: bool) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text, allow_meta)?,
        at: 0,
    };
    let f = p.iff()?;
    match p.peek() {
        Tok::End => Ok(f),
        Tok::RParen => Err(err(p.pos(), "unbalanced parentheses: unexpected `)`")),
        t => Err(err(p.pos(), format!("expected an operator or end of input, found {t}"))),
    }
}

/// Parses formula text. Metavariables (`$A`) are rejected here.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_impl(text, false)
}

/// Parses schema text, where `$NAME` atoms are metavariables.
pub(crate) fn parse_meta(text: &str) -> Result<Formula, ParseError> {
    parse_impl(text, true)
}
