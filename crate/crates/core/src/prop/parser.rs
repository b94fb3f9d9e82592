use super::{Formula, Vocabulary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    True,
    False,
    Ident(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if text[i..].starts_with("<->") => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vocab: &'a mut Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        match tok {
            Tok::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Tok::True => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Tok::False => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                let index = self.vocab.intern(&name)?;
                self.pos += 1;
                Ok(Formula::Atom(index))
            }
            other => self.error(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses `text`, registering unknown atoms in `vocab`.
///
/// ```text
/// formula := iff
/// iff     := imp ("<->" imp)*
/// imp     := or ("->" imp)?
/// or      := and ("|" and)*
/// and     := unary ("&" unary)*
/// unary   := "!" unary | "(" formula ")" | atom | "true" | "false"
/// ```
pub fn parse_formula(text: &str, vocab: &mut Vocabulary) -> Result<Formula> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vocab,
    };
    let f = parser.iff()?;
    if parser.pos != parser.toks.len() {
        return parser.error("trailing input");
    }
    Ok(f)
}
