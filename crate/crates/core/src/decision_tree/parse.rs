//! Recursive-descent parser for the tree text format.
//!
//! ```text
//! or   := add ("//" add)*
//! add  := mul ("+" mul)*
//! mul  := atom ("*" atom)*
//! atom := GATE | "(" or ")"
//! ```
//!
//! All operators are left associative. Whitespace is ignored.

use thiserror::Error;

use super::expr::{Op, QdtExpr};
use crate::gate_algebra::Gate;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnknownToken(char),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unclosed parenthesis")]
    Unclosed,
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input {0}")]
    Trailing(String),
}

/// Parse failure at a character offset (0-based) of the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Gate(Gate),
    Plus,
    Star,
    Or,
    LParen,
    RParen,
}

impl Tok {
    fn describe(self) -> String {
        match self {
            Tok::Gate(g) => format!("gate {g}"),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::Or => "'//'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '/' if chars.get(i + 1) == Some(&'/') => {
                out.push((i, Tok::Or));
                i += 2;
                continue;
            }
            c => match Gate::from_symbol(c) {
                Some(g) => Tok::Gate(g),
                None => {
                    return Err(ParseError {
                        position: i,
                        kind: ParseErrorKind::UnknownToken(c),
                    })
                }
            },
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn binary(
        &mut self,
        tok: Tok,
        op: Op,
        next: fn(&mut Parser) -> Result<QdtExpr, ParseError>,
    ) -> Result<QdtExpr, ParseError> {
        let mut lhs = next(self)?;
        while self.peek() == Some(tok) {
            self.pos += 1;
            let rhs = next(self)?;
            lhs = QdtExpr::node(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<QdtExpr, ParseError> {
        self.binary(Tok::Or, Op::Or, Parser::add)
    }

    fn add(&mut self) -> Result<QdtExpr, ParseError> {
        self.binary(Tok::Plus, Op::Add, Parser::mul)
    }

    fn mul(&mut self) -> Result<QdtExpr, ParseError> {
        self.binary(Tok::Star, Op::Mul, Parser::atom)
    }

    fn atom(&mut self) -> Result<QdtExpr, ParseError> {
        let position = self.offset();
        match self.peek() {
            Some(Tok::Gate(g)) => {
                self.pos += 1;
                Ok(QdtExpr::Leaf(g))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.or()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(ParseError {
                        position,
                        kind: ParseErrorKind::Unclosed,
                    }),
                    Some(t) => Err(ParseError {
                        position: self.offset(),
                        kind: ParseErrorKind::Unexpected(t.describe()),
                    }),
                }
            }
            Some(t) => Err(ParseError {
                position,
                kind: ParseErrorKind::Unexpected(t.describe()),
            }),
            None => Err(ParseError {
                position,
                kind: ParseErrorKind::UnexpectedEnd,
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<QdtExpr, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    let expr = p.or()?;
    if let Some(t) = p.peek() {
        return Err(ParseError {
            position: p.offset(),
            kind: ParseErrorKind::Trailing(t.describe()),
        });
    }
    Ok(expr)
}

impl std::str::FromStr for QdtExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
