//! Text syntax for elements of O_n.
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ["'"] | '(' element ')' ["'"]
//! atom    := 'S' digits | 'zeta(' int ',' int ')' | 'sqrt(' int ')' | rational | '1'
//! ```
//!
//! `'` is the adjoint and binds tighter than `*`. Whitespace is ignored.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{Element, Rank};
use crate::scalar::{Backend, Scalar};

/// Largest root-of-unity order accepted by `zeta(M,k)`.
pub const MAX_ZETA_ORDER: u32 = 4096;
/// Largest radicand accepted by `sqrt(m)`.
pub const MAX_RADICAND: u32 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax { line: usize, column: usize, expected: Vec<String>, found: String },
    #[error("{line}:{column}: generator S{index} outside S1..S{rank}")]
    GeneratorOutOfRange { line: usize, column: usize, index: String, rank: usize },
    #[error("{line}:{column}: malformed scalar: {reason}")]
    MalformedScalar { line: usize, column: usize, reason: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::GeneratorOutOfRange { line, column, .. }
            | ParseError::MalformedScalar { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Gen(String),
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Tick,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Gen(d) => write!(f, "'S{d}'"),
            Tok::Int(i) => write!(f, "'{i}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Tick => f.write_str("\"'\""),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, expected: &[&str], found: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '\'' => Some(Tok::Tick),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Int(digits.parse().expect("digits")), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if let Some(d) = word.strip_prefix('S') {
                if d.is_empty() || !d.chars().all(|ch| ch.is_ascii_digit()) {
                    return Err(syntax(l0, c0, &["generator 'S' followed by digits"], format!("'{word}'")));
                }
                Tok::Gen(d.to_owned())
            } else if word == "zeta" || word == "sqrt" {
                Tok::Ident(word)
            } else {
                return Err(syntax(l0, c0, &["'S<digits>'", "'zeta'", "'sqrt'", "number", "'('"], format!("'{word}'")));
            };
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        return Err(syntax(l0, c0, &["'S<digits>'", "'zeta'", "'sqrt'", "number", "operator", "'('"], format!("'{c}'")));
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser<'a, B: Backend> {
    backend: &'a B,
    rank: Rank,
    toks: Vec<Spanned>,
    pos: usize,
}

const FACTOR_START: &[&str] = &["'S<digits>'", "'zeta('", "'sqrt('", "number", "'('"];

impl<B: Backend> Parser<'_, B> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<Spanned, ParseError> {
        let t = self.peek().clone();
        if t.tok == tok {
            Ok(self.bump())
        } else {
            Err(syntax(t.line, t.column, expected, t.tok.to_string()))
        }
    }

    fn element(&mut self) -> Result<Element<B::Scalar>, ParseError> {
        let negate_first = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let first = self.term()?;
        let mut acc = if negate_first { first.negate() } else { first };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element<B::Scalar>, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element<B::Scalar>, ParseError> {
        let value = if self.peek().tok == Tok::LParen {
            self.bump();
            let inner = self.element()?;
            self.expect(Tok::RParen, &["')'", "'+'", "'-'", "'*'", "\"'\""])?;
            inner
        } else {
            self.atom()?
        };
        if self.peek().tok == Tok::Tick {
            self.bump();
            return Ok(value.adjoint());
        }
        Ok(value)
    }

    fn int(&mut self, signed: bool) -> Result<(BigInt, usize, usize), ParseError> {
        let t = self.peek().clone();
        let negative = signed && t.tok == Tok::Minus;
        if negative {
            self.bump();
        }
        let n = self.peek().clone();
        match n.tok {
            Tok::Int(v) => {
                self.bump();
                Ok((if negative { -v } else { v }, t.line, t.column))
            }
            other => Err(syntax(n.line, n.column, &["integer"], other.to_string())),
        }
    }

    fn small(&self, v: &BigInt, max: u32, what: &str, line: usize, column: usize) -> Result<u32, ParseError> {
        v.to_u32().filter(|&x| x <= max).ok_or_else(|| ParseError::MalformedScalar {
            line,
            column,
            reason: format!("{what} {v} outside 0..={max}"),
        })
    }

    fn atom(&mut self) -> Result<Element<B::Scalar>, ParseError> {
        let t = self.peek().clone();
        let b = self.backend;
        match t.tok.clone() {
            Tok::Gen(digits) => {
                self.bump();
                let index = digits.parse::<usize>().ok().filter(|&i| (1..=self.rank.get()).contains(&i));
                match index {
                    Some(i) => Ok(Element::generator(b, self.rank, i as i64)),
                    None => Err(ParseError::GeneratorOutOfRange {
                        line: t.line,
                        column: t.column,
                        index: digits,
                        rank: self.rank.get(),
                    }),
                }
            }
            Tok::Int(num) => {
                self.bump();
                let q = if self.peek().tok == Tok::Slash {
                    self.bump();
                    let (den, line, column) = self.int(false)?;
                    if den.is_zero() {
                        return Err(ParseError::MalformedScalar { line, column, reason: "zero denominator".into() });
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                Ok(Element::scalar(self.rank, b.rational(&q)))
            }
            Tok::Ident(name) if name == "zeta" => {
                self.bump();
                self.expect(Tok::LParen, &["'('"])?;
                let (order, line, column) = self.int(false)?;
                let order = self.small(&order, MAX_ZETA_ORDER, "root-of-unity order", line, column)?;
                if order == 0 {
                    return Err(ParseError::MalformedScalar { line, column, reason: "root-of-unity order 0".into() });
                }
                self.expect(Tok::Comma, &["','"])?;
                let (k, _, _) = self.int(true)?;
                self.expect(Tok::RParen, &["')'"])?;
                let k = (k % BigInt::from(order)).to_i64().expect("reduced exponent fits");
                Ok(Element::scalar(self.rank, b.root_of_unity(order, k)))
            }
            Tok::Ident(_) => {
                self.bump();
                self.expect(Tok::LParen, &["'('"])?;
                let (m, line, column) = self.int(false)?;
                let m = self.small(&m, MAX_RADICAND, "radicand", line, column)?;
                self.expect(Tok::RParen, &["')'"])?;
                let value = if m == 0 { b.integer(0) } else { b.sqrt(m) };
                Ok(Element::scalar(self.rank, value))
            }
            other => Err(syntax(t.line, t.column, FACTOR_START, other.to_string())),
        }
    }
}

/// Parses `text` as an element of O_n.
pub fn parse_element<B: Backend>(b: &B, text: &str, rank: Rank) -> Result<Element<B::Scalar>, ParseError> {
    let mut p = Parser { backend: b, rank, toks: lex(text)?, pos: 0 };
    let value = p.element()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(syntax(t.line, t.column, &["'+'", "'-'", "'*'", "end of input"], t.tok.to_string()));
    }
    Ok(value)
}

/// Contracted, sorted display text; parses back to an equal element.
pub fn format_element<S: Scalar>(x: &Element<S>) -> String {
    x.format()
}
