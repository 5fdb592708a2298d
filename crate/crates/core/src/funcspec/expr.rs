//! Arithmetic expressions in one variable `x`.
//!
//! Grammar (whitespace ignored, `−` U+2212 accepted as minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' factor)?
//! base   := number | 'x' | '(' expr ')' | ident '(' expr ')'
//! ident  := exp | ln | sin | cos
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so
//! `-x^2` is `-(x^2)`. A non-integer exponent is only accepted over a base
//! that is positive by construction (a positive literal or an `exp` call).

use std::fmt;

use thiserror::Error;

use crate::realnum::{Real, RealError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn apply(self, v: &Real) -> Result<Real, RealError> {
        match self {
            Func::Exp => v.exp(),
            Func::Ln => v.ln(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Decimal literal, kept as written so any precision can read it.
    Num(String),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("non-integer exponent needs a base that is positive by construction")]
    NonIntegerExponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number {s}"),
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let single = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            out.push((t, pos));
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let bytes = src.as_bytes();
            let mut end = pos;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            // Exponent only when digits follow, so "2e" stays an error below.
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut j = end + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    end = j;
                }
            }
            let text = &src[pos..end];
            let digits = text.split(['e', 'E']).next().unwrap_or("");
            if digits.matches('.').count() > 1 || digits == "." {
                return Err(ParseError {
                    offset: pos,
                    kind: ParseErrorKind::BadNumber(text.to_string()),
                });
            }
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            out.push((Tok::Num(text.to_string()), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(i, ch)) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    end = i + ch.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(src[pos..end].to_string()), pos));
            continue;
        }
        return Err(ParseError {
            offset: pos,
            kind: ParseErrorKind::UnexpectedChar(c),
        });
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        let kind = match self.peek() {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            t => ParseErrorKind::UnexpectedToken(t.to_string()),
        };
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let caret = self.offset();
        self.bump();
        let exponent = self.factor()?;
        if !is_integer_literal(&exponent) && !is_positive_by_construction(&base) {
            return Err(ParseError {
                offset: caret,
                kind: ParseErrorKind::NonIntegerExponent,
            });
        }
        Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(text) => {
                self.bump();
                if Real::parse(&text, crate::realnum::Precision::new(16).unwrap()).is_err() {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::BadNumber(text),
                    });
                }
                Ok(Expr::Num(text))
            }
            Tok::Ident(name) if name == "x" => {
                self.bump();
                Ok(Expr::X)
            }
            Tok::Ident(name) => {
                let func = Func::from_name(&name).ok_or(ParseError {
                    offset: at,
                    kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                })?;
                self.bump();
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn is_integer_literal(e: &Expr) -> bool {
    match e {
        Expr::Num(text) => !text.contains(['.', 'e', 'E']),
        Expr::Neg(inner) => is_integer_literal(inner),
        _ => false,
    }
}

fn is_positive_by_construction(e: &Expr) -> bool {
    match e {
        Expr::Num(text) => text
            .split(['e', 'E'])
            .next()
            .is_some_and(|m| m.chars().any(|c| ('1'..='9').contains(&c))),
        Expr::Call(Func::Exp, _) => true,
        _ => false,
    }
}

impl Expr {
    fn eval(&self, x: &Real) -> Result<Real, RealError> {
        match self {
            Expr::Num(text) => Real::parse(text, x.precision()),
            Expr::X => Ok(x.clone()),
            Expr::Neg(a) => Ok(a.eval(x)?.neg()),
            Expr::Add(a, b) => a.eval(x)?.add(&b.eval(x)?),
            Expr::Sub(a, b) => a.eval(x)?.sub(&b.eval(x)?),
            Expr::Mul(a, b) => a.eval(x)?.mul(&b.eval(x)?),
            Expr::Div(a, b) => a.eval(x)?.div(&b.eval(x)?),
            Expr::Pow(a, b) => a.eval(x)?.pow(&b.eval(x)?),
            Expr::Call(func, a) => func.apply(&a.eval(x)?),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::X | Expr::Call(..) => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        let wrap = self.level() < min_level;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(text) => f.write_str(text)?,
            Expr::X => f.write_str("x")?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                b.write(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) {
                    "*"
                } else {
                    "/"
                })?;
                b.write(f, 3)?;
            }
            Expr::Pow(a, b) => {
                a.write(f, 5)?;
                f.write_str("^")?;
                b.write(f, 3)?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A parsed function of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Expr,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression, ParseError> {
        let mut parser = Parser {
            toks: lex(text)?,
            pos: 0,
        };
        let root = parser.expr()?;
        if *parser.peek() != Tok::End {
            return Err(parser.unexpected());
        }
        Ok(Expression { root })
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Value at `x`, computed at the precision of `x`.
    pub fn eval(&self, x: &Real) -> Result<Real, RealError> {
        self.root.eval(x)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, 0)
    }
}

impl std::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}
