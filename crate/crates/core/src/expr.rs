//! Expression syntax shared by commutative and noncommutative polynomial literals.
//!
//! Grammar: identifiers, non-negative integer or `p/q` scalars, `+`, `-`, `*`,
//! `/` by a nonzero scalar, `^` with a non-negative integer exponent, and parentheses.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Q),
    Ident { name: String, line: usize, col: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Q),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n: BigInt = s.parse().expect("digits parse");
            out.push(Spanned { tok: Tok::Num(n), line, col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Ident(s), line, col });
        } else if "+-*/^()".contains(c) {
            out.push(Spanned { tok: Tok::Op(c), line, col });
            i += 1;
        } else {
            return Err(ParseError { line, col, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(s) => (s.line, s.col),
            None => (self.line, self.end_col),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, message: message.into() })
    }

    fn eat_op(&mut self, op: char) -> bool {
        if let Some(Spanned { tok: Tok::Op(c), .. }) = self.peek() {
            if *c == op {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat_op('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat_op('+');
            self.product()?
        };
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat_op('/') {
                let (line, col) = self.here();
                let rhs = self.power()?;
                match constant_value(&rhs) {
                    Some(q) if !q.is_zero() => lhs = Expr::Div(Box::new(lhs), q),
                    Some(_) => {
                        return Err(ParseError { line, col, message: "division by zero".into() })
                    }
                    None => {
                        return Err(ParseError {
                            line,
                            col,
                            message: "division is only allowed by a scalar".into(),
                        })
                    }
                }
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.peek().cloned() {
                Some(Spanned { tok: Tok::Num(n), line, col }) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ParseError {
                        line,
                        col,
                        message: "exponent too large".into(),
                    })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Spanned { tok: Tok::Num(n), .. }) => {
                self.pos += 1;
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Spanned { tok: Tok::Ident(name), line, col }) => {
                self.pos += 1;
                Ok(Expr::Ident { name, line, col })
            }
            Some(Spanned { tok: Tok::Op('('), .. }) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat_op(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(Spanned { tok: Tok::Op('-'), .. }) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            Some(_) => self.err("expected a number, identifier or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Folds a variable-free expression to its scalar value.
pub fn constant_value(e: &Expr) -> Option<Q> {
    Some(match e {
        Expr::Num(q) => q.clone(),
        Expr::Ident { .. } => return None,
        Expr::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Expr::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Expr::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Expr::Div(a, q) => constant_value(a)? / q,
        Expr::Neg(a) => -constant_value(a)?,
        Expr::Pow(a, k) => {
            let base = constant_value(a)?;
            let mut acc = Q::one();
            for _ in 0..*k {
                acc *= &base;
            }
            acc
        }
    })
}

/// Parses `text`, reporting positions relative to `line` and a starting column `col`.
pub fn parse_at(text: &str, line: usize, col: usize) -> Result<Expr, ParseError> {
    let toks = tokenize(text, line, col)?;
    let end_col = col + text.chars().count();
    let mut p = Parser { toks, pos: 0, line, end_col };
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_at(text, 1, 1)
}

/// Target ring for expression evaluation.
pub trait ExprRing: Clone {
    fn scalar(&self, q: &Q) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
}

/// Evaluates `e` in a ring, resolving identifiers through `lookup`.
pub fn eval<T, F>(e: &Expr, proto: &T, lookup: &mut F) -> Result<T, ParseError>
where
    T: ExprRing,
    F: FnMut(&str, usize, usize) -> Result<T, ParseError>,
{
    Ok(match e {
        Expr::Num(q) => proto.scalar(q),
        Expr::Ident { name, line, col } => lookup(name, *line, *col)?,
        Expr::Add(a, b) => eval(a, proto, lookup)?.add(&eval(b, proto, lookup)?),
        Expr::Sub(a, b) => eval(a, proto, lookup)?.sub(&eval(b, proto, lookup)?),
        Expr::Mul(a, b) => eval(a, proto, lookup)?.mul(&eval(b, proto, lookup)?),
        Expr::Div(a, q) => eval(a, proto, lookup)?.scale(&(Q::one() / q)),
        Expr::Neg(a) => eval(a, proto, lookup)?.scale(&(-Q::one())),
        Expr::Pow(a, k) => {
            let base = eval(a, proto, lookup)?;
            let mut acc = proto.scalar(&Q::one());
            for _ in 0..*k {
                acc = acc.mul(&base);
            }
            acc
        }
    })
}
