//! Textual coefficient functions `f(n, k, q)` for triangle recurrences.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' UINT)?
//! atom   := UINT | 'n' | 'k' | 'q' | '-' atom | '(' expr ')'
//! ```
//!
//! Unary minus lives in `atom`, so `-q^2` means `(-q)^2`. There is no
//! implicit multiplication and no division.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::qpoly::QPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    N,
    K,
    Q,
}

impl Var {
    fn symbol(self) -> char {
        match self {
            Var::N => 'n',
            Var::K => 'k',
            Var::Q => 'q',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigUint),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

/// A parsed coefficient expression together with the source it came from.
#[derive(Clone, Debug)]
pub struct CoeffExpr {
    source: String,
    ast: Expr,
}

impl PartialEq for CoeffExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl Eq for CoeffExpr {}

impl CoeffExpr {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let ast = Parser::new(src).parse_all()?;
        Ok(CoeffExpr {
            source: src.to_string(),
            ast,
        })
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Substitutes `n` and `k` and folds everything into a polynomial in `q`.
    pub fn eval(&self, n: i64, k: i64) -> QPoly {
        eval_expr(&self.ast, n, k)
    }

    pub fn mentions(&self, var: Var) -> bool {
        mentions(&self.ast, var)
    }

    /// Canonical, fully determined rendering; re-parses to the same AST.
    pub fn render(&self) -> String {
        self.ast.to_string()
    }
}

impl FromStr for CoeffExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CoeffExpr::parse(s)
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Serialize for CoeffExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for CoeffExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        CoeffExpr::parse(&s).map_err(|e| serde::de::Error::custom(format!("{s:?}: {e}")))
    }
}

fn eval_expr(e: &Expr, n: i64, k: i64) -> QPoly {
    match e {
        Expr::Int(v) => QPoly::constant(BigInt::from(v.clone())),
        Expr::Var(Var::N) => QPoly::constant(n),
        Expr::Var(Var::K) => QPoly::constant(k),
        Expr::Var(Var::Q) => QPoly::q(),
        Expr::Neg(a) => -eval_expr(a, n, k),
        Expr::Add(a, b) => eval_expr(a, n, k) + eval_expr(b, n, k),
        Expr::Sub(a, b) => eval_expr(a, n, k) - eval_expr(b, n, k),
        Expr::Mul(a, b) => eval_expr(a, n, k) * eval_expr(b, n, k),
        Expr::Pow(a, p) => eval_expr(a, n, k).pow(*p),
    }
}

fn mentions(e: &Expr, var: Var) -> bool {
    match e {
        Expr::Int(_) => false,
        Expr::Var(v) => *v == var,
        Expr::Neg(a) | Expr::Pow(a, _) => mentions(a, var),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => mentions(a, var) || mentions(b, var),
    }
}

// Precedence levels for rendering: expr = 0, term = 1, factor = 2, atom = 3.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) => 1,
        Expr::Pow(..) => 2,
        Expr::Int(_) | Expr::Var(_) | Expr::Neg(_) => 3,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min_level: u8) -> fmt::Result {
    if level(e) < min_level {
        f.write_str("(")?;
        fmt::Display::fmt(e, f)?;
        f.write_str(")")
    } else {
        fmt::Display::fmt(e, f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{}", v.symbol()),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 3)
            }
            Expr::Add(a, b) => {
                write_at(f, a, 0)?;
                f.write_str("+")?;
                write_at(f, b, 1)
            }
            Expr::Sub(a, b) => {
                write_at(f, a, 0)?;
                f.write_str("-")?;
                write_at(f, b, 1)
            }
            Expr::Mul(a, b) => {
                write_at(f, a, 1)?;
                f.write_str("*")?;
                write_at(f, b, 2)
            }
            Expr::Pow(a, p) => {
                write_at(f, a, 3)?;
                write!(f, "^{p}")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

const ATOM_START: &[&str] = &["integer", "'n'", "'k'", "'q'", "'-'", "'('"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&mut self, expected: &[&'static str]) -> ParseError {
        self.skip_ws();
        ParseError {
            offset: self.pos,
            expected: expected.to_vec(),
        }
    }

    fn parse_all(mut self) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.error(&["'+'", "'-'", "'*'", "'^'", "end of input"]));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.error(&["unsigned integer exponent"]));
            }
            let start = self.pos;
            let digits = self.digits();
            let exp: u32 = digits.parse().map_err(|_| ParseError {
                offset: start,
                expected: vec!["exponent fitting in 32 bits"],
            })?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        // only ASCII digits were consumed
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Expr::Int(digits.parse().expect("nonempty digit run")))
            }
            Some(b'n') => {
                self.pos += 1;
                Ok(Expr::Var(Var::N))
            }
            Some(b'k') => {
                self.pos += 1;
                Ok(Expr::Var(Var::K))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Expr::Var(Var::Q))
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error(&["')'", "'+'", "'-'", "'*'", "'^'"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}
