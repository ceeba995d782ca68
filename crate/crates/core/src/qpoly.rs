//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients, and the coefficientwise order `>=_q`.
//!
//! `a >=_q b` holds when every coefficient of `a - b` is nonnegative. It is a
//! partial order: `q` and `1` are incomparable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// A polynomial in `q`, stored in ascending degree with trailing zeros trimmed.
///
/// The zero polynomial has no coefficients and no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The monomial `q`.
    pub fn q() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * q^degree`.
    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::from_coeffs(coeffs)
    }

    /// Builds a polynomial from ascending-degree coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^d`, zero beyond the degree.
    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True when the polynomial has degree at most zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// True when no coefficient is negative (the zero polynomial included).
    pub fn is_nonnegative(&self) -> bool {
        self.first_negative_degree().is_none()
    }

    /// Smallest degree carrying a negative coefficient.
    pub fn first_negative_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(Signed::is_negative)
    }

    pub fn scale(&self, c: &BigInt) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `self^exp` by binary exponentiation; `p^0 = 1` for every `p`, zero included.
    pub fn pow(&self, mut exp: u32) -> QPoly {
        let mut result = QPoly::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact evaluation at a rational point by Horner's scheme.
    pub fn eval_at(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Returns the constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

/// `a >=_q b`: every coefficient of `a - b` is nonnegative.
pub fn q_geq(a: &QPoly, b: &QPoly) -> bool {
    q_geq_witness(a, b).is_none()
}

/// Smallest degree at which `a - b` has a negative coefficient, or `None`
/// when `a >=_q b`.
pub fn q_geq_witness(a: &QPoly, b: &QPoly) -> Option<usize> {
    let len = a.coeffs.len().max(b.coeffs.len());
    (0..len).find(|&d| {
        let x = a.coeffs.get(d);
        let y = b.coeffs.get(d);
        match (x, y) {
            (Some(x), Some(y)) => x < y,
            (Some(x), None) => x.is_negative(),
            (None, Some(y)) => y.is_positive(),
            (None, None) => false,
        }
    })
}

impl From<BigInt> for QPoly {
    fn from(c: BigInt) -> Self {
        QPoly::constant(c)
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(c)
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, BigInt::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: &QPoly) -> QPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPoly {
    fn one() -> Self {
        QPoly::one()
    }
}

/// Canonical rendering in descending degree, e.g. `q^2+4*q+1`.
///
/// The output re-parses with the coefficient expression grammar to the same
/// polynomial. A leading `-q^d` is written `-1*q^d` because the grammar binds
/// unary minus tighter than `^`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str("-")?;
            } else {
                f.write_str("+")?;
            }
            match d {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() || (first && c.is_negative() && d >= 2) {
                        write!(f, "{mag}*")?;
                    }
                    if d == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{d}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CoeffsVisitor;

        impl<'de> Visitor<'de> for CoeffsVisitor {
            type Value = QPoly;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of decimal integer strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<QPoly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    let c: BigInt = s
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("invalid integer {s:?}")))?;
                    coeffs.push(c);
                }
                Ok(QPoly::from_coeffs(coeffs))
            }
        }

        deserializer.deserialize_seq(CoeffsVisitor)
    }
}
