//! Linear transformations that preserve log-concavity type properties.
//!
//! Every transform is generic over [`Term`], so the same code runs on
//! polynomial sequences and on exact rational sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::qpoly::QPoly;
use crate::seqprops::{first_internal_zero, is_log_concave, to_rationals};

/// Sequence element that can be added and scaled by an integer.
pub trait Term: Clone + Zero + Send + Sync {
    fn scaled(&self, c: &BigInt) -> Self;
}

impl Term for QPoly {
    fn scaled(&self, c: &BigInt) -> Self {
        self.scale(c)
    }
}

impl Term for BigRational {
    fn scaled(&self, c: &BigInt) -> Self {
        self * BigRational::from_integer(c.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("need at least {needed} input terms, got {got}")]
    InsufficientInput { needed: usize, got: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
}

/// `C(m, r)`, zero whenever `r < 0`, `r > m` or `m < 0`.
pub fn binom(m: i64, r: i64) -> BigInt {
    if m < 0 || r < 0 || r > m {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(m), BigInt::from(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinomialParams {
    pub a: u32,
    pub b: u32,
}

/// Nonempty, nonnegative, log-concave weights `(b_0, ..., b_k)` without
/// internal zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    weights: Vec<BigInt>,
}

impl Window {
    pub fn new(weights: Vec<BigInt>) -> Result<Self, TransformError> {
        if weights.is_empty() {
            return Err(TransformError::InvalidWindow("no weights".into()));
        }
        if let Some(i) = weights.iter().position(Signed::is_negative) {
            return Err(TransformError::InvalidWindow(format!(
                "weight {i} is negative"
            )));
        }
        if let Some(i) = first_internal_zero(&weights) {
            return Err(TransformError::InvalidWindow(format!(
                "internal zero at {i}"
            )));
        }
        let report = is_log_concave(&to_rationals(&weights))
            .map_err(|e| TransformError::InvalidWindow(e.to_string()))?;
        if let Some(w) = report.witness {
            return Err(TransformError::InvalidWindow(format!(
                "not log-concave at index {}",
                w.i
            )));
        }
        Ok(Window { weights })
    }

    pub fn from_i64s(weights: &[i64]) -> Result<Self, TransformError> {
        Self::new(weights.iter().copied().map(BigInt::from).collect())
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    /// The `k` in `(b_0, ..., b_k)`.
    pub fn order(&self) -> usize {
        self.weights.len() - 1
    }

    /// `b_0 + b_1 q + ... + b_k q^k`.
    pub fn as_poly(&self) -> QPoly {
        QPoly::from_coeffs(self.weights.clone())
    }
}

fn require_len<T>(x: &[T], needed: usize) -> Result<(), TransformError> {
    if x.len() < needed {
        return Err(TransformError::InsufficientInput {
            needed,
            got: x.len(),
        });
    }
    Ok(())
}

fn map_indices<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// `y_n = sum_{k=0}^{n} C(a+n, b+k) x_k` for `n = 0..=upto`.
pub fn binomial_transform<T: Term>(
    p: BinomialParams,
    x: &[T],
    upto: usize,
) -> Result<Vec<T>, TransformError> {
    require_len(x, upto + 1)?;
    let (a, b) = (i64::from(p.a), i64::from(p.b));
    Ok(map_indices(upto + 1, |n| {
        let n = n as i64;
        (0..=n).fold(T::zero(), |acc, k| {
            let c = binom(a + n, b + k);
            if c.is_zero() {
                acc
            } else {
                acc + x[k as usize].scaled(&c)
            }
        })
    }))
}

/// Adjacent sums `z_n = x_n + x_{n+1}`.
pub fn shift_sum<T: Term>(x: &[T]) -> Result<Vec<T>, TransformError> {
    require_len(x, 2)?;
    Ok(x.windows(2).map(|w| w[0].clone() + w[1].clone()).collect())
}

/// `z_n = sum_i b_i x_{n+i}` for `n = 0..=len(x)-len(w)`.
pub fn window_convolve<T: Term>(w: &Window, x: &[T]) -> Result<Vec<T>, TransformError> {
    let width = w.weights.len();
    require_len(x, width)?;
    Ok(map_indices(x.len() - width + 1, |n| {
        w.weights
            .iter()
            .zip(&x[n..n + width])
            .fold(T::zero(), |acc, (b, xi)| {
                if b.is_zero() {
                    acc
                } else {
                    acc + xi.scaled(b)
                }
            })
    }))
}

/// `y_n = sum_{i=0}^{kn} T(n,k;i) x_i` for `n = 0..=upto`, where `T(n,k;i)`
/// is the coefficient of `q^i` in `(b_0 + ... + b_k q^k)^n`.
pub fn multinomial_transform<T: Term>(
    w: &Window,
    x: &[T],
    upto: usize,
) -> Result<Vec<T>, TransformError> {
    let k = w.order();
    require_len(x, k * upto + 1)?;
    let base = w.as_poly();
    Ok(map_indices(upto + 1, |n| {
        let row = base.pow(n as u32);
        row.coeffs().iter().zip(x).fold(T::zero(), |acc, (c, xi)| {
            if c.is_zero() {
                acc
            } else {
                acc + xi.scaled(c)
            }
        })
    }))
}

/// The binomial identities used in the base case of the shifted binomial
/// transform argument, in the form `lhs = rhs` with `rhs` possibly a fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofIdentity {
    /// `C(a+1,b)^2 - C(a,b)C(a+2,b) = C(a+1,b-1)C(a,b)` as printed.
    SquareLow,
    /// `C(a+1,b)^2 - C(a,b)C(a+2,b) = C(a+1,b-1)C(a,b)/(a+1-b)`.
    SquareLowCorrected,
    /// `C(a+1,b+1)^2 - C(a,b)C(a+2,b+2) = C(a+1,b+2)C(a,b)/(b+1)`.
    SquareHigh,
    /// `2C(a+1,b)C(a+1,b+1) - C(a,b)C(a+2,b+1) = a C(a+1,b+1)C(a,b)/(a-b+1)`.
    Cross,
    /// `C(a+1,b+1)C(a+2,b+2) - C(a,b)C(a+3,b+3) = 2(a-b)C(a,b)C(a+2,b+2)/((b+1)(b+3))`.
    Cubic,
}

impl ProofIdentity {
    /// The four identities exactly as they appear in the proof.
    pub const PRINTED: [ProofIdentity; 4] = [
        ProofIdentity::SquareLow,
        ProofIdentity::SquareHigh,
        ProofIdentity::Cross,
        ProofIdentity::Cubic,
    ];

    /// Printed list with the first identity replaced by its corrected form.
    pub const CORRECTED: [ProofIdentity; 4] = [
        ProofIdentity::SquareLowCorrected,
        ProofIdentity::SquareHigh,
        ProofIdentity::Cross,
        ProofIdentity::Cubic,
    ];

    /// Both sides at `(a, b)` with `0 <= b <= a`.
    pub fn sides(self, a: u32, b: u32) -> (BigRational, BigRational) {
        let (a, b) = (i64::from(a), i64::from(b));
        let c = binom;
        let int = |v: BigInt| BigRational::from_integer(v);
        let frac = |num: BigInt, den: i64| BigRational::new(num, BigInt::from(den));
        match self {
            ProofIdentity::SquareLow => (
                int(c(a + 1, b).pow(2) - c(a, b) * c(a + 2, b)),
                int(c(a + 1, b - 1) * c(a, b)),
            ),
            ProofIdentity::SquareLowCorrected => (
                int(c(a + 1, b).pow(2) - c(a, b) * c(a + 2, b)),
                frac(c(a + 1, b - 1) * c(a, b), a + 1 - b),
            ),
            ProofIdentity::SquareHigh => (
                int(c(a + 1, b + 1).pow(2) - c(a, b) * c(a + 2, b + 2)),
                frac(c(a + 1, b + 2) * c(a, b), b + 1),
            ),
            ProofIdentity::Cross => (
                int(BigInt::from(2) * c(a + 1, b) * c(a + 1, b + 1) - c(a, b) * c(a + 2, b + 1)),
                frac(BigInt::from(a) * c(a + 1, b + 1) * c(a, b), a - b + 1),
            ),
            ProofIdentity::Cubic => (
                int(c(a + 1, b + 1) * c(a + 2, b + 2) - c(a, b) * c(a + 3, b + 3)),
                frac(
                    BigInt::from(2 * (a - b)) * c(a, b) * c(a + 2, b + 2),
                    (b + 1) * (b + 3),
                ),
            ),
        }
    }

    pub fn holds(self, a: u32, b: u32) -> bool {
        let (lhs, rhs) = self.sides(a, b);
        lhs == rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: ProofIdentity,
    pub a: u32,
    pub b: u32,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub max_a: u32,
    pub checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `identities` over every `0 <= b <= a <= max_a`.
pub fn check_identities(identities: &[ProofIdentity], max_a: u32) -> IdentityReport {
    let mut checked = 0;
    let mut failures = Vec::new();
    for &identity in identities {
        for a in 0..=max_a {
            for b in 0..=a {
                checked += 1;
                let (lhs, rhs) = identity.sides(a, b);
                if lhs != rhs {
                    failures.push(IdentityFailure {
                        identity,
                        a,
                        b,
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    });
                }
            }
        }
    }
    IdentityReport {
        max_a,
        checked,
        failures,
    }
}
