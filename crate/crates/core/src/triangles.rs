//! Triangular arrays generated by the three-term recurrence
//!
//! ```text
//! A(n, k) = f(n,k) A(n-1, k-1) + g(n,k) A(n-1, k) + h(n,k) A(n-1, k+1)
//! ```
//!
//! with `A(0, 0) = 1` and every entry outside `0 <= k <= n` zero, plus the
//! generalized multinomial triangle given by powers of a weight polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffexpr::CoeffExpr;
use crate::qpoly::QPoly;
use crate::seqprops::PolySeq;
use crate::transforms::Window;

/// Optional replacements for `g` and `h` in column `k = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g0: Option<CoeffExpr>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h0: Option<CoeffExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleSpec {
    pub name: String,
    pub f: CoeffExpr,
    pub g: CoeffExpr,
    pub h: CoeffExpr,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary: Option<Boundary>,
}

/// Which coefficient of the recurrence an evaluation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coefficient {
    F,
    G,
    H,
    G0,
    H0,
}

impl Coefficient {
    pub fn label(self) -> &'static str {
        match self {
            Coefficient::F => "f",
            Coefficient::G => "g",
            Coefficient::H => "h",
            Coefficient::G0 => "g0",
            Coefficient::H0 => "h0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangleError {
    #[error("coefficient {} = {expr:?} has a negative coefficient at (n={n}, k={k}): {value}", which.label())]
    NegativeCoefficient {
        which: Coefficient,
        expr: String,
        n: i64,
        k: i64,
        value: String,
    },
    #[error("unknown family {0:?}; expected one of {names}", names = BUILTIN_NAMES.join(", "))]
    UnknownFamily(String),
    #[error("a triangle needs at least one row")]
    NoRows,
}

impl TriangleSpec {
    pub fn new(
        name: &str,
        f: &str,
        g: &str,
        h: &str,
    ) -> Result<Self, crate::coeffexpr::ParseError> {
        Ok(TriangleSpec {
            name: name.to_string(),
            f: f.parse()?,
            g: g.parse()?,
            h: h.parse()?,
            boundary: None,
        })
    }

    pub fn with_boundary(
        mut self,
        g0: Option<&str>,
        h0: Option<&str>,
    ) -> Result<Self, crate::coeffexpr::ParseError> {
        self.boundary = Some(Boundary {
            g0: g0.map(str::parse).transpose()?,
            h0: h0.map(str::parse).transpose()?,
        });
        Ok(self)
    }

    pub fn has_overrides(&self) -> bool {
        self.boundary
            .as_ref()
            .is_some_and(|b| b.g0.is_some() || b.h0.is_some())
    }

    fn expr(&self, which: Coefficient) -> &CoeffExpr {
        let boundary = self.boundary.as_ref();
        match which {
            Coefficient::F => &self.f,
            Coefficient::G => &self.g,
            Coefficient::H => &self.h,
            Coefficient::G0 => boundary.and_then(|b| b.g0.as_ref()).unwrap_or(&self.g),
            Coefficient::H0 => boundary.and_then(|b| b.h0.as_ref()).unwrap_or(&self.h),
        }
    }

    /// Evaluates one coefficient and rejects negative coefficients in `q`.
    pub fn eval_checked(&self, which: Coefficient, n: i64, k: i64) -> Result<QPoly, TriangleError> {
        let expr = self.expr(which);
        let value = expr.eval(n, k);
        if value.is_nonnegative() {
            Ok(value)
        } else {
            Err(TriangleError::NegativeCoefficient {
                which,
                expr: expr.source().to_string(),
                n,
                k,
                value: value.to_string(),
            })
        }
    }

    /// `(f, g, h)` at `(n, k)` as used by the recurrence, with the `k = 0`
    /// overrides applied.
    pub fn recurrence_coefficients(
        &self,
        n: i64,
        k: i64,
    ) -> Result<(QPoly, QPoly, QPoly), TriangleError> {
        let (gw, hw) = if k == 0 {
            (Coefficient::G0, Coefficient::H0)
        } else {
            (Coefficient::G, Coefficient::H)
        };
        Ok((
            self.eval_checked(Coefficient::F, n, k)?,
            self.eval_checked(gw, n, k)?,
            self.eval_checked(hw, n, k)?,
        ))
    }
}

/// Rows of a triangular array. Rows from the recurrence have length `n + 1`;
/// multinomial rows have length `k n + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Triangle {
    pub rows: Vec<PolySeq>,
}

impl Triangle {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, n: usize, k: usize) -> Option<&QPoly> {
        self.rows.get(n).and_then(|r| r.0.get(k))
    }

    pub fn eval_at(&self, q0: &BigRational) -> Vec<Vec<BigRational>> {
        self.rows.iter().map(|r| r.eval_at(q0)).collect()
    }
}

/// Builds rows `0..nrows` of the recurrence triangle.
pub fn build(spec: &TriangleSpec, nrows: usize) -> Result<Triangle, TriangleError> {
    if nrows == 0 {
        return Err(TriangleError::NoRows);
    }
    let mut rows = Vec::with_capacity(nrows);
    rows.push(PolySeq(vec![QPoly::one()]));
    let zero = QPoly::zero();
    for n in 1..nrows {
        let prev = &rows[n - 1].0;
        let at = |k: i64| -> &QPoly {
            if k < 0 {
                &zero
            } else {
                prev.get(k as usize).unwrap_or(&zero)
            }
        };
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n as i64 {
            let (f, g, h) = spec.recurrence_coefficients(n as i64, k)?;
            let mut value = &f * at(k - 1);
            value = value + &g * at(k);
            value = value + &h * at(k + 1);
            row.push(value);
        }
        rows.push(PolySeq(row));
    }
    Ok(Triangle { rows })
}

pub const BUILTIN_NAMES: [&str; 8] = [
    "catalan-aigner",
    "catalan-shapiro",
    "motzkin",
    "schroeder",
    "bell",
    "bell-poly",
    "eulerian-poly",
    "narayana-poly",
];

/// Recurrences of the classical families.
///
/// `schroeder` follows the large Schröder recurrence with `s(n+1, 0) =
/// s(n, 0) + 2 s(n, 1)`; this does not reproduce the usual Schröder table
/// (it gives `s(1, 0) = 1`).
pub fn builtin(name: &str) -> Result<TriangleSpec, TriangleError> {
    let spec = |f: &str, g: &str, h: &str| {
        TriangleSpec::new(name, f, g, h).expect("builtin expressions parse")
    };
    let with = |s: TriangleSpec, g0: Option<&str>, h0: Option<&str>| {
        s.with_boundary(g0, h0).expect("builtin expressions parse")
    };
    Ok(match name {
        "catalan-aigner" => with(spec("1", "2", "1"), Some("1"), None),
        "catalan-shapiro" => spec("1", "2", "1"),
        "motzkin" => spec("1", "1", "1"),
        "schroeder" => with(spec("1", "2", "2"), Some("1"), Some("2")),
        "bell" => spec("1", "1+k", "1+k"),
        "bell-poly" => spec("1", "q+k", "q*(1+k)"),
        "eulerian-poly" => spec("1", "k*q+k+1", "(k+1)^2*q"),
        "narayana-poly" => with(spec("1", "q+1", "q"), Some("q"), Some("q")),
        _ => return Err(TriangleError::UnknownFamily(name.to_string())),
    })
}

/// Rows of `(b_0 + b_1 x + ... + b_k x^k)^n` for `n = 0..nrows`.
pub fn multinomial_triangle(w: &Window, nrows: usize) -> Triangle {
    let base = w.as_poly();
    let width = w.order();
    let rows = (0..nrows)
        .map(|n| {
            let power = base.pow(n as u32);
            PolySeq(
                (0..=width * n)
                    .map(|j| QPoly::constant(power.coeff(j)))
                    .collect(),
            )
        })
        .collect();
    Triangle { rows }
}

/// Column `k`: `(A(n, k))` for every built row with `n >= k`.
pub fn column(t: &Triangle, k: usize) -> PolySeq {
    PolySeq(t.rows.iter().filter_map(|r| r.0.get(k).cloned()).collect())
}

/// Integer row helper for tests and demos: constant entries only.
pub fn constant_rows(t: &Triangle) -> Option<Vec<Vec<BigInt>>> {
    t.rows
        .iter()
        .map(|r| r.0.iter().map(QPoly::as_constant).collect())
        .collect()
}
