//! Bounded-range verification of sufficient conditions for rows of a
//! recurrence triangle to be strongly q-log-concave.
//!
//! For each `n` the conditions are checked over `1 <= k <= l <= n`, which
//! reaches coefficient indices `k - 1 = 0` and `l + 1 = n + 1`:
//!
//! | key        | condition                                                   |
//! |------------|-------------------------------------------------------------|
//! | `f-slc`    | `f_l f_k >=_q f_{l+1} f_{k-1}`                              |
//! | `g-slc`    | `g_l g_k >=_q g_{l+1} g_{k-1}`                              |
//! | `h-slc`    | `h_l h_k >=_q h_{l+1} h_{k-1}`                              |
//! | `fg-cross` | `f_l g_k + f_k g_l >=_q f_{l+1} g_{k-1} + f_{k-1} g_{l+1}`  |
//! | `gh-cross` | `g_l h_k + g_k h_l >=_q g_{l+1} h_{k-1} + g_{k-1} h_{l+1}`  |
//! | `fh-cross` | `f_l h_k + f_k h_l >=_q f_{k-1} h_{l+1} + f_{l+1} h_{k-1}`  |
//! | `gg-fh`    | `g_k g_l >=_q f_{l+1} h_{k-1}`                              |
//!
//! where `f_k = f(n, k)` and likewise for `g`, `h`.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coeffexpr::{CoeffExpr, Var};
use crate::qpoly::{q_geq_witness, QPoly};
use crate::seqprops::{is_strong_q_log_concave, Report, SeqError};
use crate::triangles::{build, Coefficient, TriangleError, TriangleSpec};

pub const DEFAULT_MAX_N: usize = 10;

pub const ROW_CONDITIONS: [&str; 7] = [
    "f-slc", "g-slc", "h-slc", "fg-cross", "gh-cross", "fh-cross", "gg-fh",
];

pub const CONSTANT_CONDITIONS: [&str; 4] = ["eg-h", "h-nonneg", "g-e", "e-nonneg"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CriterionWitness {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(flatten)]
    pub witness: Option<CriterionWitness>,
}

impl Verdict {
    fn from_witness(witness: Option<CriterionWitness>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub overall: bool,
    pub max_n: usize,
    pub conditions: IndexMap<String, Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CriterionReport {
    fn new(max_n: usize, conditions: IndexMap<String, Verdict>, warnings: Vec<String>) -> Self {
        CriterionReport {
            overall: conditions.values().all(|v| v.holds),
            max_n,
            conditions,
            warnings,
        }
    }

    pub fn verdict(&self, key: &str) -> Option<&Verdict> {
        self.conditions.get(key)
    }

    /// First failing condition in key order.
    pub fn first_failure(&self) -> Option<(&str, &Verdict)> {
        self.conditions
            .iter()
            .find(|(_, v)| !v.holds)
            .map(|(k, v)| (k.as_str(), v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Triangle(#[from] TriangleError),
    #[error("{which} = {expr:?} must not depend on n or k")]
    NotConstant { which: &'static str, expr: String },
    #[error("spec is not of the form f = 1 with constant g, h and h0 = h: {0}")]
    NotConstantShape(String),
    #[error("row {row}: {source}")]
    Row { row: usize, source: SeqError },
}

const OVERRIDE_WARNING: &str =
    "k=0 boundary overrides are outside the criterion's hypotheses; only the general f, g, h were checked";

type RowWitnesses = [Option<CriterionWitness>; 7];

fn check_row(spec: &TriangleSpec, n: usize) -> Result<RowWitnesses, TriangleError> {
    let eval_all = |which| -> Result<Vec<QPoly>, TriangleError> {
        (0..=n as i64 + 1)
            .map(|k| spec.eval_checked(which, n as i64, k))
            .collect()
    };
    let f = eval_all(Coefficient::F)?;
    let g = eval_all(Coefficient::G)?;
    let h = eval_all(Coefficient::H)?;

    let slc =
        |x: &[QPoly], k: usize, l: usize| q_geq_witness(&(&x[l] * &x[k]), &(&x[l + 1] * &x[k - 1]));
    let cross = |x: &[QPoly], y: &[QPoly], k: usize, l: usize| {
        let lhs = &x[l] * &y[k] + &x[k] * &y[l];
        let rhs = &x[l + 1] * &y[k - 1] + &x[k - 1] * &y[l + 1];
        q_geq_witness(&lhs, &rhs)
    };

    let mut found: RowWitnesses = [None; 7];
    for k in 1..=n {
        for l in k..=n {
            let degrees = [
                slc(&f, k, l),
                slc(&g, k, l),
                slc(&h, k, l),
                cross(&f, &g, k, l),
                cross(&g, &h, k, l),
                cross(&f, &h, k, l),
                q_geq_witness(&(&g[k] * &g[l]), &(&f[l + 1] * &h[k - 1])),
            ];
            for (slot, degree) in found.iter_mut().zip(degrees) {
                if slot.is_none() {
                    *slot = degree.map(|degree| CriterionWitness { n, k, l, degree });
                }
            }
        }
    }
    Ok(found)
}

/// Checks the seven row conditions for every `1 <= n <= max_n`.
///
/// Boundary overrides are ignored (with a warning): the criterion speaks
/// only about the general coefficient functions.
pub fn check_criterion(
    spec: &TriangleSpec,
    max_n: usize,
) -> Result<CriterionReport, CriteriaError> {
    let per_row: Vec<Result<RowWitnesses, TriangleError>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (1..=max_n)
                .into_par_iter()
                .map(|n| check_row(spec, n))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (1..=max_n).map(|n| check_row(spec, n)).collect()
        }
    };

    let mut first: RowWitnesses = [None; 7];
    for row in per_row {
        let row = row?;
        for (slot, w) in first.iter_mut().zip(row) {
            if slot.is_none() {
                *slot = w;
            }
        }
    }

    let conditions = ROW_CONDITIONS
        .iter()
        .zip(first)
        .map(|(key, w)| (key.to_string(), Verdict::from_witness(w)))
        .collect();
    let warnings = if spec.has_overrides() {
        vec![OVERRIDE_WARNING.to_string()]
    } else {
        Vec::new()
    };
    Ok(CriterionReport::new(max_n, conditions, warnings))
}

fn require_constant(which: &'static str, e: &CoeffExpr) -> Result<QPoly, CriteriaError> {
    if e.mentions(Var::N) || e.mentions(Var::K) {
        return Err(CriteriaError::NotConstant {
            which,
            expr: e.source().to_string(),
        });
    }
    Ok(e.eval(0, 0))
}

/// Conditions `e g >=_q h >=_q 0` and `g >=_q e >=_q 0` for the recurrence
/// `A(n,0) = e A(n-1,0) + h A(n-1,1)`,
/// `A(n,k) = A(n-1,k-1) + g A(n-1,k) + h A(n-1,k+1)`.
///
/// Witnesses carry `n = k = l = 0`; only the degree is meaningful.
pub fn check_constant_criterion(
    e: &CoeffExpr,
    g: &CoeffExpr,
    h: &CoeffExpr,
) -> Result<CriterionReport, CriteriaError> {
    let e = require_constant("e", e)?;
    let g = require_constant("g", g)?;
    let h = require_constant("h", h)?;
    let zero = QPoly::zero();
    let witness = |degree: Option<usize>| {
        Verdict::from_witness(degree.map(|degree| CriterionWitness {
            n: 0,
            k: 0,
            l: 0,
            degree,
        }))
    };
    let verdicts = [
        witness(q_geq_witness(&(&e * &g), &h)),
        witness(q_geq_witness(&h, &zero)),
        witness(q_geq_witness(&g, &e)),
        witness(q_geq_witness(&e, &zero)),
    ];
    let conditions = CONSTANT_CONDITIONS
        .iter()
        .zip(verdicts)
        .map(|(key, v)| (key.to_string(), v))
        .collect();
    Ok(CriterionReport::new(0, conditions, Vec::new()))
}

/// The recurrence spec induced by `(e, g, h)`: `f = 1`, general `g`, `h`,
/// and `k = 0` overrides `g0 = e`, `h0 = h`.
pub fn constant_spec(e: &CoeffExpr, g: &CoeffExpr, h: &CoeffExpr) -> TriangleSpec {
    TriangleSpec {
        name: format!("e={e}, g={g}, h={h}"),
        f: "1".parse().expect("literal parses"),
        g: g.clone(),
        h: h.clone(),
        boundary: Some(crate::triangles::Boundary {
            g0: Some(e.clone()),
            h0: Some(h.clone()),
        }),
    }
}

/// Recovers `(e, g, h)` from a spec with `f = 1`, `n`/`k`-free `g` and `h`,
/// and `h0` (if present) equal to `h`.
pub fn constant_parts(
    spec: &TriangleSpec,
) -> Result<(CoeffExpr, CoeffExpr, CoeffExpr), CriteriaError> {
    let shape_err = |why: &str| CriteriaError::NotConstantShape(format!("{}: {why}", spec.name));
    let f = require_constant("f", &spec.f)?;
    if !f.is_one() {
        return Err(shape_err("f is not 1"));
    }
    let boundary = spec.boundary.clone().unwrap_or_default();
    let e = boundary.g0.unwrap_or_else(|| spec.g.clone());
    let g = spec.g.clone();
    let h = spec.h.clone();
    for (which, expr) in [("e", &e), ("g", &g), ("h", &h)] {
        require_constant(which, expr)?;
    }
    if let Some(h0) = boundary.h0 {
        if require_constant("h0", &h0)? != h.eval(0, 0) {
            return Err(shape_err("h0 differs from h"));
        }
    }
    Ok((e, g, h))
}

/// Builds rows `0..=max_n` and checks each for strong q-log-concavity.
pub fn confirm_conclusion(spec: &TriangleSpec, max_n: usize) -> Result<Report, CriteriaError> {
    let triangle = build(spec, max_n + 1)?;
    for (row, seq) in triangle.rows.iter().enumerate() {
        let report =
            is_strong_q_log_concave(seq).map_err(|source| CriteriaError::Row { row, source })?;
        if let Some(mut witness) = report.witness {
            witness.row = Some(row);
            return Ok(Report::fail("strong-q-log-concave-rows", witness));
        }
    }
    Ok(Report::pass("strong-q-log-concave-rows"))
}

/// Seeded random spec with nonnegative-coefficient `f`, `g`, `h` drawn from
/// small linear and product templates in `n`, `k` and `q`.
pub fn random_spec(seed: u64) -> TriangleSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |nonzero: bool| -> String {
        let c = rng.gen_range(u32::from(nonzero)..=3);
        let d = rng.gen_range(0..=2);
        let e = rng.gen_range(0..=2);
        match rng.gen_range(0..8) {
            0 => format!("{c}"),
            1 => format!("{c}+{d}*k"),
            2 => format!("{c}+{d}*q"),
            3 => format!("({c}+{d}*k)*q^{e}"),
            4 => format!("{c}+{d}*k+{e}*q"),
            5 => format!("({c}+{d}*k)*({e}+q)"),
            6 => format!("{c}+{d}*n"),
            _ => format!("{c}*q+{d}*k*q+{e}"),
        }
    };
    let f = pick(true);
    let g = pick(false);
    let h = pick(false);
    TriangleSpec::new(&format!("random-{seed}"), &f, &g, &h).expect("templates parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::builtin;

    fn expr(s: &str) -> CoeffExpr {
        s.parse().unwrap()
    }

    #[test]
    fn criterion_holds_for_polynomial_families() {
        let report = check_criterion(&builtin("bell-poly").unwrap(), 8).unwrap();
        assert!(report.overall, "{:?}", report.first_failure());
        assert!(report.warnings.is_empty());
        let report = check_criterion(&builtin("narayana-poly").unwrap(), 8).unwrap();
        assert!(report.overall);
        assert_eq!(report.warnings.len(), 1);
    }

    // h = (k+1)^2 q is convex in k, so 2 h_1 >= h_0 + h_2 fails with f = 1.
    #[test]
    fn eulerian_fails_fh_cross_but_rows_are_fine() {
        let spec = builtin("eulerian-poly").unwrap();
        let report = check_criterion(&spec, 8).unwrap();
        assert!(!report.overall);
        let failed: Vec<_> = report
            .conditions
            .iter()
            .filter(|(_, v)| !v.holds)
            .map(|(k, _)| k.as_str())
            .collect();
        assert_eq!(failed, ["fh-cross"]);
        assert_eq!(
            report.verdict("fh-cross").unwrap().witness,
            Some(CriterionWitness {
                n: 1,
                k: 1,
                l: 1,
                degree: 1
            })
        );
        assert!(confirm_conclusion(&spec, 8).unwrap().holds);
    }

    #[test]
    fn criterion_reports_constructed_violation() {
        let spec = TriangleSpec::new("v", "1", "1", "q^2").unwrap();
        let report = check_criterion(&spec, 4).unwrap();
        assert!(!report.overall);
        let gg = report.verdict("gg-fh").unwrap();
        assert!(!gg.holds);
        assert_eq!(
            gg.witness,
            Some(CriterionWitness {
                n: 1,
                k: 1,
                l: 1,
                degree: 2
            })
        );
        assert!(report.verdict("f-slc").unwrap().holds);
    }

    #[test]
    fn criterion_rejects_negative_coefficients() {
        let spec = TriangleSpec::new("v", "1", "2-k", "1").unwrap();
        let err = check_criterion(&spec, 4).unwrap_err();
        assert!(matches!(
            err,
            CriteriaError::Triangle(TriangleError::NegativeCoefficient { k: 3, n: 2, .. })
        ));
    }

    #[test]
    fn criterion_report_json_keys() {
        let spec = TriangleSpec::new("v", "1", "1", "q^2").unwrap();
        let text = serde_json::to_string(&check_criterion(&spec, 2).unwrap()).unwrap();
        let positions: Vec<_> = ROW_CONDITIONS
            .iter()
            .map(|c| text.find(&format!("\"{c}\"")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            json["conditions"]["f-slc"],
            serde_json::json!({"holds": true})
        );
        assert_eq!(
            json["conditions"]["gg-fh"],
            serde_json::json!({"holds": false, "n": 1, "k": 1, "l": 1, "degree": 2})
        );
        assert_eq!(json["overall"], false);
    }

    #[test]
    fn constant_criterion_examples() {
        let r = check_constant_criterion(&expr("1"), &expr("2"), &expr("1")).unwrap();
        assert!(r.overall);
        let r = check_constant_criterion(&expr("q"), &expr("q+1"), &expr("q")).unwrap();
        assert!(r.overall);
        let r = check_constant_criterion(&expr("2"), &expr("1"), &expr("1")).unwrap();
        assert!(!r.overall);
        assert_eq!(r.first_failure().unwrap().0, "g-e");
        assert!(matches!(
            check_constant_criterion(&expr("k"), &expr("1"), &expr("1")),
            Err(CriteriaError::NotConstant { which: "e", .. })
        ));
    }

    #[test]
    fn constant_parts_of_builtins() {
        let (e, g, h) = constant_parts(&builtin("narayana-poly").unwrap()).unwrap();
        assert_eq!((e.source(), g.source(), h.source()), ("q", "q+1", "q"));
        let (e, _, _) = constant_parts(&builtin("motzkin").unwrap()).unwrap();
        assert_eq!(e.source(), "1");
        assert!(constant_parts(&builtin("bell-poly").unwrap()).is_err());
        assert!(constant_parts(&builtin("schroeder").unwrap()).is_ok());
    }

    #[test]
    fn constant_criterion_implies_row_criterion_on_builtins() {
        for name in [
            "catalan-aigner",
            "catalan-shapiro",
            "motzkin",
            "schroeder",
            "narayana-poly",
        ] {
            let (e, g, h) = constant_parts(&builtin(name).unwrap()).unwrap();
            let small = check_constant_criterion(&e, &g, &h).unwrap();
            assert!(small.overall, "{name}");
            let induced = constant_spec(&e, &g, &h);
            assert!(check_criterion(&induced, 10).unwrap().overall, "{name}");
            assert!(confirm_conclusion(&induced, 10).unwrap().holds, "{name}");
        }
    }

    #[test]
    fn conclusion_examples() {
        assert!(
            confirm_conclusion(&builtin("narayana-poly").unwrap(), 10)
                .unwrap()
                .holds
        );
        let pascal = TriangleSpec::new("pascal", "1", "1", "0").unwrap();
        assert!(confirm_conclusion(&pascal, 10).unwrap().holds);

        let bad = TriangleSpec::new("bad", "1", "1", "q^2").unwrap();
        let r = confirm_conclusion(&bad, 4).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().row, Some(2));
    }

    #[test]
    fn random_specs_are_deterministic() {
        assert_eq!(random_spec(5), random_spec(5));
        let distinct: std::collections::HashSet<String> = (0..50)
            .map(|s| serde_json::to_string(&random_spec(s)).unwrap())
            .collect();
        assert!(distinct.len() > 40);
    }
}
