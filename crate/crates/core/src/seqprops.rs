//! Sequence properties: log-concavity, log-convexity and their q-analogues,
//! the Toeplitz TP2 oracle, and seeded fixture generators.
//!
//! All comparisons are exact. Checks refuse sequences with internal zeros
//! rather than answering false, since the definitions presuppose there are
//! none.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qpoly::{q_geq_witness, QPoly};

/// A finite sequence of polynomials indexed from zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolySeq(pub Vec<QPoly>);

impl PolySeq {
    pub fn new(items: Vec<QPoly>) -> Self {
        PolySeq(items)
    }

    pub fn from_constants<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        PolySeq(values.into_iter().map(|v| QPoly::constant(v)).collect())
    }

    pub fn items(&self) -> &[QPoly] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval_at(&self, q0: &BigRational) -> Vec<BigRational> {
        self.0.iter().map(|p| p.eval_at(q0)).collect()
    }
}

impl From<Vec<QPoly>> for PolySeq {
    fn from(items: Vec<QPoly>) -> Self {
        PolySeq(items)
    }
}

/// Where a property check first failed.
///
/// `lhs` is the side the property requires to dominate `rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub row: Option<usize>,
    pub i: usize,
    pub j: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl Report {
    pub fn pass(property: impl Into<String>) -> Self {
        Report {
            property: property.into(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(property: impl Into<String>, witness: Witness) -> Self {
        Report {
            property: property.into(),
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_witness(property: &str, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Report::fail(property, w),
            None => Report::pass(property),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("sequence has an internal zero at index {index}")]
    InternalZeros { index: usize },
    #[error("item {index} has a negative coefficient at degree {degree}")]
    NegativeCoefficient { index: usize, degree: usize },
    #[error("item {index} is negative")]
    NegativeValue { index: usize },
    #[error("gaussian binomial [{m} choose {r}] requires 0 <= r <= m")]
    Range { m: i64, r: i64 },
}

/// Index of the first zero lying strictly between two nonzero items.
pub fn first_internal_zero<T: Zero>(items: &[T]) -> Option<usize> {
    let first = items.iter().position(|x| !x.is_zero())?;
    let last = items.iter().rposition(|x| !x.is_zero())?;
    (first..last).find(|&i| items[i].is_zero())
}

pub fn has_internal_zeros<T: Zero>(items: &[T]) -> bool {
    first_internal_zero(items).is_some()
}

fn check_poly_preconditions(items: &[QPoly]) -> Result<(), SeqError> {
    if let Some(index) = first_internal_zero(items) {
        return Err(SeqError::InternalZeros { index });
    }
    for (index, p) in items.iter().enumerate() {
        if let Some(degree) = p.first_negative_degree() {
            return Err(SeqError::NegativeCoefficient { index, degree });
        }
    }
    Ok(())
}

fn check_numeric_preconditions(items: &[BigRational]) -> Result<(), SeqError> {
    if let Some(index) = first_internal_zero(items) {
        return Err(SeqError::InternalZeros { index });
    }
    if let Some(index) = items.iter().position(Signed::is_negative) {
        return Err(SeqError::NegativeValue { index });
    }
    Ok(())
}

/// Scans index pairs `1 <= i <= j <= len-2` (only `i == j` when
/// `adjacent_only`) and returns the lexicographically smallest failure.
fn scan_pairs<W, F>(len: usize, adjacent_only: bool, check: F) -> Option<W>
where
    W: Send,
    F: Fn(usize, usize) -> Option<W> + Sync,
{
    if len < 3 {
        return None;
    }
    let last = len - 2;
    let row = |i: usize| {
        let upper = if adjacent_only { i } else { last };
        (i..=upper).find_map(|j| check(i, j))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (1..=last).into_par_iter().find_map_first(row)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (1..=last).find_map(row)
    }
}

fn poly_pair_scan(items: &[QPoly], adjacent_only: bool, convex: bool) -> Option<Witness> {
    scan_pairs(items.len(), adjacent_only, |i, j| {
        let inner = &items[i] * &items[j];
        let outer = &items[i - 1] * &items[j + 1];
        let (lhs, rhs) = if convex {
            (outer, inner)
        } else {
            (inner, outer)
        };
        q_geq_witness(&lhs, &rhs).map(|degree| Witness {
            row: None,
            i,
            j,
            degree: Some(degree),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    })
}

fn numeric_adjacent_scan(items: &[BigRational], convex: bool) -> Option<Witness> {
    scan_pairs(items.len(), true, |k, _| {
        let square = &items[k] * &items[k];
        let outer = &items[k - 1] * &items[k + 1];
        let (lhs, rhs) = if convex {
            (outer, square)
        } else {
            (square, outer)
        };
        (lhs < rhs).then(|| Witness {
            row: None,
            i: k,
            j: k,
            degree: None,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    })
}

/// `a_{k-1} a_{k+1} <= a_k^2` for every interior `k`.
pub fn is_log_concave(items: &[BigRational]) -> Result<Report, SeqError> {
    check_numeric_preconditions(items)?;
    Ok(Report::from_witness(
        "log-concave",
        numeric_adjacent_scan(items, false),
    ))
}

/// `a_{k-1} a_{k+1} >= a_k^2` for every interior `k`.
pub fn is_log_convex(items: &[BigRational]) -> Result<Report, SeqError> {
    check_numeric_preconditions(items)?;
    Ok(Report::from_witness(
        "log-convex",
        numeric_adjacent_scan(items, true),
    ))
}

/// `x_i x_j >=_q x_{i-1} x_{j+1}` for all `1 <= i <= j <= len-2`.
pub fn is_strong_q_log_concave(s: &PolySeq) -> Result<Report, SeqError> {
    check_poly_preconditions(&s.0)?;
    Ok(Report::from_witness(
        "strong-q-log-concave",
        poly_pair_scan(&s.0, false, false),
    ))
}

/// `x_k^2 >=_q x_{k-1} x_{k+1}` for every interior `k`.
pub fn is_q_log_concave(s: &PolySeq) -> Result<Report, SeqError> {
    check_poly_preconditions(&s.0)?;
    Ok(Report::from_witness(
        "q-log-concave",
        poly_pair_scan(&s.0, true, false),
    ))
}

/// `x_{i-1} x_{j+1} >=_q x_i x_j` for all `1 <= i <= j <= len-2`.
pub fn is_strong_q_log_convex(s: &PolySeq) -> Result<Report, SeqError> {
    check_poly_preconditions(&s.0)?;
    Ok(Report::from_witness(
        "strong-q-log-convex",
        poly_pair_scan(&s.0, false, true),
    ))
}

/// Checks every 2x2 minor of the banded Toeplitz matrix `M[i][j] = b[j - i]`
/// (zero off the band) on a `2·len(b)` square window.
///
/// For a nonnegative sequence without internal zeros this is equivalent to
/// log-concavity, and is computed without reference to the log-concavity test.
pub fn tp2_window_check(b: &[BigInt]) -> Report {
    let size = 2 * b.len();
    let zero = BigInt::zero();
    let entry = |i: usize, j: usize| -> &BigInt {
        if j >= i && j - i < b.len() {
            &b[j - i]
        } else {
            &zero
        }
    };
    for r1 in 0..size {
        for r2 in r1 + 1..size {
            for c1 in 0..size {
                for c2 in c1 + 1..size {
                    let main = entry(r1, c1) * entry(r2, c2);
                    let anti = entry(r1, c2) * entry(r2, c1);
                    if main < anti {
                        return Report::fail(
                            "tp2-window",
                            Witness {
                                row: None,
                                i: r1,
                                j: r2,
                                degree: None,
                                lhs: format!("M[{r1}][{c1}]*M[{r2}][{c2}]={main}"),
                                rhs: format!("M[{r1}][{c2}]*M[{r2}][{c1}]={anti}"),
                            },
                        );
                    }
                }
            }
        }
    }
    Report::pass("tp2-window")
}

/// Gaussian binomial coefficient `[m choose r]_q` by the q-Pascal rule
/// `[m, r] = [m-1, r-1] + q^r [m-1, r]`.
pub fn gaussian_binomial(m: i64, r: i64) -> Result<QPoly, SeqError> {
    if m < 0 || r < 0 || r > m {
        return Err(SeqError::Range { m, r });
    }
    let m = m as usize;
    let r = r as usize;
    Ok(gaussian_binomial_row(m).0.swap_remove(r))
}

/// The full row `([m choose r]_q)_{r=0..m}`.
pub fn gaussian_binomial_row(m: usize) -> PolySeq {
    let mut row = vec![QPoly::one()];
    for mm in 1..=m {
        let mut next = Vec::with_capacity(mm + 1);
        next.push(QPoly::one());
        for r in 1..mm {
            let shifted = &QPoly::monomial(1, r) * &row[r];
            next.push(&row[r - 1] + &shifted);
        }
        next.push(QPoly::one());
        row = next;
    }
    PolySeq(row)
}

fn locally_ok(a: &[BigInt], idx: usize, convex: bool) -> bool {
    let lo = idx.saturating_sub(1).max(1);
    let hi = (idx + 1).min(a.len().saturating_sub(2));
    (lo..=hi).all(|k| {
        let sq = &a[k] * &a[k];
        let outer = &a[k - 1] * &a[k + 1];
        if convex {
            outer >= sq
        } else {
            outer <= sq
        }
    })
}

fn random_profile_sequence(len: usize, seed: u64, convex: bool) -> Vec<BigInt> {
    assert!(len >= 1, "sequence length must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = BigInt::from(rng.gen_range(2u32..=3));

    // concave profile: nonincreasing steps; convex: nondecreasing
    let mut steps: Vec<i64> = (1..len).map(|_| rng.gen_range(-2..=2)).collect();
    steps.sort_unstable();
    if !convex {
        steps.reverse();
    }
    let mut exps = Vec::with_capacity(len);
    exps.push(0i64);
    for s in &steps {
        exps.push(exps.last().unwrap() + s);
    }
    let min = *exps.iter().min().unwrap();
    let scale = BigInt::from(rng.gen_range(1u32..=5));
    let mut a: Vec<BigInt> = exps
        .iter()
        .map(|&e| &scale * num_traits::pow(base.clone(), (e - min) as usize))
        .collect();

    for _ in 0..2 * len {
        let idx = rng.gen_range(0..len);
        let current = a[idx].clone();
        let half: BigInt = &current / 2u32;
        if half.is_zero() {
            continue;
        }
        let cap = u64::try_from(&half).map_or(1000, |h| h.min(1000));
        let delta = rng.gen_range(1..=cap);
        let candidate = if convex && rng.gen_bool(0.5) {
            &current + delta
        } else {
            &current - delta
        };
        if candidate < BigInt::one() {
            continue;
        }
        a[idx] = candidate;
        if !locally_ok(&a, idx, convex) {
            a[idx] = current;
        }
    }
    a
}

/// Deterministic positive log-concave integer sequence of length `len`.
///
/// Exponentiates a concave integer profile, scales it, then nudges entries
/// downward, undoing any nudge that breaks log-concavity.
pub fn random_log_concave(len: usize, seed: u64) -> Vec<BigInt> {
    random_profile_sequence(len, seed, false)
}

/// Log-convex counterpart of [`random_log_concave`]: convex profile, nudges
/// in both directions.
pub fn random_log_convex(len: usize, seed: u64) -> Vec<BigInt> {
    random_profile_sequence(len, seed, true)
}

pub fn to_rationals(values: &[BigInt]) -> Vec<BigRational> {
    values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        to_rationals(&ints(v))
    }

    fn polys(v: &[&[i64]]) -> PolySeq {
        PolySeq(v.iter().map(|c| QPoly::from_i64s(c)).collect())
    }

    #[test]
    fn internal_zero_detection() {
        assert!(has_internal_zeros(&ints(&[1, 0, 1])));
        assert!(!has_internal_zeros(&ints(&[0, 1, 2, 0])));
        assert!(has_internal_zeros(&ints(&[1, 2, 0, 0, 3])));
        assert_eq!(first_internal_zero(&ints(&[1, 2, 0, 0, 3])), Some(2));
        assert!(!has_internal_zeros::<BigInt>(&[]));
        assert!(!has_internal_zeros(&ints(&[0, 0])));
    }

    #[test]
    fn log_concave_examples() {
        assert!(is_log_concave(&rats(&[4, 5, 3, 1])).unwrap().holds);
        let r = is_log_concave(&rats(&[1, 1, 2])).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.as_ref().map(|w| w.i), Some(1));
        assert!(is_log_concave(&rats(&[1, 3, 3, 1])).unwrap().holds);
        assert_eq!(
            is_log_concave(&rats(&[1, 0, 1])),
            Err(SeqError::InternalZeros { index: 1 })
        );
        assert_eq!(
            is_log_concave(&rats(&[1, -1, 1])),
            Err(SeqError::NegativeValue { index: 1 })
        );
    }

    #[test]
    fn log_convex_examples() {
        assert!(is_log_convex(&rats(&[1, 1, 2, 5, 14])).unwrap().holds);
        assert!(!is_log_convex(&rats(&[1, 2, 3])).unwrap().holds);
        assert!(is_log_convex(&rats(&[7, 7, 7, 7])).unwrap().holds);
        let half = BigRational::new(1.into(), 2.into());
        let geometric: Vec<_> = (0..5).map(|e| num_traits::pow(half.clone(), e)).collect();
        assert!(is_log_convex(&geometric).unwrap().holds);
        assert!(is_log_concave(&geometric).unwrap().holds);
    }

    #[test]
    fn strong_q_log_concave_examples() {
        let narayana3 = polys(&[&[0, 1, 3, 1], &[1, 5, 3], &[2, 3], &[1]]);
        assert!(is_strong_q_log_concave(&narayana3).unwrap().holds);

        let r = is_strong_q_log_concave(&polys(&[&[1], &[0, 1], &[1]])).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.i, w.j, w.degree), (1, 1, Some(0)));
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("q^2", "1"));

        assert!(
            is_strong_q_log_concave(&polys(&[&[1], &[1, 1], &[1, 2, 1]]))
                .unwrap()
                .holds
        );
        assert!(is_strong_q_log_concave(&polys(&[&[1]])).unwrap().holds);
        assert!(is_strong_q_log_concave(&PolySeq::default()).unwrap().holds);
    }

    #[test]
    fn q_log_concave_examples() {
        assert!(
            is_q_log_concave(&polys(&[&[0, 1, 1], &[1, 2], &[1]]))
                .unwrap()
                .holds
        );
        assert!(
            !is_q_log_concave(&polys(&[&[1], &[0, 1], &[1]]))
                .unwrap()
                .holds
        );
        let gauss = gaussian_binomial_row(5);
        assert!(is_q_log_concave(&gauss).unwrap().holds);
    }

    #[test]
    fn strong_q_log_convex_examples() {
        assert!(
            is_strong_q_log_convex(&PolySeq::from_constants([1, 1, 2, 5]))
                .unwrap()
                .holds
        );
        assert!(
            !is_strong_q_log_convex(&PolySeq::from_constants([1, 2, 3]))
                .unwrap()
                .holds
        );
        assert!(
            is_strong_q_log_convex(&PolySeq::from_constants([3, 3, 3, 3]))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn poly_preconditions() {
        assert_eq!(
            is_strong_q_log_concave(&polys(&[&[1], &[], &[1]])),
            Err(SeqError::InternalZeros { index: 1 })
        );
        assert_eq!(
            is_q_log_concave(&polys(&[&[1], &[1, -1]])),
            Err(SeqError::NegativeCoefficient {
                index: 1,
                degree: 1
            })
        );
    }

    #[test]
    fn tp2_examples() {
        assert!(tp2_window_check(&ints(&[1, 2, 1])).holds);
        assert!(!tp2_window_check(&ints(&[1, 1, 3])).holds);
        assert!(tp2_window_check(&ints(&[1, 1, 1, 1])).holds);
        assert!(tp2_window_check(&[]).holds);
        // internal zero breaks TP2 even though adjacent ratios look fine
        assert!(!tp2_window_check(&ints(&[1, 0, 0, 1])).holds);
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(
            gaussian_binomial(4, 2).unwrap(),
            QPoly::from_i64s(&[1, 1, 2, 1, 1])
        );
        assert_eq!(gaussian_binomial(6, 0).unwrap(), QPoly::one());
        assert_eq!(gaussian_binomial(6, 6).unwrap(), QPoly::one());
        let one = BigRational::one();
        for m in 0..=8i64 {
            for r in 0..=m {
                let classical = num_integer::binomial(BigInt::from(m), BigInt::from(r));
                assert_eq!(
                    gaussian_binomial(m, r).unwrap().eval_at(&one),
                    BigRational::from_integer(classical)
                );
            }
        }
        assert_eq!(gaussian_binomial(3, 4), Err(SeqError::Range { m: 3, r: 4 }));
        assert!(gaussian_binomial(3, -1).is_err());
    }

    #[test]
    fn gaussian_rows_are_strongly_q_log_concave() {
        for m in 0..=8 {
            let row = gaussian_binomial_row(m);
            assert!(is_strong_q_log_concave(&row).unwrap().holds, "m = {m}");
        }
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        assert_eq!(random_log_concave(1, 7).len(), 1);
        assert!(random_log_concave(1, 7)[0] >= BigInt::one());
        for seed in 0..200 {
            let len = 1 + (seed as usize % 12);
            let a = random_log_concave(len, seed);
            assert_eq!(a, random_log_concave(len, seed));
            assert!(a.iter().all(|x| x >= &BigInt::one()));
            assert!(
                is_log_concave(&to_rationals(&a)).unwrap().holds,
                "seed {seed}: {a:?}"
            );

            let b = random_log_convex(len, seed);
            assert!(b.iter().all(|x| x >= &BigInt::one()));
            assert!(
                is_log_convex(&to_rationals(&b)).unwrap().holds,
                "seed {seed}: {b:?}"
            );
        }
    }

    proptest! {
        #[test]
        fn strong_implies_weak(raw in proptest::collection::vec(
            proptest::collection::vec(0i64..6, 1..4), 1..7)
        ) {
            let s = PolySeq(raw.iter().map(|c| QPoly::from_i64s(c)).collect());
            prop_assume!(!has_internal_zeros(&s.0));
            if is_strong_q_log_concave(&s).unwrap().holds {
                prop_assert!(is_q_log_concave(&s).unwrap().holds);
            }
        }

        #[test]
        fn constant_strong_check_matches_classical(raw in proptest::collection::vec(0i64..30, 0..9)) {
            prop_assume!(!has_internal_zeros(&raw.iter().copied().map(BigInt::from).collect::<Vec<_>>()));
            let strong = is_strong_q_log_concave(&PolySeq::from_constants(raw.iter().copied()))
                .unwrap()
                .holds;
            let classical = is_log_concave(&rats(&raw)).unwrap().holds;
            prop_assert_eq!(strong, classical);
        }

        #[test]
        fn tp2_matches_log_concavity(raw in proptest::collection::vec(0i64..8, 0..6)) {
            let b = ints(&raw);
            prop_assume!(!has_internal_zeros(&b));
            prop_assert_eq!(
                tp2_window_check(&b).holds,
                is_log_concave(&to_rationals(&b)).unwrap().holds
            );
        }
    }
}
