use num_bigint::BigInt;
use proptest::prelude::*;
use qlc_core::seqprops::{
    gaussian_binomial_row, is_log_concave, is_strong_q_log_concave, random_log_concave,
    to_rationals,
};
use qlc_core::transforms::{
    binomial_transform, shift_sum, window_convolve, BinomialParams, Window,
};
use qlc_core::triangles::{build, multinomial_triangle, TriangleSpec};
use qlc_core::PolySeq;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn window_convolve_keeps_log_concavity(wseed in 0u64..10_000, xseed in 0u64..10_000, wlen in 1usize..5, xlen in 5usize..12) {
        let w = Window::new(random_log_concave(wlen, wseed)).unwrap();
        let x = to_rationals(&random_log_concave(xlen, xseed));
        let z = window_convolve(&w, &x).unwrap();
        prop_assert!(is_log_concave(&z).unwrap().holds);
    }

    #[test]
    fn shift_sum_keeps_strong_q_log_concavity(m in 1usize..9) {
        let row = gaussian_binomial_row(m);
        let z = shift_sum(&row.0).unwrap();
        prop_assert!(is_strong_q_log_concave(&PolySeq(z)).unwrap().holds);
    }

    #[test]
    fn binomial_transform_of_gaussian_rows(m in 0usize..7, a in 0u32..5, b in 0u32..5) {
        let row = gaussian_binomial_row(m);
        let y = binomial_transform(BinomialParams { a, b }, &row.0, m).unwrap();
        prop_assert!(is_strong_q_log_concave(&PolySeq(y)).unwrap().holds);
    }

    #[test]
    fn all_ones_window_matches_pascal_sums(k in 1usize..5, n in 0usize..7) {
        let w = Window::from_i64s(&vec![1; k + 1]).unwrap();
        let t = multinomial_triangle(&w, n + 1);
        let total: BigInt = t.rows[n].0.iter().map(|e| e.as_constant().unwrap()).sum();
        prop_assert_eq!(total, BigInt::from(k + 1).pow(n as u32));
    }
}

#[test]
fn two_term_window_is_pascal() {
    let w = Window::from_i64s(&[1, 1]).unwrap();
    let pascal = build(&TriangleSpec::new("pascal", "1", "1", "0").unwrap(), 9).unwrap();
    assert_eq!(multinomial_triangle(&w, 9), pascal);
}
