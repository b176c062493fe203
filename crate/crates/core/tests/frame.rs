mod common;

use common::normals;
use common::oracles::{char_poly_3x3, gramian_by_loops, max_abs_diff};
use frame_rkhs::classic::{
    hilbert_gramian_exact, mercedes_frame, monomial_frame, random_low_rank_frame,
    random_redundant_frame, random_riesz_frame,
};
use frame_rkhs::frame::{analysis, build_gramian, compute_frame_bounds, synthesis};
use frame_rkhs::CoeffSeq;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gramian_matches_brute_force(m in 1usize..=12, extra in 0usize..=6, seed in any::<u64>()) {
        let fs = random_redundant_frame(m, extra, seed).unwrap();
        let g = build_gramian(&fs);
        prop_assert!(max_abs_diff(g.matrix().as_array(), &gramian_by_loops(&fs)) <= 1e-12);
    }

    #[test]
    fn analysis_is_adjoint_of_synthesis(m in 1usize..=12, n in 1usize..=15, seed in any::<u64>()) {
        let fs = random_low_rank_frame(m, n, n.min(m), seed).unwrap();
        let f = normals(seed, m);
        let c = CoeffSeq::new(normals(seed ^ 1, n)).unwrap();
        let lhs = analysis(&fs, &f).unwrap().dot(&c).unwrap();
        let rhs = fs.grid().inner(&f, &synthesis(&fs, &c).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn sampled_quadratic_form_respects_bounds(m in 1usize..=10, seed in any::<u64>()) {
        let fs = random_redundant_frame(m, 3, seed).unwrap();
        let b = compute_frame_bounds(&fs, 1e-10).unwrap();
        prop_assert!(b.is_frame && b.spans_ambient);
        for trial in 0..200u64 {
            let f = normals(seed.wrapping_add(trial), m);
            let energy = fs.grid().norm_sq(&f).unwrap();
            let tf = analysis(&fs, &f).unwrap();
            let q = tf.dot(&tf).unwrap();
            let slack = 1e-10 * b.upper * energy;
            prop_assert!(b.lower * energy - slack <= q && q <= b.upper * energy + slack);
        }
    }

    #[test]
    fn bounds_scale_quadratically(m in 1usize..=10, seed in any::<u64>(), alpha in 0.1f64..10.0) {
        let fs = random_riesz_frame(m, seed).unwrap();
        let b = compute_frame_bounds(&fs, 1e-10).unwrap();
        let bs = compute_frame_bounds(&fs.scaled(alpha).unwrap(), 1e-10).unwrap();
        let a2 = alpha * alpha;
        prop_assert!((bs.lower - a2 * b.lower).abs() <= 1e-10 * a2 * b.upper);
        prop_assert!((bs.upper - a2 * b.upper).abs() <= 1e-10 * a2 * b.upper);
    }

    #[test]
    fn rank_deficient_systems_are_not_frames(m in 3usize..=10, seed in any::<u64>()) {
        let fs = random_low_rank_frame(m, m + 2, m - 1, seed).unwrap();
        let b = compute_frame_bounds(&fs, 1e-10).unwrap();
        prop_assert_eq!(b.rank, m - 1);
        prop_assert!(!b.spans_ambient && !b.is_frame && b.lower == 0.0);
    }
}

#[test]
fn mercedes_spectrum_matches_characteristic_polynomial() {
    let g = build_gramian(&mercedes_frame());
    let (e1, e2, e3) = char_poly_3x3(g.matrix().as_array());
    let l = g.spectrum().unwrap().eigenvalues().to_vec();
    assert!((l[0] + l[1] + l[2] - e1).abs() <= 1e-12);
    assert!((l[0] * l[1] + l[0] * l[2] + l[1] * l[2] - e2).abs() <= 1e-12);
    assert!((l[0] * l[1] * l[2] - e3).abs() <= 1e-12);
    for x in l {
        assert!((x * x * x - e1 * x * x + e2 * x - e3).abs() <= 1e-12, "{x}");
    }
    let b = compute_frame_bounds(&mercedes_frame(), 1e-10).unwrap();
    assert!((b.lower - 1.5).abs() <= 1e-12 && (b.upper - 1.5).abs() <= 1e-12);
    assert!(b.is_frame && !b.is_parseval);
}

#[test]
fn monomial_gramian_approximates_hilbert_matrix() {
    let g = build_gramian(&monomial_frame(3, 2048).unwrap());
    let h = hilbert_gramian_exact(3).unwrap();
    assert!(max_abs_diff(g.matrix().as_array(), h.matrix().as_array()) <= 1e-4);
}

#[test]
fn large_monomial_system_has_no_usable_lower_bound() {
    let fs = monomial_frame(12, 4096).unwrap();
    let b = compute_frame_bounds(&fs, 1e-10).unwrap();
    assert!(b.upper < std::f64::consts::PI);
    let d = build_gramian(&fs).spectrum().unwrap();
    assert!(d.min_eigenvalue() < 1e-8);
}
