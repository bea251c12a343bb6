use cesaro_core::catalog::{catalog, rational_sequences};
use cesaro_core::moments::{example_sequence, CatalogSequence};
use cesaro_core::operator::apply_cesaro;
use cesaro_core::spectrum::{
    eigen_coefficients, eigen_log_coefficients, eigen_residual, inverse_at_zero, log_coefficients_csv, point_spectrum_bounds, product_bound_check,
    resolvent_solve, ProductBoundQuery,
};
use cesaro_core::{BigRational, Complex64, Error, MomentSequence, TruncatedSeries, Verdict};
use proptest::prelude::*;

#[test]
fn eigen_residual_for_catalog() {
    for entry in catalog() {
        let seq = entry.measure.moments_upto(512).unwrap();
        for n0 in 0..=8 {
            let r = eigen_residual(&seq, n0, 512, n0 as f64 + 2.0).unwrap();
            assert!(r.residual <= 1e-9 * r.norm, "{} n0 = {n0}: {} vs {}", entry.label, r.residual, r.norm);
        }
    }
}

#[test]
fn recursion_matches_product_formula() {
    for entry in catalog() {
        let seq = entry.measure.moments_upto(208).unwrap();
        for n0 in [0, 3, 8] {
            let rec = eigen_coefficients(&seq, n0, n0 + 200).unwrap();
            let closed = eigen_log_coefficients(&seq, n0, n0 + 200).unwrap();
            for k in n0..=n0 + 200 {
                let a = rec.coeffs()[k];
                if a == 0.0 {
                    assert_eq!(closed[k].log_magnitude, f64::NEG_INFINITY);
                    continue;
                }
                let rel = (a.abs().ln() - closed[k].log_magnitude).abs();
                assert!(rel <= 1e-8, "{} n0 = {n0} k = {k}: {rel:e}", entry.label);
                assert_eq!(a.signum(), closed[k].sign());
            }
        }
    }
}

#[test]
fn eigen_csv_columns() {
    let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Cesaro, 4).unwrap();
    let csv = log_coefficients_csv(&eigen_log_coefficients(&seq, 1, 4).unwrap());
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,log_magnitude,sign_or_phase"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn float_inverse_round_trip() {
    for entry in catalog() {
        let seq = entry.measure.moments_upto(128).unwrap();
        if seq.values().contains(&0.0) {
            continue;
        }
        let b = TruncatedSeries::new((0..=128).map(|n| Complex64::new((n as f64).sin(), (n as f64 * 0.3).cos())).collect()).unwrap();
        let a = inverse_at_zero(&seq, &b).unwrap();
        let back = apply_cesaro(&seq, &a).unwrap();
        for n in 0..=128 {
            assert!((back.coeffs()[n] - b.coeffs()[n]).norm() <= 1e-10 * b.max_modulus(), "{} n = {n}", entry.label);
        }
    }
}

#[test]
fn exact_inverse_round_trip() {
    for (label, s) in rational_sequences() {
        let seq: MomentSequence<BigRational> = example_sequence(s, 40).unwrap();
        let b = TruncatedSeries::new((0..=40i64).map(|n| BigRational::new((n * n - 7).into(), (n + 3).into())).collect()).unwrap();
        let back = apply_cesaro(&seq, &inverse_at_zero(&seq, &b).unwrap()).unwrap();
        assert_eq!(back, b, "{label}");
    }
}

#[test]
fn zero_moment_blocks_the_inverse() {
    let seq = MomentSequence::new(vec![1.0, 0.0, 0.0]).unwrap();
    let b = TruncatedSeries::<f64>::ones(2);
    assert!(matches!(inverse_at_zero(&seq, &b), Err(Error::ZeroMoment { index: 1 })));
}

#[test]
fn resolvent_warns_near_spectrum() {
    let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Cesaro, 16).unwrap();
    let b = TruncatedSeries::<f64>::ones(16);
    let g = resolvent_solve(&seq, 0.5 + 1e-5, &b).unwrap();
    assert!(g.warning.is_some());
    assert_eq!(g.query.nearest_index, 1);
    assert!(resolvent_solve(&seq, 3.0, &b).unwrap().warning.is_none());
}

#[test]
fn product_bound_precondition() {
    let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Power { p: 0.5 }, 200).unwrap();
    let q = ProductBoundQuery { lambda: Complex64::new(-1.0, 0.0), c: 1.0, start: 1, k_fit: 10, k_max: 200, upper: None };
    let r = product_bound_check(&seq, &q).unwrap();
    assert_eq!(r.precondition, Verdict::Fail);
    assert!(r.lower.is_none());
}

#[test]
fn bracket_with_both_constants() {
    let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Shifted, 256).unwrap();
    let b = point_spectrum_bounds(&seq, 3.0, 1.0, Some(0.5)).unwrap();
    let outer = b.outer.unwrap();
    assert!(b.inner.iter().all(|n| outer.contains(n)));
    assert_eq!(b.undetermined, outer.iter().copied().filter(|n| !b.inner.contains(n)).collect::<Vec<_>>());
}

proptest! {
    #[test]
    fn inner_sets_grow_with_gamma(g1 in 0.0f64..12.0, dg in 0.0f64..6.0, c in 0.3f64..2.0) {
        let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Cesaro, 128).unwrap();
        let a = point_spectrum_bounds(&seq, g1, c, None).unwrap().inner;
        let b = point_spectrum_bounds(&seq, g1 + dg, c, None).unwrap().inner;
        prop_assert!(a.iter().all(|n| b.contains(n)));
    }

    #[test]
    fn resolvent_residual(re in -3.0f64..3.0, im in -2.0f64..2.0, seed in prop::collection::vec(-1.0f64..1.0, 65)) {
        let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Shifted, 64).unwrap();
        let lam = Complex64::new(re, im);
        prop_assume!(seq.values().iter().all(|&m| (Complex64::new(m, 0.0) - lam).norm() >= 0.05));
        let b = TruncatedSeries::new(seed.iter().map(|&x| Complex64::new(x, -x)).collect()).unwrap();
        let g = resolvent_solve(&seq, lam, &b).unwrap();
        let cg = apply_cesaro(&seq, &g.series).unwrap();
        let scale = b.max_modulus().max(lam.norm() * g.series.max_modulus());
        for n in 0..=64 {
            prop_assert!((cg.coeffs()[n] - lam * g.series.coeffs()[n] - b.coeffs()[n]).norm() <= 1e-9 * scale);
        }
    }
}
