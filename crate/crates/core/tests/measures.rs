use cesaro_core::measures::{KernelSpec, Measure};
use proptest::prelude::*;

fn atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..0.95, 0.01f64..2.0), 1..6)
}

#[test]
fn spec_examples() {
    let leb = Measure::lebesgue();
    assert!((leb.moment(0).unwrap() - 1.0).abs() < 1e-14);
    assert!((leb.tail_mass(0.25).unwrap() - 0.75).abs() < 1e-14);
    let half = Measure::point_mass(0.5, 1.0).unwrap();
    assert_eq!(half.moment(3).unwrap(), 0.125);
    let poly = Measure::poly(2.0, 1.0).unwrap();
    for n in 0..20 {
        let want = 2.0 / ((n as f64 + 1.0) * (n as f64 + 2.0));
        assert!((poly.moment(n).unwrap() - want).abs() < 1e-13);
    }
}

#[test]
fn gap_kernel_on_lebesgue_diverges() {
    assert!(Measure::lebesgue().integrate_kernel(&KernelSpec::ReciprocalGap).unwrap().is_divergent());
    let g = Measure::geometric(0.5).unwrap().integrate_kernel(&KernelSpec::ReciprocalGap).unwrap();
    assert!((g.real().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn density_moments_are_monotone_and_log_convex() {
    for m in [Measure::lebesgue(), Measure::poly(3.0, 2.0).unwrap(), Measure::expgap(1.0, 1.0).unwrap()] {
        let mu = m.moments_upto(300).unwrap();
        let v = mu.values();
        for n in 1..v.len() - 1 {
            assert!(v[n] <= v[n - 1]);
            assert!(v[n] * v[n] <= v[n - 1] * v[n + 1] * (1.0 + 1e-9));
        }
    }
}

#[test]
fn tail_mass_of_densities() {
    for m in [Measure::lebesgue(), Measure::poly(2.0, 1.0).unwrap(), Measure::expgap(1.0, 1.0).unwrap()] {
        let mass = m.total_mass().unwrap();
        assert!((m.tail_mass(0.0).unwrap() - mass).abs() <= 1e-12 * mass);
        let mut prev = mass;
        for j in 1..30 {
            let t = 1.0 - 2f64.powi(-j);
            let cur = m.tail_mass(t).unwrap();
            assert!(cur <= prev * (1.0 + 1e-12));
            prev = cur;
        }
    }
}

#[test]
fn moment_defined_tail_mass_is_unsupported() {
    assert!(Measure::cesaro().tail_mass(0.5).is_err());
}

proptest! {
    #[test]
    fn atomic_moments_are_monotone_and_log_convex(a in atoms()) {
        let m = Measure::atomic(a).unwrap();
        let v = m.moments_upto(200).unwrap().into_values();
        for n in 1..v.len() - 1 {
            prop_assert!(v[n] <= v[n - 1]);
            prop_assert!(v[n] * v[n] <= v[n - 1] * v[n + 1] * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn tail_mass_is_nonincreasing(a in atoms(), ts in prop::collection::vec(0.0f64..1.0, 2..8)) {
        let m = Measure::atomic(a).unwrap();
        prop_assert_eq!(m.tail_mass(0.0).unwrap(), m.total_mass().unwrap());
        let mut ts = ts;
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            prop_assert!(m.tail_mass(w[1]).unwrap() <= m.tail_mass(w[0]).unwrap());
        }
    }

    #[test]
    fn atomic_and_moment_forms_agree(a in prop::collection::vec((0.0f64..0.9, 0.1f64..1.0), 1..4), r in 0.0f64..0.99, p in 0.5f64..3.0) {
        let atomic = Measure::atomic(a).unwrap();
        let moments = atomic.moments_upto(6000).unwrap().into_values();
        let defined = Measure::custom_moments(moments).unwrap();
        let k = KernelSpec::PowerReciprocal { r, p };
        let x = atomic.integrate_kernel(&k).unwrap().real().unwrap();
        let y = defined.integrate_kernel(&k).unwrap().real().unwrap();
        prop_assert!((x - y).abs() <= 1e-8 * x.abs(), "{} vs {}", x, y);
    }
}
