//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use cesaro_core::carleson::{moment_classify, CarlesonClass};
use cesaro_core::catalog::{catalog, rational_sequences};
use cesaro_core::grammar::SeriesSpec;
use cesaro_core::moments::{example_sequence, expdensity_asymptotic, hausdorff_check, leibniz_product, structural_check};
use cesaro_core::operator::{apply_cesaro, compactness_profile, continuity_functional, hinfty_summability, representation_consistency, CompactnessVerdict, ContinuityVerdict};
use cesaro_core::spaces::{korenblum_membership, KorenblumVerdict};
use cesaro_core::spectrum::{
    eigen_coefficients, eigen_residual, inverse_at_zero, korenblum_spectral_check, point_spectrum_bounds, product_bound_check, resolvent_solve, spectral_query,
    ProductBoundQuery,
};
use cesaro_core::{BigRational, CatalogSequence, Complex64, Measure, MomentSequence, RadialGrid, TruncatedSeries, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn moment_exactness() -> Outcome {
    let m = Measure::lebesgue();
    let mut worst = 0.0f64;
    for n in 0..=200 {
        worst = worst.max((m.moment(n).map_err(e)? - 1.0 / (n as f64 + 1.0)).abs());
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e} > 1e-12"))?;
    Ok(format!("max |mu_n - 1/(n+1)| = {worst:.2e} (n <= 200)"))
}

fn moment_structure() -> Outcome {
    let mut count = 0;
    for entry in catalog() {
        if !entry.measure.charges_open_interval() {
            continue;
        }
        let seq = entry.measure.moments_upto(512).map_err(e)?;
        let report = structural_check(&seq).map_err(e)?;
        for name in ["strict_decrease", "ratio_monotone", "log_convex"] {
            ensure(report.verdict_of(name) == Some(Verdict::Pass), || format!("{}: {name} = {:?}", entry.label, report.verdict_of(name)))?;
        }
        let ratios_ge_one = seq.values().windows(2).all(|w| w[0] / w[1] >= 1.0 - 1e-9);
        ensure(ratios_ge_one, || format!("{}: some ratio below 1", entry.label))?;
        count += 1;
    }
    Ok(format!("{count} measures: strict decrease, ratio monotone >= 1, log-convex at N = 512"))
}

fn hausdorff_catalog() -> Outcome {
    let seqs = [
        ("geometric(1/2)", CatalogSequence::Geometric { a: 0.5 }),
        ("power(1/2)", CatalogSequence::Power { p: 0.5 }),
        ("power(2)", CatalogSequence::Power { p: 2.0 }),
        ("shifted", CatalogSequence::Shifted),
        ("cesaro", CatalogSequence::Cesaro),
    ];
    for (name, s) in seqs {
        let seq: MomentSequence<f64> = example_sequence(s, 200).map_err(e)?;
        let out = hausdorff_check(&seq, 20).map_err(e)?;
        ensure(out.verdict.is_pass(), || format!("{name}: {:?}", out.verdict))?;
    }
    let mut crafted: Vec<f64> = (0..=200).map(|n| 1.0 / (n as f64 + 1.0)).collect();
    crafted[3] = crafted[2] * 1.05;
    let out = hausdorff_check(&MomentSequence::new(crafted).map_err(e)?, 20).map_err(e)?;
    match out.verdict {
        cesaro_core::moments::HausdorffVerdict::Fail { j, n, .. } => Ok(format!("5 catalog sequences pass at J = 20, N = 200; crafted sequence fails at (j, n) = ({j}, {n})")),
        other => Err(format!("crafted sequence: {other:?}")),
    }
}

fn leibniz_identity() -> Outcome {
    let n_max = 200i64;
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let f1 = MomentSequence::new((0..=n_max).map(|n| r(n + 2, n + 1)).collect()).map_err(e)?;
    let f2 = MomentSequence::new((0..=n_max).map(|n| r(1, 2 * (n + 1))).collect()).map_err(e)?;
    let prod = leibniz_product(&f1, &f2).map_err(e)?;
    let shifted: MomentSequence<BigRational> = example_sequence(CatalogSequence::Shifted, n_max as usize).map_err(e)?;
    ensure(prod.values() == shifted.values(), || "product differs from (n+2)/(2(n+1)^2)".into())?;
    Ok(format!("exact rational equality for n <= {n_max}"))
}

fn binom(k: usize, j: usize) -> f64 {
    if j > k {
        return 0.0;
    }
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

fn classical_eigen() -> Outcome {
    let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Cesaro, 512).map_err(e)?;
    let mut worst_rel = 0.0f64;
    let mut worst_res = 0.0f64;
    for n0 in 0..=8 {
        let f = eigen_coefficients(&seq, n0, 100).map_err(e)?;
        for k in 0..=100 {
            let want = binom(k, n0);
            let got = f.coeffs()[k];
            let err = if want == 0.0 { got.abs() } else { ((got - want) / want).abs() };
            worst_rel = worst_rel.max(err);
        }
        let res = eigen_residual(&seq, n0, 512, n0 as f64 + 2.0).map_err(e)?;
        worst_res = worst_res.max(res.residual / res.norm);
    }
    ensure(worst_rel <= 1e-9, || format!("coefficient error {worst_rel:e}"))?;
    ensure(worst_res <= 1e-9, || format!("residual/norm {worst_res:e}"))?;
    Ok(format!("max rel err vs binom(k, n0) = {worst_rel:.1e}; max residual/norm = {worst_res:.1e}"))
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let degree = 256;
    let lambdas = [Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.4, 0.3)];
    let mut worst = 0.0f64;
    let mut solved = 0;
    let mut skipped = 0;
    for entry in catalog() {
        let seq = entry.measure.moments_upto(degree).map_err(e)?;
        let b = TruncatedSeries::new((0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).map_err(e)?;
        for &lam in &lambdas {
            if spectral_query(&seq, lam).distance < 0.05 {
                skipped += 1;
                continue;
            }
            let g = resolvent_solve(&seq, lam, &b).map_err(e)?;
            let cg = apply_cesaro(&seq, &g.series).map_err(e)?;
            let res = (0..=degree).map(|n| (cg.coeffs()[n] - lam * g.series.coeffs()[n] - b.coeffs()[n]).norm()).fold(0.0, f64::max);
            let scale = b.max_modulus().max(g.series.max_modulus() * lam.norm());
            worst = worst.max(res / scale);
            solved += 1;
        }
    }
    ensure(worst <= 1e-9, || format!("resolvent residual {worst:e}"))?;
    for (label, s) in rational_sequences() {
        let seq: MomentSequence<BigRational> = example_sequence(s, 64).map_err(e)?;
        let b = TruncatedSeries::new((0..=64).map(|_| BigRational::new(rng.gen_range(-50i64..50).into(), rng.gen_range(1i64..20).into())).collect()).map_err(e)?;
        let a = inverse_at_zero(&seq, &b).map_err(e)?;
        let back = apply_cesaro(&seq, &a).map_err(e)?;
        ensure(back == b, || format!("{label}: rational inverse round trip is not exact"))?;
    }
    Ok(format!("{solved} resolvent solves, max rel residual {worst:.1e} ({skipped} pairs with d < 0.05 skipped); exact inverse round trips"))
}

fn continuity_compactness() -> Outcome {
    let grid = RadialGrid::default();
    let mut informational = Vec::new();
    for p in [0.3, 0.5, 1.0] {
        let m = Measure::power(p).map_err(e)?;
        let at = continuity_functional(&m, 1.0, 1.0 - p, &grid).map_err(e)?;
        ensure(at.continuity() == ContinuityVerdict::Bounded, || format!("p = {p}: continuity at 1 - p is {:?}", at.continuity()))?;
        let cp = compactness_profile(&m, 1.0, 1.0 - p, &grid).map_err(e)?;
        ensure(cp.compactness() == CompactnessVerdict::Positive, || format!("p = {p}: compactness at 1 - p is {:?}", cp.compactness()))?;
        let below = continuity_functional(&m, 1.0, 1.0 - p - 0.2, &grid).map_err(e)?;
        ensure(below.continuity() == ContinuityVerdict::Growing, || format!("p = {p}: continuity at 1 - p - 0.2 is {:?}", below.continuity()))?;
        let above = compactness_profile(&m, 1.0, 1.0 - p + 0.2, &grid).map_err(e)?;
        informational.push(format!("{p}:{:?}", above.compactness()));
        let seq = example_sequence::<f64>(CatalogSequence::Power { p }, 4096).map_err(e)?;
        let on = moment_classify(&seq, p).map_err(e)?;
        ensure(on.class.is_carleson(), || format!("p = {p}: moment_classify(s = p) = {:?}", on.class))?;
        let off = moment_classify(&seq, p + 0.2).map_err(e)?;
        ensure(off.class == CarlesonClass::Neither, || format!("p = {p}: moment_classify(s = p + 0.2) = {:?}", off.class))?;
    }
    Ok(format!(
        "p in {{0.3, 0.5, 1}}: bounded/positive at 1 - p, growing at 1 - p - 0.2, carleson at s = p, neither at s = p + 0.2; profile at 1 - p + 0.2 [{}]",
        informational.join(", ")
    ))
}

fn hinfty_coherence() -> Outcome {
    let mut convergent = Vec::new();
    for entry in catalog() {
        let r = hinfty_summability(&entry.measure).map_err(e)?;
        ensure(r.agree, || format!("{}: sum {:?} vs integral {:?}", entry.label, r.moment_sum.convergent, r.gap_integral.convergent))?;
        if r.moment_sum.convergent {
            convergent.push(entry.label);
        }
    }
    let leb = hinfty_summability(&Measure::lebesgue()).map_err(e)?;
    ensure(!leb.moment_sum.convergent && !leb.gap_integral.convergent, || "lebesgue should diverge on both sides".into())?;
    let g = hinfty_summability(&Measure::geometric(0.5).map_err(e)?).map_err(e)?;
    ensure(g.moment_sum.convergent && (g.moment_sum.value - 2.0).abs() <= 1e-10, || format!("geometric sum {}", g.moment_sum.value))?;
    ensure(g.gap_integral.convergent && (g.gap_integral.value - 2.0).abs() <= 1e-10, || format!("geometric integral {}", g.gap_integral.value))?;
    Ok(format!(
        "verdicts agree on {} measures ({} convergent); geometric(1/2): sum err {:.1e}, integral err {:.1e}",
        catalog().len(),
        convergent.len(),
        (g.moment_sum.value - 2.0).abs(),
        (g.gap_integral.value - 2.0).abs()
    ))
}

fn product_bounds() -> Outcome {
    let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Cesaro, 10_000).map_err(e)?;
    let q = ProductBoundQuery { lambda: Complex64::new(0.4, 0.0), c: 1.0, start: 1, k_fit: 10, k_max: 10_000, upper: Some((0.6, 1.0)) };
    let r = product_bound_check(&seq, &q).map_err(e)?;
    ensure(r.precondition == Verdict::Pass, || r.precondition_note.clone())?;
    let lower = r.lower.ok_or("missing lower branch")?;
    let upper = r.upper.ok_or("missing upper branch")?;
    ensure(lower.exponent == 3 && lower.holds, || format!("lower: exponent {}, first failure {:?}", lower.exponent, lower.first_failure))?;
    ensure(upper.exponent == 1 && upper.holds, || format!("upper: exponent {}, first failure {:?}", upper.exponent, upper.first_failure))?;
    Ok(format!("lower P_k >= {:.3} k^-3 and upper P_k <= {:.3} k^-1 hold for k <= 10^4", lower.constant, upper.constant))
}

fn point_spectrum() -> Outcome {
    let shifted: MomentSequence<f64> = example_sequence(CatalogSequence::Shifted, 256).map_err(e)?;
    let b = point_spectrum_bounds(&shifted, 2.0, 0.5, None).map_err(e)?;
    ensure(b.inner == vec![0, 1], || format!("shifted inner {:?}", b.inner))?;
    let cesaro: MomentSequence<f64> = example_sequence(CatalogSequence::Cesaro, 256).map_err(e)?;
    for gamma in [1.0, 2.0, 3.0, 4.5, 7.0] {
        let b = point_spectrum_bounds(&cesaro, gamma, 1.0, None).map_err(e)?;
        let want: Vec<usize> = (0..=256).filter(|&n| (n + 1) as f64 <= gamma).collect();
        ensure(b.inner == want, || format!("cesaro gamma = {gamma}: {:?}", b.inner))?;
    }
    for gamma in [0.0, 0.5, 0.99] {
        let b = point_spectrum_bounds(&cesaro, gamma, 1.0, None).map_err(e)?;
        ensure(b.inner.is_empty(), || format!("gamma = {gamma}: {:?}", b.inner))?;
    }
    Ok("shifted inner {0, 1}; cesaro inner {n : n + 1 <= gamma} for 5 values; empty for gamma < 1".into())
}

fn korenblum() -> Outcome {
    let f = TruncatedSeries::new((0..=4096).map(|n| binom(n, 5)).collect()).map_err(e)?;
    let rep = korenblum_membership(&f, 10).map_err(e)?;
    let k = match rep.verdict {
        KorenblumVerdict::Member(k) if k <= 6 => k,
        other => return Err(format!("binom(n, 5): {other:?}")),
    };
    for p in [0.3, 0.5, 1.0, 2.0] {
        let seq: MomentSequence<f64> = example_sequence(CatalogSequence::Power { p }, 4096).map_err(e)?;
        let v = korenblum_spectral_check(&seq, p).map_err(e)?.verdict;
        ensure(v == Verdict::Pass, || format!("power({p}) at s = p: {v:?}"))?;
    }
    let geo: MomentSequence<f64> = example_sequence(CatalogSequence::Geometric { a: 0.5 }, 4096).map_err(e)?;
    for s in [1.0, 5.0, 20.0] {
        let v = korenblum_spectral_check(&geo, s).map_err(e)?.verdict;
        ensure(v == Verdict::Fail, || format!("geometric(1/2) at s = {s}: {v:?}"))?;
    }
    Ok(format!("binom(n, 5) member of A^-{k}; power(p) passes at s = p; geometric(1/2) fails"))
}

fn expdensity_trend() -> Outcome {
    let m = Measure::expgap(1.0, 1.0).map_err(e)?;
    let log_ratio = |n: usize| -> Result<f64, String> { Ok((m.moment(n).map_err(e)? / expdensity_asymptotic(1.0, 1.0, n as f64)).ln()) };
    let ns = [128usize, 256, 512, 1024];
    let diffs = ns.iter().map(|&n| Ok((log_ratio(2 * n)? - log_ratio(n)?).abs())).collect::<Result<Vec<f64>, String>>()?;
    ensure(diffs.windows(2).all(|w| w[1] < w[0]), || format!("differences not decreasing: {diffs:?}"))?;
    Ok(format!("|log ratio_2n - log ratio_n| = {}", diffs.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", ")))
}

fn representation() -> Outcome {
    let series = [SeriesSpec::Ones, SeriesSpec::Binomial { gamma: 2.0 }, SeriesSpec::Monomial { n: 7 }];
    let points = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.9, 0.0), Complex64::new(0.5, 0.3)];
    let mut worst = 0.0f64;
    let mut cases = 0;
    for entry in catalog() {
        for s in &series {
            let f = s.build(4096).map_err(e)?;
            for &z in &points {
                let c = representation_consistency(&entry.measure, &f, z, 4096).map_err(e)?;
                ensure(c.residual <= 1e-6, || format!("{} {s} z = {z}: residual {:e}", entry.label, c.residual))?;
                worst = worst.max(c.residual);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, max residual {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("moment exactness", moment_exactness),
        ("moment structure", moment_structure),
        ("hausdorff catalog", hausdorff_catalog),
        ("leibniz product", leibniz_identity),
        ("classical eigenfunctions", classical_eigen),
        ("resolvent and inverse round trips", round_trips),
        ("continuity and compactness thresholds", continuity_compactness),
        ("bounded-function criterion", hinfty_coherence),
        ("product bounds", product_bounds),
        ("point-spectrum bracket", point_spectrum),
        ("korenblum checks", korenblum),
        ("exponential-density trend", expdensity_trend),
        ("representation consistency", representation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[{:>2}] PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:>2}] FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
