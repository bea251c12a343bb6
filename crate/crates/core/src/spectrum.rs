//! Eigenfunctions, inverse at zero, resolvent recursion, product bounds
//! and point-spectrum brackets.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::moments::MomentSequence;
use crate::operator::apply_cesaro;
use crate::report::Verdict;
use crate::scalar::{is_negligible, Coefficient, KahanSum, Scalar};
use crate::spaces::{self, RadialGrid, TruncatedSeries};
use crate::trend::{self, Trend, TrendPolicy};

/// `sign × exp(log_magnitude)` with a unit-modulus complex sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogSignedValue {
    pub log_magnitude: f64,
    pub phase: Complex64,
}

impl LogSignedValue {
    pub fn zero() -> Self {
        Self { log_magnitude: f64::NEG_INFINITY, phase: Complex64::new(1.0, 0.0) }
    }

    pub fn from_complex(v: Complex64) -> Self {
        let m = v.norm();
        if m == 0.0 {
            return Self::zero();
        }
        Self { log_magnitude: m.ln(), phase: v / m }
    }

    /// Reconstructed value; overflows to infinity rather than erroring.
    pub fn value(&self) -> Complex64 {
        self.phase * self.log_magnitude.exp()
    }

    /// Real sign (`±1`) when the phase is real.
    pub fn sign(&self) -> f64 {
        self.phase.re.signum()
    }
}

impl std::ops::Mul for LogSignedValue {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        Self { log_magnitude: self.log_magnitude + other.log_magnitude, phase: self.phase * other.phase }
    }
}

impl std::ops::Div for LogSignedValue {
    type Output = Self;

    fn div(self, other: Self) -> Self {
        Self { log_magnitude: self.log_magnitude - other.log_magnitude, phase: self.phase / other.phase }
    }
}

/// Eigenfunction of `C_μ` for `μ_{n0}`, normalized by `a_{n0} = 1`, up to degree `N`.
///
/// Runs `a_n = μ_n / (μ_{n0} - μ_n) · Σ_{k<n} a_k`.
pub fn eigen_coefficients<T: Scalar>(seq: &MomentSequence<T>, n0: usize, degree: usize) -> Result<TruncatedSeries<T>> {
    if n0 > degree {
        return Err(invalid("n0", format!("{n0} exceeds degree {degree}")));
    }
    if seq.degree() < degree {
        return Err(Error::LengthMismatch { expected: degree + 1, got: seq.len() });
    }
    let mu = seq.values();
    let lam = mu[n0].clone();
    let scale = lam.modulus();
    let mut out = vec![T::zero(); degree + 1];
    out[n0] = T::one();
    let mut partial = KahanSum::<T>::new();
    partial.add(T::one());
    for n in n0 + 1..=degree {
        let gap = lam.clone() - mu[n].clone();
        if gap.is_zero() || gap.is_negative() || is_negligible(&gap, scale) {
            return Err(Error::DegenerateMeasure { index: n });
        }
        let a = mu[n].clone() * partial.value() / gap;
        if !a.is_finite_value() {
            return Err(Error::Overflow { index: n, log_magnitude: f64::INFINITY });
        }
        partial.add(a.clone());
        out[n] = a;
    }
    if let Some(n) = mu[..n0].iter().position(|m| *m <= lam) {
        return Err(Error::DegenerateMeasure { index: n });
    }
    TruncatedSeries::new(out)
}

/// Closed product form `a_k = μ_k μ_{n0}^{k-n0-1} / Π_{j=n0+1}^{k} (μ_{n0} - μ_j)` in log-space.
pub fn eigen_log_coefficients(seq: &MomentSequence<f64>, n0: usize, degree: usize) -> Result<Vec<LogSignedValue>> {
    if n0 > degree {
        return Err(invalid("n0", format!("{n0} exceeds degree {degree}")));
    }
    if seq.degree() < degree {
        return Err(Error::LengthMismatch { expected: degree + 1, got: seq.len() });
    }
    let mu = seq.values();
    let lam = mu[n0];
    let mut out = vec![LogSignedValue::zero(); degree + 1];
    out[n0] = LogSignedValue { log_magnitude: 0.0, phase: Complex64::new(1.0, 0.0) };
    let log_lam = lam.ln();
    let mut log_prod = 0.0;
    let mut sign = 1.0;
    for k in n0 + 1..=degree {
        let d = lam - mu[k];
        if d == 0.0 || is_negligible(&d, lam) {
            return Err(Error::DegenerateMeasure { index: k });
        }
        log_prod += d.abs().ln();
        sign *= d.signum();
        if mu[k] == 0.0 {
            continue;
        }
        let log_a = mu[k].ln() + (k - n0 - 1) as f64 * log_lam - log_prod;
        out[k] = LogSignedValue { log_magnitude: log_a, phase: Complex64::new(sign, 0.0) };
    }
    Ok(out)
}

/// CSV with columns `k,log_magnitude,sign_or_phase`.
pub fn log_coefficients_csv(values: &[LogSignedValue]) -> String {
    let mut out = String::from("k,log_magnitude,sign_or_phase\n");
    for (k, v) in values.iter().enumerate() {
        let phase = if v.phase.im == 0.0 { format!("{}", v.phase.re) } else { format!("{}{:+}i", v.phase.re, v.phase.im) };
        out.push_str(&format!("{k},{:e},{phase}\n", v.log_magnitude));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenResidual {
    pub residual: f64,
    /// Weighted norm of the eigenfunction on the same grid.
    pub norm: f64,
}

/// `‖C_μ f - μ_{n0} f‖` on degrees `0..N-1` with the default grid.
pub fn eigen_residual(seq: &MomentSequence<f64>, n0: usize, degree: usize, gamma: f64) -> Result<EigenResidual> {
    let f = eigen_coefficients(seq, n0, degree)?;
    let grid = RadialGrid::default();
    let norm = spaces::weighted_sup_norm(&f, gamma, &grid)?;
    if degree == n0 {
        return Ok(EigenResidual { residual: 0.0, norm });
    }
    let cf = apply_cesaro(seq, &f)?;
    let lam = seq.values()[n0];
    let diff: Vec<f64> = (0..degree).map(|n| cf.coeffs()[n] - lam * f.coeffs()[n]).collect();
    let residual = spaces::weighted_sup_norm(&TruncatedSeries::new(diff)?, gamma, &grid)?;
    Ok(EigenResidual { residual, norm })
}

/// Preimage of `b` under `C_μ`: `a_n = b_n/μ_n - b_{n-1}/μ_{n-1}`.
pub fn inverse_at_zero<T, C>(seq: &MomentSequence<T>, b: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>>
where
    T: Scalar,
    C: Coefficient + From<T>,
{
    if seq.len() < b.degree() + 1 {
        return Err(Error::LengthMismatch { expected: b.degree() + 1, got: seq.len() });
    }
    let mu = seq.values();
    let mut out = Vec::with_capacity(b.degree() + 1);
    let mut prev = C::zero();
    for (n, bn) in b.coeffs().iter().enumerate() {
        if mu[n].is_zero() {
            return Err(Error::ZeroMoment { index: n });
        }
        let cur = bn.clone() / C::from(mu[n].clone());
        out.push(cur.clone() - prev);
        prev = cur;
    }
    TruncatedSeries::new(out)
}

/// `λ` together with its distance to the available moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralQuery {
    pub lambda: Complex64,
    pub distance: f64,
    pub nearest_index: usize,
    pub near_spectrum: bool,
    pub at_zero: bool,
}

/// Threshold `d(λ) < 10^-3 μ_0` for the conditioning warning.
pub const NEAR_SPECTRUM_FRACTION: f64 = 1e-3;

pub fn spectral_query<T: Scalar>(seq: &MomentSequence<T>, lambda: Complex64) -> SpectralQuery {
    let (nearest_index, distance) = seq
        .values()
        .iter()
        .enumerate()
        .map(|(i, m)| (i, (m.to_c64() - lambda).norm()))
        .fold((0, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best });
    let mu0 = seq.values()[0].to_f64_lossy();
    SpectralQuery { lambda, distance, nearest_index, near_spectrum: distance < NEAR_SPECTRUM_FRACTION * mu0, at_zero: lambda == Complex64::new(0.0, 0.0) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventSolution<C> {
    pub series: TruncatedSeries<C>,
    pub query: SpectralQuery,
    /// `max_n |Σ_{k≤n} a_k|`.
    pub max_partial_sum: f64,
    pub warning: Option<String>,
}

/// Solves `(C_μ - λI) g = b` degreewise by `a_k = (b_k - μ_k Σ_{n<k} a_n) / (μ_k - λ)`.
pub fn resolvent_solve<T, C>(seq: &MomentSequence<T>, lambda: C, b: &TruncatedSeries<C>) -> Result<ResolventSolution<C>>
where
    T: Scalar,
    C: Coefficient + From<T>,
{
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    if seq.len() < b.degree() + 1 {
        return Err(Error::LengthMismatch { expected: b.degree() + 1, got: seq.len() });
    }
    let mu = seq.values();
    let scale = lambda.modulus().max(mu[0].modulus());
    for (k, m) in mu.iter().enumerate().take(b.degree() + 1) {
        let d = C::from(m.clone()) - lambda.clone();
        if d.is_zero() || is_negligible(&d, scale) {
            return Err(Error::SingularResolvent { index: k });
        }
    }
    let query = spectral_query(&seq.truncate(b.degree() + 1)?, lambda.to_c64());
    let mut partial = KahanSum::<C>::new();
    let mut out = Vec::with_capacity(b.degree() + 1);
    let mut max_partial = 0.0f64;
    for (k, bk) in b.coeffs().iter().enumerate() {
        let mk = C::from(mu[k].clone());
        let a = (bk.clone() - mk.clone() * partial.value()) / (mk - lambda.clone());
        partial.add(a.clone());
        max_partial = max_partial.max(partial.value().modulus());
        out.push(a);
    }
    let warning = query.near_spectrum.then(|| {
        format!("lambda lies within {:.3e} of moment {}; the recursion is ill-conditioned", query.distance, query.nearest_index)
    });
    Ok(ResolventSolution { series: TruncatedSeries::new(out)?, query, max_partial_sum: max_partial, warning })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundBranch {
    pub exponent: u32,
    pub constant: f64,
    pub holds: bool,
    /// First `k` where the bound fails.
    pub first_failure: Option<usize>,
    /// `(k, log P_k + sign·e ln k)` on a dyadic ladder.
    pub evidence: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductBoundReport {
    pub precondition: Verdict,
    pub precondition_note: String,
    pub lower: Option<BoundBranch>,
    pub upper: Option<BoundBranch>,
}

/// Parameters for [`product_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductBoundQuery {
    pub lambda: Complex64,
    pub c: f64,
    pub start: usize,
    pub k_fit: usize,
    pub k_max: usize,
    /// `(a, D)` for the upper branch: real `a > μ_start` and declared `μ_j ≥ D/j`.
    pub upper: Option<(f64, f64)>,
}

/// Checks `Π_{j=n}^{k} |1 - μ_j/λ| ≥ M k^{-⌈C |Re 1/λ|⌉}` and, optionally,
/// `Π_{j=n}^{k} (1 - μ_j/a) ≤ M' k^{-⌊D/a⌋}`.
///
/// `M` is the smallest value of `P_k k^e` over `n ≤ k ≤ k_fit`, so the
/// lower bound is a genuine test only for `k > k_fit`; `M'` is the largest.
/// When the declared `D` is not attained on the prefix the upper branch uses
/// `D_eff = min_{j ≥ k_fit} j μ_j` and says so in the note; factors before
/// `k_fit` only change the constant.
pub fn product_bound_check(seq: &MomentSequence<f64>, q: &ProductBoundQuery) -> Result<ProductBoundReport> {
    if q.k_max > seq.degree() {
        return Err(Error::LengthMismatch { expected: q.k_max + 1, got: seq.len() });
    }
    if q.start > q.k_fit || q.k_fit > q.k_max {
        return Err(invalid("k_fit", "need start <= k_fit <= k_max"));
    }
    if q.lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroLambda);
    }
    let mu = seq.values();
    for (j, &m) in mu.iter().enumerate().take(q.k_max + 1).skip(q.start) {
        if Complex64::new(m, 0.0) == q.lambda {
            return Err(Error::SingularResolvent { index: j });
        }
    }
    let j_lo = q.start.max(1);
    let violation = (j_lo..=q.k_max).find(|&j| mu[j] > q.c / j as f64 * (1.0 + 1e-12));
    if let Some(j) = violation {
        return Ok(ProductBoundReport {
            precondition: Verdict::Fail,
            precondition_note: format!("μ_{j} = {:e} exceeds C/j = {:e}", mu[j], q.c / j as f64),
            lower: None,
            upper: None,
        });
    }
    let mut note = String::new();

    let inv = q.lambda.inv();
    let e_low = (q.c * inv.re.abs() - 1e-9).ceil().max(0.0) as u32;
    let log_p: Vec<f64> = prefix_log_products(mu, q.start, q.k_max, |m| (Complex64::new(1.0, 0.0) - inv * m).norm());
    let lower = Some(fit_branch(&log_p, q.start, q.k_fit, e_low, true));

    let upper = match q.upper {
        None => None,
        Some((a, d)) => {
            if !(a > mu[q.start]) {
                return Err(invalid("a", format!("{a} must exceed μ_{} = {}", q.start, mu[q.start])));
            }
            let d_eff = (q.k_fit.max(1)..=q.k_max).map(|j| j as f64 * mu[j]).fold(f64::INFINITY, f64::min);
            let d_used = if d_eff + 1e-12 < d {
                note = format!("declared D = {d} is not attained (min j μ_j = {d_eff:.6}); using D_eff");
                d_eff
            } else {
                d
            };
            let e_up = (d_used / a + 1e-9).floor().max(0.0) as u32;
            let log_p = prefix_log_products(mu, q.start, q.k_max, |m| 1.0 - m / a);
            Some(fit_branch(&log_p, q.start, q.k_fit, e_up, false))
        }
    };
    Ok(ProductBoundReport { precondition: Verdict::Pass, precondition_note: note, lower, upper })
}

/// `log Π_{j=start}^{k} factor(μ_j)` for `k = start..=k_max`, indexed by `k - start`.
fn prefix_log_products(mu: &[f64], start: usize, k_max: usize, factor: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut acc = KahanSum::<f64>::new();
    (start..=k_max)
        .map(|j| {
            acc.add(factor(mu[j]).ln());
            acc.value()
        })
        .collect()
}

fn fit_branch(log_p: &[f64], start: usize, k_fit: usize, exponent: u32, lower: bool) -> BoundBranch {
    let e = exponent as f64;
    // log of P_k k^e, with k = 0 treated as 1
    let scaled = |k: usize| log_p[k - start] + e * (k.max(1) as f64).ln();
    let fit = (start..=k_fit).map(scaled);
    let log_m = if lower { fit.fold(f64::INFINITY, f64::min) } else { fit.fold(f64::NEG_INFINITY, f64::max) };
    let tol = 1e-12 * log_m.abs().max(1.0);
    let k_max = start + log_p.len() - 1;
    let first_failure = (start..=k_max).find(|&k| {
        let v = scaled(k);
        if lower {
            v < log_m - tol
        } else {
            v > log_m + tol
        }
    });
    let evidence = trend::dyadic_ladder(k_max).into_iter().filter(|&k| k >= start).map(|k| (k as f64, scaled(k))).collect();
    BoundBranch { exponent, constant: log_m.exp(), holds: first_failure.is_none(), first_failure, evidence }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSpectrumBracket {
    pub gamma: f64,
    /// Indices guaranteed in the point spectrum: `⌈C/μ_n⌉ ≤ γ`.
    pub inner: Vec<usize>,
    /// Indices that may be in the point spectrum: `⌊D/μ_n⌋ ≤ γ` (when `D` is given).
    pub outer: Option<Vec<usize>>,
    /// `outer \ inner`: left undetermined.
    pub undetermined: Vec<usize>,
    /// Indices of the prefix tail where `μ_n ≤ C/n` (or `μ_n ≥ D/n`) fails.
    pub violations: Vec<usize>,
}

fn snapped(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Brackets the point spectrum on `H^∞_{v_γ}` between the inner and outer index sets.
pub fn point_spectrum_bounds(seq: &MomentSequence<f64>, gamma: f64, c: f64, d: Option<f64>) -> Result<PointSpectrumBracket> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("C", format!("{c} must be positive")));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be nonnegative")));
    }
    let mu = seq.values();
    let n_max = seq.degree();
    let mut violations = Vec::new();
    let first = (n_max / 2).max(1);
    for (n, &m) in mu.iter().enumerate().skip(first) {
        let nf = n as f64;
        let upper_ok = m <= c / nf * (1.0 + 1e-12);
        let lower_ok = d.is_none_or(|d| m >= d / nf * (1.0 - 1e-12));
        if !(upper_ok && lower_ok) {
            violations.push(n);
        }
    }
    let inner: Vec<usize> = (0..=n_max).filter(|&n| mu[n] > 0.0 && snapped(c / mu[n]).ceil() <= gamma).collect();
    let outer: Option<Vec<usize>> = d.map(|d| (0..=n_max).filter(|&n| mu[n] > 0.0 && snapped(d / mu[n]).floor() <= gamma).collect());
    let undetermined = match &outer {
        Some(o) => {
            if let Some(n) = inner.iter().find(|n| !o.contains(n)) {
                return Err(Error::Precondition(format!("inner set contains {n} but the outer set does not; check D <= C")));
            }
            o.iter().copied().filter(|n| !inner.contains(n)).collect()
        }
        None => Vec::new(),
    };
    Ok(PointSpectrumBracket { gamma, inner, outer, undetermined, violations })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KorenblumSpectral {
    pub s: f64,
    pub verdict: Verdict,
    /// `(n, 1/(μ_n n^s))` on the dyadic ladder.
    pub evidence: Vec<(f64, f64)>,
}

/// Plausibility of `1/μ_n ≤ C n^s` on the prefix; pass means `0 ∉ σ(C_μ, A^{-∞})`.
pub fn korenblum_spectral_check(seq: &MomentSequence<f64>, s: f64) -> Result<KorenblumSpectral> {
    if seq.degree() < 64 {
        return Err(invalid("N", format!("needs N >= 64, got {}", seq.degree())));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(invalid("s", format!("{s} must be nonnegative")));
    }
    let evidence: Vec<(f64, f64)> = trend::dyadic_ladder(seq.degree())
        .into_iter()
        .map(|n| {
            let m = seq.values()[n];
            let q = if m == 0.0 { f64::INFINITY } else { (-m.ln() - s * (n as f64).ln()).exp() };
            (n as f64, q)
        })
        .collect();
    let samples: Vec<(f64, f64)> = evidence.iter().map(|&(n, q)| (n.log2(), q)).collect();
    let verdict = match trend::classify(&samples, &TrendPolicy::default()).0 {
        Trend::Bounded | Trend::Vanishing => Verdict::Pass,
        Trend::Growing => Verdict::Fail,
        Trend::Inconclusive => Verdict::Inconclusive,
    };
    Ok(KorenblumSpectral { s, verdict, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{example_sequence, CatalogSequence};
    use num_rational::BigRational;

    fn cesaro(n: usize) -> MomentSequence<f64> {
        example_sequence(CatalogSequence::Cesaro, n).unwrap()
    }

    #[test]
    fn eigen_examples() {
        let f = eigen_coefficients(&cesaro(10), 1, 10).unwrap();
        assert!((f.coeffs()[2] - 2.0).abs() < 1e-14);
        assert_eq!(f.coeffs()[1], 1.0);
        assert_eq!(f.coeffs()[0], 0.0);
        let g: MomentSequence<BigRational> = example_sequence(CatalogSequence::Geometric { a: 0.5 }, 4).unwrap();
        let e = eigen_coefficients(&g, 0, 4).unwrap();
        assert_eq!(e.coeffs()[2], BigRational::new(2.into(), 3.into()));
        let logs = eigen_log_coefficients(&g.to_f64(), 0, 4).unwrap();
        assert!((logs[2].value().re - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_sequences_are_rejected() {
        let s = MomentSequence::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eigen_coefficients(&s, 1, 3), Err(Error::DegenerateMeasure { .. })));
    }

    #[test]
    fn single_degree_residual_is_zero() {
        let r = eigen_residual(&cesaro(8), 8, 8, 2.0).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn inverse_examples() {
        let c = cesaro(6);
        let b = TruncatedSeries::new(c.values().to_vec()).unwrap();
        let a = inverse_at_zero(&c, &b).unwrap();
        assert_eq!(a.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let a = inverse_at_zero(&c, &TruncatedSeries::<f64>::ones(6)).unwrap();
        for v in a.coeffs() {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let a = inverse_at_zero(&c, &TruncatedSeries::<f64>::monomial(0).resized(3)).unwrap();
        assert_eq!(&a.coeffs()[..3], &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn resolvent_examples() {
        let c = cesaro(8);
        let b = TruncatedSeries::<f64>::monomial(0).resized(8);
        let g = resolvent_solve(&c, 2.0, &b).unwrap();
        assert_eq!(g.series.coeffs()[0], -1.0);
        assert!(matches!(resolvent_solve(&c, 0.25, &b), Err(Error::SingularResolvent { index: 3 })));
        assert!(matches!(resolvent_solve(&c, 0.0, &b), Err(Error::ZeroLambda)));
        let g = resolvent_solve(&c, 1e6, &b).unwrap();
        assert!((g.series.coeffs()[0] + 1e-6).abs() < 1e-11);
    }

    #[test]
    fn product_bounds() {
        let c = cesaro(10_000);
        let q = ProductBoundQuery { lambda: Complex64::new(-1.0, 0.0), c: 1.0, start: 1, k_fit: 10, k_max: 10_000, upper: None };
        assert!(product_bound_check(&c, &q).unwrap().lower.unwrap().holds);
        let q = ProductBoundQuery { lambda: Complex64::new(0.4, 0.0), upper: Some((0.6, 1.0)), ..q };
        let r = product_bound_check(&c, &q).unwrap();
        let lower = r.lower.unwrap();
        assert_eq!(lower.exponent, 3);
        assert!(lower.holds);
        let upper = r.upper.unwrap();
        assert_eq!(upper.exponent, 1);
        assert!(upper.holds);
    }

    #[test]
    fn point_spectrum_examples() {
        let s: MomentSequence<f64> = example_sequence(CatalogSequence::Shifted, 64).unwrap();
        assert_eq!(point_spectrum_bounds(&s, 2.0, 0.5, None).unwrap().inner, vec![0, 1]);
        let b = point_spectrum_bounds(&cesaro(64), 3.0, 1.0, Some(0.5)).unwrap();
        assert_eq!(b.inner, vec![0, 1, 2]);
        assert!(point_spectrum_bounds(&cesaro(64), 0.5, 1.0, None).unwrap().inner.is_empty());
    }

    #[test]
    fn korenblum_spectral_examples() {
        let p: MomentSequence<f64> = example_sequence(CatalogSequence::Power { p: 0.5 }, 4096).unwrap();
        assert_eq!(korenblum_spectral_check(&p, 0.5).unwrap().verdict, Verdict::Pass);
        let g: MomentSequence<f64> = example_sequence(CatalogSequence::Geometric { a: 0.5 }, 4096).unwrap();
        assert_eq!(korenblum_spectral_check(&g, 20.0).unwrap().verdict, Verdict::Fail);
        assert_eq!(korenblum_spectral_check(&cesaro(4096), 1.0).unwrap().verdict, Verdict::Pass);
    }
}
