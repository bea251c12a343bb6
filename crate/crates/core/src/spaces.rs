//! Truncated power series, standard weights and weighted sup-norms.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::Coefficient;
use crate::trend::{self, Trend, TrendPolicy};

/// Coefficients `(c_0, …, c_N)` of a power series.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coefficients", "a series needs at least one coefficient"));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite_value()) {
            return Err(invalid("coefficients", format!("coefficient {i} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: C) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `Σ_{n≤N} z^n`, the truncation of `1/(1-z)`.
    pub fn ones(degree: usize) -> Self {
        Self { coeffs: vec![C::one(); degree + 1] }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[n] = C::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, k: &C) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    /// Keeps degrees `0..=degree`, padding with zeros when needed.
    pub fn resized(&self, degree: usize) -> Self {
        Self { coeffs: (0..=degree).map(|n| self.coeff(n)).collect() }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_complex(&self) -> TruncatedSeries<Complex64> {
        self.map(Coefficient::to_c64)
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(Coefficient::modulus).fold(0.0, f64::max)
    }
}

impl<C: Coefficient> Add for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn add(self, rhs: Self) -> TruncatedSeries<C> {
        let d = self.degree().max(rhs.degree());
        TruncatedSeries { coeffs: (0..=d).map(|n| self.coeff(n) + rhs.coeff(n)).collect() }
    }
}

impl<C: Coefficient> Sub for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn sub(self, rhs: Self) -> TruncatedSeries<C> {
        let d = self.degree().max(rhs.degree());
        TruncatedSeries { coeffs: (0..=d).map(|n| self.coeff(n) - rhs.coeff(n)).collect() }
    }
}

/// Coefficients of `1/(1-z)^γ` up to `degree`, from
/// `a_{k+1} = a_k (k+γ)/(k+1)`.
pub fn binomial_series(gamma: f64, degree: usize) -> Result<TruncatedSeries<f64>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be positive")));
    }
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut a = 1.0f64;
    coeffs.push(a);
    for k in 0..degree {
        a *= (k as f64 + gamma) / (k as f64 + 1.0);
        if !a.is_finite() {
            return Err(Error::Overflow { index: k + 1, log_magnitude: f64::INFINITY });
        }
        coeffs.push(a);
    }
    TruncatedSeries::new(coeffs)
}

/// `v_γ(r) = (1 - r)^γ`; `γ = 0` is the constant weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StandardWeight {
    gamma: f64,
}

impl StandardWeight {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("{gamma} must be nonnegative")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.gamma == 0.0 {
            1.0
        } else {
            (1.0 - r).powf(self.gamma)
        }
    }
}

/// Strictly increasing radii in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    points: Vec<f64>,
}

impl RadialGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("grid", "radial grid is empty"));
        }
        if let Some(&r) = points.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return Err(invalid("grid", format!("radius {r} outside [0, 1)")));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("grid", "radii must be strictly increasing"));
        }
        Ok(Self { points })
    }

    /// `r_j = 1 - 2^{-j/4}`, `j = 0..=levels`.
    pub fn geometric(levels: u32) -> Self {
        Self { points: (0..=levels).map(|j| 1.0 - 2f64.powf(-(j as f64) / 4.0)).collect() }
    }

    /// `points` radii with `ln(1 - r)` uniform between `0` and `ln(min_gap)`.
    pub fn log_gap(points: usize, min_gap: f64) -> Result<Self> {
        if points < 2 || !(min_gap > 0.0 && min_gap < 1.0) {
            return Err(invalid("grid", "log-gap grid needs at least two points and 0 < min_gap < 1"));
        }
        let l = min_gap.ln();
        let pts = (0..points).map(|j| 1.0 - (l * j as f64 / (points - 1) as f64).exp()).collect();
        Self::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::geometric(120)
    }
}

/// `Σ c_n z^n` by Horner's rule.
pub fn evaluate<C: Coefficient>(f: &TruncatedSeries<C>, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(invalid("z", format!("|z| = {} is not below 1", z.norm())));
    }
    Ok(horner(f.coeffs(), z))
}

pub(crate) fn horner<C: Coefficient>(coeffs: &[C], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
}

/// `sup_{0≤r<1} r^n (1-r)^γ = γ^γ n^n / (n+γ)^{n+γ}`, evaluated in log-space.
pub fn monomial_norm(gamma: f64, n: usize) -> Result<f64> {
    Ok(log_monomial_norm(gamma, n)?.exp())
}

pub fn log_monomial_norm(gamma: f64, n: usize) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be positive")));
    }
    let nf = n as f64;
    let s = nf + gamma;
    let n_part = if n == 0 { 0.0 } else { nf * (nf / s).ln() };
    Ok(gamma * (gamma / s).ln() + n_part)
}

/// `max_r (1-r)^γ Σ |c_n| r^n` over the grid.
pub fn weighted_sup_norm<C: Coefficient>(f: &TruncatedSeries<C>, gamma: f64, grid: &RadialGrid) -> Result<f64> {
    let w = StandardWeight::new(gamma)?;
    let moduli: Vec<f64> = f.coeffs().iter().map(Coefficient::modulus).collect();
    let mut best = 0.0f64;
    for &r in grid.points() {
        let s = moduli.iter().rev().fold(0.0, |acc, m| acc * r + m);
        best = best.max(w.eval(r) * s);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "k", rename_all = "snake_case")]
pub enum KorenblumVerdict {
    Member(u32),
    NotMember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KorenblumReport {
    pub verdict: KorenblumVerdict,
    /// `(n, |c_n| / (n+k)^k)` on the dyadic ladder for the deciding `k`.
    pub evidence: Vec<(f64, f64)>,
}

/// Smallest `k ≤ k_max` with `|c_n| / (n+k)^k` stable on the dyadic ladder.
pub fn korenblum_membership<C: Coefficient>(f: &TruncatedSeries<C>, k_max: u32) -> Result<KorenblumReport> {
    if f.degree() < 64 {
        return Err(invalid("N", format!("membership needs degree >= 64, got {}", f.degree())));
    }
    let ladder = trend::dyadic_ladder(f.degree());
    let policy = TrendPolicy::default();
    let mut last = Vec::new();
    let mut last_trend = Trend::Inconclusive;
    for k in 0..=k_max {
        let kf = k as f64;
        let evidence: Vec<(f64, f64)> = ladder
            .iter()
            .map(|&n| {
                let m = f.coeffs()[n].modulus();
                let q = if m == 0.0 { 0.0 } else { (m.ln() - kf * (n as f64 + kf).ln()).exp() };
                (n as f64, q)
            })
            .collect();
        let samples: Vec<(f64, f64)> = evidence.iter().map(|&(n, q)| (n.log2(), q)).collect();
        let (t, _) = trend::classify(&samples, &policy);
        if matches!(t, Trend::Bounded | Trend::Vanishing) {
            return Ok(KorenblumReport { verdict: KorenblumVerdict::Member(k), evidence });
        }
        last = evidence;
        last_trend = t;
    }
    let verdict = if last_trend == Trend::Growing { KorenblumVerdict::NotMember } else { KorenblumVerdict::Inconclusive };
    Ok(KorenblumReport { verdict, evidence: last })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_examples() {
        let ones = TruncatedSeries::<f64>::ones(50);
        assert_eq!(evaluate(&ones, Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        let ones = TruncatedSeries::<f64>::ones(200);
        assert!((evaluate(&ones, Complex64::new(0.5, 0.0)).unwrap().re - 2.0).abs() < 1e-12);
        let id = TruncatedSeries::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(evaluate(&id, Complex64::new(0.3, 0.4)).unwrap(), Complex64::new(0.3, 0.4));
        assert!(evaluate(&id, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn monomial_norm_examples() {
        assert!((monomial_norm(1.0, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((monomial_norm(2.0, 2).unwrap() - 0.0625).abs() < 1e-15);
        assert!((monomial_norm(1.0, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!(monomial_norm(0.0, 3).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        let g = RadialGrid::default();
        let c = TruncatedSeries::constant(Complex64::new(-3.0, 4.0));
        assert_eq!(weighted_sup_norm(&c, 2.0, &g).unwrap(), 5.0);
        let ones = TruncatedSeries::<f64>::ones(2000);
        let grid = RadialGrid::geometric(64);
        assert!((weighted_sup_norm(&ones, 1.0, &grid).unwrap() - 1.0).abs() < 1e-3);
        let z5 = TruncatedSeries::<f64>::monomial(5);
        let dense = RadialGrid::log_gap(10_000, 1e-8).unwrap();
        let got = weighted_sup_norm(&z5, 2.0, &dense).unwrap();
        assert!((got / monomial_norm(2.0, 5).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn binomial_coefficients() {
        let b = binomial_series(2.0, 10).unwrap();
        for (k, c) in b.coeffs().iter().enumerate() {
            assert!((c - (k as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn korenblum_examples() {
        let sq = TruncatedSeries::new((0..=512).map(|n| (n * n) as f64).collect()).unwrap();
        assert_eq!(korenblum_membership(&sq, 5).unwrap().verdict, KorenblumVerdict::Member(2));
        let exp = TruncatedSeries::new((0..=512).map(|n| 2f64.powi(n)).collect()).unwrap();
        assert_eq!(korenblum_membership(&exp, 10).unwrap().verdict, KorenblumVerdict::NotMember);
    }
}
