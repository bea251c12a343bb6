//! Numerical integration and series summation on `[0, 1)` and `[K, ∞)`.
//!
//! Integrals over `[a, 1)` use composite Gauss–Legendre on panels that
//! shrink geometrically toward `t = 1`, where densities and kernels
//! concentrate. Each panel is refined by bisection until the split and
//! unsplit estimates agree. Positive series are summed directly and, when
//! the summand has a smooth extension to real arguments, finished with an
//! Euler–Maclaurin tail.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

const GL_ORDER: usize = 20;

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule of the given order by Newton iteration on `P_n`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<V: QuadValue>(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> V) -> V {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GL_ORDER))
}

/// Settings for [`integrate_to_one`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Index of the last geometric panel `[1 - g 2^-j, 1 - g 2^-(j+1)]`.
    pub max_panel: u32,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { max_panel: 60, rel_tol: 1e-15, max_depth: 30 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integral<V> {
    Converged { value: V, error_estimate: f64 },
    Diverged { partial: V, panels: usize },
}

impl<V: QuadValue> Integral<V> {
    pub fn value(&self) -> Option<V> {
        match self {
            Integral::Converged { value, .. } => Some(*value),
            Integral::Diverged { .. } => None,
        }
    }
}

/// Integrates `f` over `[from, 1)` on geometrically refined panels.
///
/// The integrand receives both `t` and the gap `1 - t`; the gap is exact
/// even where `t` rounds to one, so endpoint singularities stay resolved.
/// Divergence is declared when the last five panel contributions are
/// nondecreasing and non-negligible, or when they stop decaying
/// geometrically (successive ratio at least 0.999).
pub fn integrate_to_one<V: QuadValue>(
    mut f: impl FnMut(f64, f64) -> V,
    from: f64,
    opts: &QuadratureOptions,
) -> Result<Integral<V>> {
    if !(0.0..1.0).contains(&from) {
        return Err(crate::error::invalid("from", format!("lower limit {from} outside [0, 1)")));
    }
    let rule = gauss_legendre();
    let gap = 1.0 - from;
    let mut f = move |u: f64| f(1.0 - u, u);
    // panels in the gap variable u = 1 - t, ordered from t = from toward t = 1
    let panels: Vec<(f64, f64)> = (0..=opts.max_panel)
        .map(|j| (gap * 0.5f64.powi(j as i32 + 1), gap * 0.5f64.powi(j as i32)))
        .collect();

    let coarse: Vec<V> = panels.iter().map(|&(a, b)| rule.integrate(a, b, &mut f)).collect();
    let moduli: Vec<f64> = coarse.iter().map(QuadValue::magnitude).collect();
    let scale: f64 = moduli.iter().sum();
    if !scale.is_finite() {
        return Ok(Integral::Diverged { partial: V::zero(), panels: panels.len() });
    }
    if looks_divergent(&moduli, scale) {
        let partial = coarse.iter().fold(V::zero(), |acc, v| acc + *v);
        return Ok(Integral::Diverged { partial, panels: panels.len() });
    }

    let abs_tol = opts.rel_tol * scale;
    let mut total = V::zero();
    let mut err = 0.0;
    for (&(a, b), &whole) in panels.iter().zip(&coarse) {
        let (v, e) = adapt(rule, &mut f, a, b, whole, abs_tol, opts.rel_tol, opts.max_depth);
        total = total + v;
        err += e;
    }

    // Mass beyond the last panel, extrapolated from the last two contributions.
    let n = coarse.len();
    let (last, prev) = (moduli[n - 1], moduli[n - 2]);
    if last > 0.0 {
        let ratio = if prev > 0.0 { last / prev } else { 1.0 };
        if ratio >= 0.999 {
            return Ok(Integral::Diverged { partial: total, panels: n });
        }
        let factor = ratio / (1.0 - ratio);
        total = total + coarse[n - 1] * factor;
        err += last * factor * (1.0 - ratio);
        if last * factor > 1e-6 * scale {
            return Err(Error::DivergedIntegral { panels: n, partial: total.magnitude() });
        }
    }
    Ok(Integral::Converged { value: total, error_estimate: err })
}

fn looks_divergent(contributions: &[f64], scale: f64) -> bool {
    let n = contributions.len();
    if n < 6 {
        return false;
    }
    let window = &contributions[n - 6..];
    let nondecreasing = window.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let last = window[5];
    nondecreasing && last > 1e-8 * scale && last > 0.0
}

#[allow(clippy::too_many_arguments)]
fn adapt<V: QuadValue>(
    rule: &GaussLegendre,
    f: &mut impl FnMut(f64) -> V,
    a: f64,
    b: f64,
    whole: V,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
) -> (V, f64) {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    let halves = left + right;
    let diff = (halves - whole).magnitude();
    if diff <= abs_tol || diff <= rel_tol * halves.magnitude() || depth == 0 || m <= a || m >= b {
        return (halves, diff);
    }
    let (l, el) = adapt(rule, f, a, m, left, abs_tol, rel_tol, depth - 1);
    let (r, er) = adapt(rule, f, m, b, right, abs_tol, rel_tol, depth - 1);
    (l + r, el + er)
}

/// Integral of a smooth nonnegative function over `[start, ∞)`.
///
/// `decay` is the exponential rate hint (`g(x) ~ x^a e^{-decay x}`); zero
/// means purely algebraic decay, in which case panels double in length and
/// divergence is declared when contributions stop shrinking.
pub(crate) fn integrate_tail(g: &dyn Fn(f64) -> f64, start: f64, decay: f64) -> Result<Integral<f64>> {
    let rule = gauss_legendre();
    let mut x0 = start;
    let mut total = 0.0;
    let mut prev = f64::NAN;
    let mut prev_ratio = f64::NAN;
    let mut slow_steps = 0;
    let mut mut_g = |x: f64| g(x);
    for panel in 0..4000 {
        let mut h = x0.max(1.0);
        if decay > 0.0 {
            h = h.min(2.0 / decay);
        }
        let c = rule.integrate(x0, x0 + h, &mut mut_g);
        if !c.is_finite() {
            return Ok(Integral::Diverged { partial: total, panels: panel });
        }
        total += c;
        x0 += h;
        if c <= 1e-18 * total.abs() && (decay == 0.0 || x0 * decay > 1.0) {
            return Ok(Integral::Converged { value: total, error_estimate: c });
        }
        if prev.is_finite() && prev > 0.0 {
            let ratio = c / prev;
            if decay == 0.0 && ratio >= 0.999 {
                slow_steps += 1;
                if slow_steps >= 5 {
                    return Ok(Integral::Diverged { partial: total, panels: panel + 1 });
                }
            } else {
                slow_steps = 0;
            }
            // geometric remainder once the panel ratios settle below one
            if decay == 0.0 && ratio < 0.99 && (ratio - prev_ratio).abs() <= 0.05 * ratio {
                let rest = c * ratio / (1.0 - ratio);
                if rest <= 1e-10 * total.abs() {
                    return Ok(Integral::Converged { value: total + rest, error_estimate: rest });
                }
            }
            prev_ratio = ratio;
            if decay == 0.0 && panel > 400 {
                if ratio < 1.0 {
                    let rest = c * ratio / (1.0 - ratio);
                    if rest <= 1e-8 * total {
                        return Ok(Integral::Converged { value: total + rest, error_estimate: rest });
                    }
                }
                return Err(Error::TruncationNotConverged { terms: panel, tail: c });
            }
        }
        prev = c;
        if !x0.is_finite() {
            break;
        }
    }
    Err(Error::TruncationNotConverged { terms: 4000, tail: prev })
}

/// Controls for [`sum_positive_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    /// Index at which an Euler–Maclaurin tail takes over, when available.
    pub switch_at: usize,
    /// Hard cap on directly summed terms.
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self { rel_tol: 1e-16, switch_at: 8192, max_terms: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesSum {
    Converged { value: f64, terms: usize, tail_estimate: f64 },
    Diverged { partial: f64, terms: usize },
}

impl SeriesSum {
    pub fn value(&self) -> Option<f64> {
        match self {
            SeriesSum::Converged { value, .. } => Some(*value),
            SeriesSum::Diverged { .. } => None,
        }
    }
}

/// Sums `Σ_k term(k)` for a nonnegative series whose terms eventually decrease.
///
/// Direct summation stops once the terms are decreasing and the geometric
/// tail bound `t_k q / (1 - q)` drops below `rel_tol` times the sum. A zero
/// term ends the sum (moment series stay zero once they vanish). When
/// `extension` is given the remainder past `switch_at` is taken from the
/// Euler–Maclaurin formula on the extension; otherwise summation continues
/// up to `max_terms`. `term` returning `None` marks the end of the data.
pub(crate) fn sum_positive_series(
    mut term: impl FnMut(usize) -> Option<f64>,
    extension: Option<&dyn Fn(f64) -> f64>,
    decay: f64,
    policy: &SeriesPolicy,
) -> Result<SeriesSum> {
    let mut acc = crate::scalar::KahanSum::<f64>::new();
    let mut prev = f64::NAN;
    let mut tail = f64::INFINITY;
    let mut k = 0usize;
    loop {
        let Some(t) = term(k) else {
            if tail <= 1e-12 * acc.value() {
                return Ok(SeriesSum::Converged { value: acc.value(), terms: k, tail_estimate: tail });
            }
            return Err(Error::TruncationNotConverged { terms: k, tail });
        };
        if !t.is_finite() {
            return Ok(SeriesSum::Diverged { partial: acc.value(), terms: k });
        }
        acc.add(t);
        if t == 0.0 {
            return Ok(SeriesSum::Converged { value: acc.value(), terms: k + 1, tail_estimate: 0.0 });
        }
        if k >= 1 && t <= prev {
            let q = t / prev;
            tail = if q < 1.0 { t * q / (1.0 - q) } else { f64::INFINITY };
            if tail <= policy.rel_tol * acc.value() {
                return Ok(SeriesSum::Converged { value: acc.value(), terms: k + 1, tail_estimate: tail });
            }
        }
        prev = t;
        k += 1;
        if let Some(ext) = extension {
            if k == policy.switch_at {
                return euler_maclaurin_finish(acc.value(), k, ext, decay);
            }
        }
        if k >= policy.max_terms {
            return Err(Error::TruncationNotConverged { terms: k, tail });
        }
    }
}

fn euler_maclaurin_finish(head: f64, k: usize, g: &dyn Fn(f64) -> f64, decay: f64) -> Result<SeriesSum> {
    let x = k as f64;
    let h = 0.5;
    let dg = (g(x + h) - g(x - h)) / (2.0 * h);
    match integrate_tail(g, x, decay)? {
        Integral::Converged { value, error_estimate } => {
            let tail = value + 0.5 * g(x) - dg / 12.0;
            Ok(SeriesSum::Converged { value: head + tail, terms: k, tail_estimate: error_estimate.abs() + tail.abs() * 1e-12 })
        }
        Integral::Diverged { partial, .. } => Ok(SeriesSum::Diverged { partial: head + partial, terms: k }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(20);
        let wsum: f64 = rule.weights().iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // degree 39 is the limit of exactness for 20 nodes
        let v: f64 = rule.integrate(0.0, 1.0, &mut |x: f64| x.powi(39));
        assert!((v - 1.0 / 40.0).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_measure_of_unit_interval() {
        let out = integrate_to_one(|_, _| 1.0, 0.0, &QuadratureOptions::default()).unwrap();
        assert!((out.value().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reciprocal_gap_diverges() {
        let out = integrate_to_one(|_, u| 1.0 / u, 0.0, &QuadratureOptions::default()).unwrap();
        assert!(matches!(out, Integral::Diverged { .. }));
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // ∫ (1-t)^{-1/2} dt = 2
        let out = integrate_to_one(|_, u: f64| u.powf(-0.5), 0.0, &QuadratureOptions::default()).unwrap();
        assert!((out.value().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tail_from_inner_point() {
        let out = integrate_to_one(|_, _| 1.0, 0.25, &QuadratureOptions::default()).unwrap();
        assert!((out.value().unwrap() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn basel_series_with_euler_maclaurin_tail() {
        let ext = |x: f64| (x + 1.0).powi(-2);
        let s = sum_positive_series(|k| Some(ext(k as f64)), Some(&ext), 0.0, &SeriesPolicy::default()).unwrap();
        let v = s.value().unwrap();
        assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn harmonic_series_diverges() {
        let ext = |x: f64| 1.0 / (x + 1.0);
        let s = sum_positive_series(|k| Some(ext(k as f64)), Some(&ext), 0.0, &SeriesPolicy::default()).unwrap();
        assert!(matches!(s, SeriesSum::Diverged { .. }));
    }

    #[test]
    fn geometric_series_direct() {
        let s = sum_positive_series(|k| Some(0.5f64.powi(k as i32)), None, 0.0, &SeriesPolicy::default()).unwrap();
        assert!((s.value().unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn finite_data_without_convergence_is_an_error() {
        let s = sum_positive_series(|k| if k < 10 { Some(1.0 / (k as f64 + 1.0)) } else { None }, None, 0.0, &SeriesPolicy::default());
        assert!(matches!(s, Err(Error::TruncationNotConverged { .. })));
    }

    #[test]
    fn slowly_decaying_exponential_tail() {
        // Σ_k r^k with r = 1 - 2^-20 equals 2^20.
        let r: f64 = 1.0 - 2f64.powi(-20);
        let lam = -r.ln();
        let ext = move |x: f64| (-lam * x).exp();
        let s = sum_positive_series(|k| Some(r.powi(k as i32)), Some(&ext), lam, &SeriesPolicy::default()).unwrap();
        let v = s.value().unwrap();
        assert!((v / 2f64.powi(20) - 1.0).abs() < 1e-10, "{v}");
    }
}
