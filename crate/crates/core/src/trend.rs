//! Finite-data trend classification.
//!
//! Asymptotic statements (`O(1)`, `o(1)`, unbounded) are judged from a
//! ladder of samples by comparing maxima over three index windows and the
//! least-squares slope of `log2 value` against a log-scale abscissa over
//! the tail window.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendPolicy {
    pub slack: f64,
    pub vanish_frac: f64,
    pub growth_factor: f64,
    pub slope_tol: f64,
}

impl Default for TrendPolicy {
    fn default() -> Self {
        Self { slack: 0.25, vanish_frac: 0.1, growth_factor: 4.0, slope_tol: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Vanishing,
    Bounded,
    Growing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendStats {
    pub early_max: f64,
    pub mid_max: f64,
    pub tail_max: f64,
    /// Least-squares slope of `log2 value` over the tail window (NaN with zeros).
    pub tail_slope: f64,
}

/// Index windows `(early, mid, tail)` over positions `0..=p`.
pub fn windows(p: usize) -> [(usize, usize); 3] {
    let early = (p / 16, p.div_ceil(8));
    let mid = (p / 4, p.div_ceil(2));
    let tail = (p.div_ceil(2), p);
    [early, mid, tail]
}

/// Classifies samples `(scale, value)` where `scale` is a log2-type abscissa
/// (e.g. `log2 n` or `-log2(1 - r)`) and values are nonnegative.
pub fn classify(samples: &[(f64, f64)], policy: &TrendPolicy) -> (Trend, TrendStats) {
    let nan = TrendStats { early_max: f64::NAN, mid_max: f64::NAN, tail_max: f64::NAN, tail_slope: f64::NAN };
    if samples.len() < 4 || samples.iter().any(|&(_, v)| v.is_nan() || v < 0.0) {
        return (Trend::Inconclusive, nan);
    }
    let p = samples.len() - 1;
    let [early, mid, tail] = windows(p);
    let wmax = |(a, b): (usize, usize)| samples[a..=b].iter().map(|s| s.1).fold(0.0, f64::max);
    let stats = TrendStats { early_max: wmax(early), mid_max: wmax(mid), tail_max: wmax(tail), tail_slope: log_slope(&samples[tail.0..=tail.1]) };
    let TrendStats { early_max, mid_max, tail_max, tail_slope } = stats;

    if tail_max.is_infinite() {
        return (Trend::Growing, stats);
    }
    if tail_max == 0.0
        || tail_max <= policy.vanish_frac * early_max
        || (tail_slope <= -policy.slope_tol && tail_max < mid_max)
    {
        return (Trend::Vanishing, stats);
    }
    if (tail_slope >= policy.slope_tol && tail_max > (1.0 + policy.slack) * mid_max)
        || (early_max > 0.0 && tail_max >= policy.growth_factor * early_max)
    {
        return (Trend::Growing, stats);
    }
    if tail_max <= (1.0 + policy.slack) * mid_max {
        return (Trend::Bounded, stats);
    }
    (Trend::Inconclusive, stats)
}

fn log_slope(samples: &[(f64, f64)]) -> f64 {
    if samples.len() < 2 || samples.iter().any(|&(_, v)| v <= 0.0 || !v.is_finite()) {
        return f64::NAN;
    }
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let my = samples.iter().map(|s| s.1.log2()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, v) in samples {
        sxy += (x - mx) * (v.log2() - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

/// Dyadic index ladder `1, 2, 4, …` up to `n_max`, with `n_max` appended.
pub fn dyadic_ladder(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 1usize;
    while n <= n_max {
        out.push(n);
        n = match n.checked_mul(2) {
            Some(v) => v,
            None => break,
        };
    }
    if out.last() != Some(&n_max) && n_max >= 1 {
        out.push(n_max);
    }
    out
}
