//! Moment sequences, finite differences and the Hausdorff moment problem.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::report::{Check, DiagnosticReport, Verdict};
use crate::scalar::Scalar;

/// Structural flags of a moment prefix, evaluated in `f64` with a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceFlags {
    pub is_decreasing: bool,
    pub is_strictly_decreasing: bool,
    pub is_log_convex: bool,
    /// `a_{N-1} / a_N`, absent when the last entries vanish.
    pub ratio_limit_estimate: Option<f64>,
}

/// A finite prefix `(a_0, …, a_N)` of a moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<T> {
    values: Vec<T>,
    flags: SequenceFlags,
}

const FLAG_RTOL: f64 = 1e-9;

impl<T: Scalar> MomentSequence<T> {
    /// Wraps nonnegative finite values. Zeros are only allowed as a trailing block.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("values", "a moment sequence needs at least one entry"));
        }
        let mut seen_zero = false;
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite_value() || v.is_negative() {
                return Err(invalid("values", format!("entry {i} is not a nonnegative finite number")));
            }
            if v.is_zero() {
                seen_zero = true;
            } else if seen_zero {
                return Err(invalid("values", format!("entry {i} is positive after a zero entry")));
            }
        }
        let flags = compute_flags(&values);
        Ok(Self { values, flags })
    }

    /// Like [`MomentSequence::new`] but allows arbitrary signs (difference inputs, crafted tests).
    pub fn from_raw(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("values", "a sequence needs at least one entry"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(invalid("values", format!("entry {i} is not finite")));
        }
        let flags = compute_flags(&values);
        Ok(Self { values, flags })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest index `N`.
    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&T> {
        self.values.get(n)
    }

    pub fn flags(&self) -> &SequenceFlags {
        &self.flags
    }

    pub fn to_f64(&self) -> MomentSequence<f64> {
        let values: Vec<f64> = self.values.iter().map(Scalar::to_f64_lossy).collect();
        let flags = compute_flags(&values);
        MomentSequence { values, flags }
    }

    /// First `len` entries.
    pub fn truncate(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.values.len() {
            return Err(Error::IndexOutOfRange { index: len.saturating_sub(1), max: self.degree() });
        }
        Self::from_raw(self.values[..len].to_vec())
    }
}

fn compute_flags<T: Scalar>(values: &[T]) -> SequenceFlags {
    let v: Vec<f64> = values.iter().map(Scalar::to_f64_lossy).collect();
    let is_decreasing = v.windows(2).all(|w| w[1] <= w[0] * (1.0 + FLAG_RTOL));
    let is_strictly_decreasing = if T::is_exact() {
        values.windows(2).all(|w| w[1] < w[0])
    } else {
        v.windows(2).all(|w| w[1] < w[0])
    };
    let is_log_convex = v.windows(3).all(|w| w[1] * w[1] <= w[0] * w[2] * (1.0 + FLAG_RTOL) + f64::MIN_POSITIVE);
    let n = v.len();
    let ratio_limit_estimate = if n >= 2 && v[n - 1] > 0.0 { Some(v[n - 2] / v[n - 1]) } else { None };
    SequenceFlags { is_decreasing, is_strictly_decreasing, is_log_convex, ratio_limit_estimate }
}

/// `Δ^j a_n`, computed from the window `a_n, …, a_{n+j}` by repeated differencing.
pub fn finite_difference<T: Scalar>(seq: &MomentSequence<T>, j: usize, n: usize) -> Result<T> {
    let end = j.checked_add(n).ok_or(Error::IndexOutOfRange { index: usize::MAX, max: seq.degree() })?;
    if end > seq.degree() {
        return Err(Error::IndexOutOfRange { index: end, max: seq.degree() });
    }
    let mut row: Vec<T> = seq.values[n..=end].to_vec();
    for _ in 0..j {
        row = row.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    }
    Ok(row.swap_remove(0))
}

/// Rows `Δ^0 … Δ^J`; row `j` has `N - j + 1` entries.
///
/// Row `j` is sign-tested against `tol_abs + 2^j ε max|a|`, the second term
/// bounding rounding in the inputs and the differencing (zero for exact types).
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceTable<T> {
    rows: Vec<Vec<T>>,
    tolerances: Vec<T>,
}

impl<T: Scalar> DifferenceTable<T> {
    pub fn build(seq: &MomentSequence<T>, max_order: usize) -> Result<Self> {
        if max_order > seq.degree() {
            return Err(Error::IndexOutOfRange { index: max_order, max: seq.degree() });
        }
        let mut rows = Vec::with_capacity(max_order + 1);
        rows.push(seq.values.clone());
        for j in 1..=max_order {
            let prev: &Vec<T> = &rows[j - 1];
            let next: Vec<T> = prev.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
            rows.push(next);
        }
        let base = T::sign_tolerance(&seq.values[0]);
        let amax = seq.values.iter().map(|v| v.abs()).fold(T::zero(), |a, b| if b > a { b } else { a });
        let eps = T::pivot_tolerance() / 4.0;
        let tolerances = (0..=max_order)
            .map(|j| {
                let rounding = T::from_f64(eps * 2f64.powi(j as i32)).unwrap_or_else(T::zero);
                base.clone() + rounding * amax.clone()
            })
            .collect();
        Ok(Self { rows, tolerances })
    }

    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, j: usize) -> Option<&[T]> {
        self.rows.get(j).map(Vec::as_slice)
    }

    pub fn get(&self, j: usize, n: usize) -> Option<&T> {
        self.rows.get(j)?.get(n)
    }

    /// Sign tolerance applied to row `j`.
    pub fn tolerance(&self, j: usize) -> Option<&T> {
        self.tolerances.get(j)
    }

    /// `(-1)^j Δ^j a_n ≥ -tol_j`.
    pub fn sign_ok(&self, j: usize, n: usize) -> Option<bool> {
        let v = self.get(j, n)?;
        let signed = if j.is_multiple_of(2) { v.clone() } else { -v.clone() };
        Some(signed >= -self.tolerances[j].clone())
    }

    /// First `(j, n)` in row-major order whose alternating sign is violated.
    pub fn first_violation(&self) -> Option<(usize, usize)> {
        (0..self.rows.len()).find_map(|j| (0..self.rows[j].len()).find(|&n| self.sign_ok(j, n) == Some(false)).map(|n| (j, n)))
    }

    /// CSV with columns `n,j,delta,sign_ok`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,j,delta,sign_ok\n");
        for (j, row) in self.rows.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                out.push_str(&format!("{n},{j},{:e},{}\n", v.to_f64_lossy(), self.sign_ok(j, n).unwrap_or(false)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum HausdorffVerdict {
    /// Alternating signs hold up to order `order`; finite-order evidence only.
    Pass { order: usize },
    Fail { j: usize, n: usize, reason: String },
    Inconclusive { reason: String },
}

impl HausdorffVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, HausdorffVerdict::Pass { .. })
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            HausdorffVerdict::Pass { .. } => Verdict::Pass,
            HausdorffVerdict::Fail { .. } => Verdict::Fail,
            HausdorffVerdict::Inconclusive { .. } => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HausdorffOutcome<T> {
    pub verdict: HausdorffVerdict,
    pub table: DifferenceTable<T>,
    /// Log-log slope of the last half of the sequence, used for the `lim = 0` test.
    pub tail_slope: f64,
}

/// Finite-order Hausdorff check with `a_0` as the declared mass.
pub fn hausdorff_check<T: Scalar>(seq: &MomentSequence<T>, max_order: usize) -> Result<HausdorffOutcome<T>> {
    hausdorff_check_with(seq, max_order, None)
}

/// Finite-order Hausdorff check. When `declared_mass` is given, `a_0` must match it.
pub fn hausdorff_check_with<T: Scalar>(seq: &MomentSequence<T>, max_order: usize, declared_mass: Option<&T>) -> Result<HausdorffOutcome<T>> {
    if 2 * max_order > seq.degree() {
        return Err(invalid("J", format!("order {max_order} exceeds N/2 = {}", seq.degree() / 2)));
    }
    let table = DifferenceTable::build(seq, max_order)?;
    let tail_slope = tail_log_slope(seq);
    if let Some(mass) = declared_mass {
        let a0 = &seq.values[0];
        let diff = (a0.clone() - mass.clone()).abs();
        if diff > T::sign_tolerance(mass) {
            let verdict = HausdorffVerdict::Fail { j: 0, n: 0, reason: format!("a_0 = {} differs from declared mass {}", a0.to_f64_lossy(), mass.to_f64_lossy()) };
            return Ok(HausdorffOutcome { verdict, table, tail_slope });
        }
    }
    if let Some((j, n)) = table.first_violation() {
        let v = table.get(j, n).map(Scalar::to_f64_lossy).unwrap_or(f64::NAN);
        let verdict = HausdorffVerdict::Fail { j, n, reason: format!("(-1)^{j} Δ^{j} a_{n} has the wrong sign (Δ = {v:e})") };
        return Ok(HausdorffOutcome { verdict, table, tail_slope });
    }
    let v: Vec<f64> = seq.values.iter().map(Scalar::to_f64_lossy).collect();
    let n = v.len();
    let q = (3 * n) / 4;
    let last_quartile_decreasing = v[q.min(n - 1)..].windows(2).all(|w| w[1] <= w[0]);
    let small = v[n - 1] < 0.05 * v[0];
    let verdict = if last_quartile_decreasing && (small || tail_slope <= -0.25) {
        HausdorffVerdict::Pass { order: max_order }
    } else {
        HausdorffVerdict::Inconclusive {
            reason: format!(
                "limit zero not evident: a_N/a_0 = {:.4}, tail log-log slope {:.3}, last quartile decreasing = {last_quartile_decreasing}",
                v[n - 1] / v[0],
                tail_slope
            ),
        }
    };
    Ok(HausdorffOutcome { verdict, table, tail_slope })
}

/// Slope of `ln a_n` against `ln(n + 1)` over the last half; `-inf` when the tail vanishes.
fn tail_log_slope<T: Scalar>(seq: &MomentSequence<T>) -> f64 {
    let v: Vec<f64> = seq.values.iter().map(Scalar::to_f64_lossy).collect();
    let n = v.len();
    if n < 4 {
        return f64::NAN;
    }
    let pts: Vec<(f64, f64)> = (n / 2..n).map(|i| (((i + 1) as f64).ln(), v[i])).collect();
    if pts.iter().any(|p| p.1 <= 0.0) {
        return f64::NEG_INFINITY;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in &pts {
        sxy += (x - mx) * (y.ln() - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Structural diagnostics: monotonicity, strictness, ratio monotonicity, log-convexity, ratio limit.
pub fn structural_check<T: Scalar>(seq: &MomentSequence<T>) -> Result<DiagnosticReport> {
    if seq.degree() < 3 {
        return Err(invalid("N", format!("structural check needs N >= 3, got {}", seq.degree())));
    }
    let v: Vec<f64> = seq.values.iter().map(Scalar::to_f64_lossy).collect();
    let n = v.len();
    let mut report = DiagnosticReport::new("structural");

    let first_increase = (1..n).find(|&i| v[i] > v[i - 1] * (1.0 + FLAG_RTOL));
    report.push(match first_increase {
        None => Check::new("nonincreasing", Verdict::Pass),
        Some(i) => Check::new("nonincreasing", Verdict::Fail).with_value(i as f64).with_note(format!("a_{i} > a_{}", i - 1)),
    });

    let first_flat = if T::is_exact() {
        (1..n).find(|&i| seq.values[i] >= seq.values[i - 1])
    } else {
        (1..n).find(|&i| v[i] >= v[i - 1])
    };
    let zero_tail = n > 1 && v[1..].iter().all(|&x| x == 0.0);
    report.push(match first_flat {
        None => Check::new("strict_decrease", Verdict::Pass),
        Some(i) if zero_tail => Check::new("strict_decrease", Verdict::Fail)
            .with_value(i as f64)
            .with_note("moments vanish from index 1: consistent with a measure carried by {0}, i.e. μ((0,1)) = 0"),
        Some(i) => Check::new("strict_decrease", Verdict::Fail).with_value(i as f64).with_note(format!("a_{i} >= a_{}", i - 1)),
    });

    let positive = v.iter().take_while(|&&x| x > 0.0).count();
    if positive < n {
        let note = format!("entry {positive} vanishes; ratios undefined");
        report.push(Check::new("ratio_monotone", Verdict::Skipped).with_note(note.clone()));
        report.push(Check::new("log_convex", Verdict::Skipped).with_note(note.clone()));
        report.push(Check::new("ratio_limit", Verdict::Skipped).with_note(note));
        return Ok(report);
    }

    let ratios: Vec<f64> = v.windows(2).map(|w| w[0] / w[1]).collect();
    let below_one = ratios.iter().position(|&r| r < 1.0 - FLAG_RTOL);
    let increase = (1..ratios.len()).find(|&i| ratios[i] > ratios[i - 1] * (1.0 + FLAG_RTOL));
    let evidence: Vec<(f64, f64)> = ratios.iter().enumerate().map(|(i, &r)| (i as f64, r)).collect();
    report.push(match (below_one, increase) {
        (None, None) => Check::new("ratio_monotone", Verdict::Pass),
        (Some(i), _) => Check::new("ratio_monotone", Verdict::Fail).with_value(i as f64).with_note(format!("a_{i}/a_{} < 1", i + 1)),
        (None, Some(i)) => Check::new("ratio_monotone", Verdict::Fail).with_value(i as f64).with_note(format!("ratio increases at index {i}")),
    });

    let lc = (1..n - 1).find(|&i| v[i] * v[i] > v[i - 1] * v[i + 1] * (1.0 + FLAG_RTOL));
    report.push(match lc {
        None => Check::new("log_convex", Verdict::Pass),
        Some(i) => Check::new("log_convex", Verdict::Fail).with_value(i as f64).with_note(format!("a_{i}^2 > a_{} a_{}", i - 1, i + 1)),
    });

    let q = (3 * ratios.len()) / 4;
    let quartile = evidence[q..].to_vec();
    let estimate = *ratios.last().unwrap_or(&f64::NAN);
    report.push(Check::new("ratio_limit", Verdict::Pass).with_value(estimate).with_evidence(quartile));
    Ok(report)
}

/// Entrywise product of two sequences of equal length.
pub fn leibniz_product<T: Scalar>(a: &MomentSequence<T>, b: &MomentSequence<T>) -> Result<MomentSequence<T>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    if !b.flags.is_decreasing {
        return Err(Error::Precondition("the second factor must be nonincreasing".into()));
    }
    let values: Vec<T> = a.values.iter().zip(&b.values).map(|(x, y)| x.clone() * y.clone()).collect();
    MomentSequence::from_raw(values)
}

/// Closed-form sequences from the example catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogSequence {
    /// `a^n`, `0 < a < 1`
    Geometric { a: f64 },
    /// `(n + 1)^{-p}`
    Power { p: f64 },
    /// `(n + 2) / (2 (n + 1)^2)`
    Shifted,
    /// `1 / (n + 1)`
    Cesaro,
    /// `n^{-(β+2)/(2(β+1))} exp(-B n^{β/(β+1)})`, evaluated at `max(n, 1)`.
    ExpDensityAsymptotic { alpha: f64, beta: f64 },
}

/// `B = α^{1/(β+1)} (β^{1/(β+1)} + β^{-1/(β+1)})`.
pub fn expdensity_constant(alpha: f64, beta: f64) -> f64 {
    let e = 1.0 / (beta + 1.0);
    alpha.powf(e) * (beta.powf(e) + beta.powf(-e))
}

/// Asymptotic value of the `n`-th moment of `exp(-α/(1-t)^β) dt`.
pub fn expdensity_asymptotic(alpha: f64, beta: f64, n: f64) -> f64 {
    let b = expdensity_constant(alpha, beta);
    n.powf(-(beta + 2.0) / (2.0 * (beta + 1.0))) * (-b * n.powf(beta / (beta + 1.0))).exp()
}

pub fn example_sequence<T: Scalar>(name: CatalogSequence, n_max: usize) -> Result<MomentSequence<T>> {
    let exact = |what: &str| Error::ExactUnsupported { what: what.to_string() };
    let values: Vec<T> = match name {
        CatalogSequence::Geometric { a } => {
            if !(a > 0.0 && a < 1.0) {
                return Err(invalid("a", format!("{a} outside (0, 1)")));
            }
            let a = T::from_f64(a).ok_or_else(|| exact("geometric ratio"))?;
            let mut out = Vec::with_capacity(n_max + 1);
            let mut cur = T::one();
            for _ in 0..=n_max {
                out.push(cur.clone());
                cur = cur * a.clone();
            }
            out
        }
        CatalogSequence::Power { p } => {
            if !(p > 0.0 && p.is_finite()) {
                return Err(invalid("p", format!("{p} must be positive")));
            }
            (0..=n_max)
                .map(|n| T::from_usize(n + 1).and_then(|x| x.powf_checked(-p)).ok_or_else(|| exact("non-integer power moments")))
                .collect::<Result<_>>()?
        }
        CatalogSequence::Shifted => (0..=n_max as i64).map(|n| T::from_ratio(n + 2, 2 * (n + 1) * (n + 1))).collect(),
        CatalogSequence::Cesaro => (0..=n_max as i64).map(|n| T::from_ratio(1, n + 1)).collect(),
        CatalogSequence::ExpDensityAsymptotic { alpha, beta } => {
            if !(alpha > 0.0 && beta > 0.0) {
                return Err(invalid("alpha/beta", "both must be positive"));
            }
            if T::is_exact() {
                return Err(exact("the exponential-density asymptotic"));
            }
            (0..=n_max)
                .map(|n| T::from_f64(expdensity_asymptotic(alpha, beta, n.max(1) as f64)).ok_or_else(|| exact("conversion")))
                .collect::<Result<_>>()?
        }
    };
    MomentSequence::new(values)
}
