//! The operator `C_μ` in coefficient and integral form, and the
//! continuity, compactness and summability functionals built on it.

use std::cell::Cell;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::measures::{self, KernelIntegral, KernelSpec, Measure, MomentRule};
use crate::moments::MomentSequence;
use crate::quadrature::{self, Integral, QuadratureOptions, SeriesPolicy, SeriesSum};
use crate::scalar::{Coefficient, KahanSum, Scalar};
use crate::spaces::{self, RadialGrid, TruncatedSeries};
use crate::trend::{self, Trend, TrendPolicy, TrendStats};

const CONDITIONING_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct CesaroOutput<C> {
    pub series: TruncatedSeries<C>,
    /// Set when some partial sum cancels by more than twelve orders of magnitude.
    pub conditioning_warning: Option<String>,
}

/// `C_μ f`: coefficient `n` is `μ_n Σ_{k≤n} c_k`.
pub fn apply_cesaro<T, C>(seq: &MomentSequence<T>, f: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>>
where
    T: Scalar,
    C: Coefficient + From<T>,
{
    apply_cesaro_checked(seq, f).map(|o| o.series)
}

/// [`apply_cesaro`] with the conditioning diagnostic.
pub fn apply_cesaro_checked<T, C>(seq: &MomentSequence<T>, f: &TruncatedSeries<C>) -> Result<CesaroOutput<C>>
where
    T: Scalar,
    C: Coefficient + From<T>,
{
    if seq.len() < f.degree() + 1 {
        return Err(Error::LengthMismatch { expected: f.degree() + 1, got: seq.len() });
    }
    let mut partial = KahanSum::<C>::new();
    let mut abs_sum = 0.0f64;
    let mut worst = (0usize, 1.0f64);
    let mut out = Vec::with_capacity(f.degree() + 1);
    for (n, c) in f.coeffs().iter().enumerate() {
        partial.add(c.clone());
        abs_sum += c.modulus();
        let s = partial.value();
        let m = s.modulus();
        if m > 0.0 && !C::is_exact() {
            let ratio = abs_sum / m;
            if ratio > worst.1 {
                worst = (n, ratio);
            }
        }
        out.push(C::from(seq.values()[n].clone()) * s);
    }
    let conditioning_warning = (worst.1 > CONDITIONING_LIMIT)
        .then(|| format!("partial sum {} cancels: Σ|c_k| / |Σ c_k| = {:.3e}", worst.0, worst.1));
    Ok(CesaroOutput { series: TruncatedSeries::new(out)?, conditioning_warning })
}

/// `∫ f(tz) / (1 - tz) dμ(t)`.
pub fn apply_integral<C: Coefficient>(m: &Measure, f: &TruncatedSeries<C>, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(invalid("z", format!("|z| = {} is not below 1", z.norm())));
    }
    if z.is_zero() {
        return Ok(f.coeff(0).to_c64() * m.moment(0)?);
    }
    let coeffs = f.coeffs();
    let integrand = |t: f64| spaces::horner(coeffs, z * t) / (Complex64::new(1.0, 0.0) - z * t);
    match m {
        Measure::Atomic(atoms) => {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for a in atoms {
                let v = integrand(a.location) * a.mass;
                re.add(v.re);
                im.add(v.im);
            }
            Ok(Complex64::new(re.value(), im.value()))
        }
        Measure::Density { kind, .. } => {
            let bad = Cell::new(false);
            let out = quadrature::integrate_to_one(
                |t, gap| {
                    let rho = kind.eval(t, gap);
                    if !(rho.is_finite() && rho >= 0.0) {
                        bad.set(true);
                        return Complex64::zero();
                    }
                    if rho == 0.0 {
                        return Complex64::zero();
                    }
                    integrand(t) * rho
                },
                0.0,
                &QuadratureOptions::default(),
            )?;
            if bad.get() {
                return Err(invalid("density", "evaluator returned a negative or non-finite value"));
            }
            match out {
                Integral::Converged { value, .. } => Ok(value),
                Integral::Diverged { partial, panels } => Err(Error::DivergedIntegral { panels, partial: partial.norm() }),
            }
        }
        Measure::MomentDefined { .. } => moment_series_integral(m, f, z),
    }
}

/// `Σ_n μ_n S_n z^n` with `S_n` the partial sums of `f`, summed until the
/// geometric tail bound `μ_n |S| |z|^{n+1} / (1 - |z|)` is negligible.
fn moment_series_integral<C: Coefficient>(m: &Measure, f: &TruncatedSeries<C>, z: Complex64) -> Result<Complex64> {
    let policy = SeriesPolicy::default();
    let rho = z.norm();
    let mut s = Complex64::zero();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 0..policy.max_terms {
        let mu = match m.moment(n) {
            Ok(v) => v,
            Err(Error::IndexOutOfRange { .. }) => {
                return Err(Error::TruncationNotConverged { terms: n, tail: s.norm() * rho.powi(n as i32) / (1.0 - rho) });
            }
            Err(e) => return Err(e),
        };
        if n <= f.degree() {
            s += f.coeff(n).to_c64();
        }
        let term = zn * s * mu;
        re.add(term.re);
        im.add(term.im);
        if n >= f.degree() {
            let bound = mu * s.norm() * rho.powi(n as i32 + 1) / (1.0 - rho);
            let total = Complex64::new(re.value(), im.value()).norm();
            if bound <= policy.rel_tol * total || mu == 0.0 || s.is_zero() {
                return Ok(Complex64::new(re.value(), im.value()));
            }
        }
        zn *= z;
    }
    Err(Error::TruncationNotConverged { terms: policy.max_terms, tail: f64::NAN })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Consistency {
    pub residual: f64,
    /// `μ_N |S_N| |z|^{N+1} / (1 - |z|)`, bounding the coefficient-side truncation.
    pub tail_bound: f64,
    pub integral: Complex64,
    pub coefficient: Complex64,
}

/// Compares the integral form against the coefficient form truncated at `N`.
pub fn representation_consistency<C: Coefficient>(m: &Measure, f: &TruncatedSeries<C>, z: Complex64, n_max: usize) -> Result<Consistency> {
    if !(z.norm() <= 0.99 + 1e-15) {
        return Err(invalid("z", format!("|z| = {} exceeds 0.99", z.norm())));
    }
    let n_max = n_max.max(f.degree());
    let seq = m.moments_upto(n_max)?;
    let g = f.to_complex().resized(n_max);
    let cf = apply_cesaro(&seq, &g)?;
    let coefficient = spaces::evaluate(&cf, z)?;
    let integral = apply_integral(m, f, z)?;
    let s_n: Complex64 = f.coeffs().iter().map(Coefficient::to_c64).sum();
    let rho = z.norm();
    let tail_bound = seq.values()[n_max] * s_n.norm() * rho.powi(n_max as i32 + 1) / (1.0 - rho);
    Ok(Consistency { residual: (integral - coefficient).norm(), tail_bound, integral, coefficient })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub r: f64,
    /// `None` where the integral diverges.
    pub integral: Option<f64>,
    pub prefactor: f64,
    pub product: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityVerdict {
    Bounded,
    Growing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactnessVerdict {
    ToZero,
    Positive,
    Growing,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub gamma: f64,
    pub delta: f64,
    pub points: Vec<ProfilePoint>,
    pub sup: f64,
    pub trend: Trend,
    pub stats: TrendStats,
}

impl Profile {
    pub fn continuity(&self) -> ContinuityVerdict {
        match self.trend {
            Trend::Bounded | Trend::Vanishing => ContinuityVerdict::Bounded,
            Trend::Growing => ContinuityVerdict::Growing,
            Trend::Inconclusive => ContinuityVerdict::Inconclusive,
        }
    }

    pub fn compactness(&self) -> CompactnessVerdict {
        match self.trend {
            Trend::Vanishing => CompactnessVerdict::ToZero,
            Trend::Bounded => CompactnessVerdict::Positive,
            Trend::Growing => CompactnessVerdict::Growing,
            Trend::Inconclusive => CompactnessVerdict::Inconclusive,
        }
    }

    /// Radii where the integral diverged.
    pub fn divergent_points(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.integral.is_none()).map(|p| p.r).collect()
    }

    /// CSV with columns `r,integral,prefactor,product`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,integral,prefactor,product\n");
        for p in &self.points {
            let integral = p.integral.map_or_else(|| "inf".to_string(), |v| format!("{v:e}"));
            out.push_str(&format!("{:e},{integral},{:e},{:e}\n", p.r, p.prefactor, p.product));
        }
        out
    }
}

fn build_profile(points: Vec<ProfilePoint>, gamma: f64, delta: f64) -> Profile {
    let samples: Vec<(f64, f64)> = points.iter().map(|p| (-(1.0 - p.r).log2(), p.product)).collect();
    let (trend, stats) = trend::classify(&samples, &TrendPolicy::default());
    let sup = points.iter().map(|p| p.product).fold(0.0, f64::max);
    Profile { gamma, delta, points, sup, trend, stats }
}

/// `r ↦ (1-r)^{γ+δ} ∫ (1-tr)^{-(γ+1)} dμ(t)` over the grid.
pub fn continuity_functional(m: &Measure, gamma: f64, delta: f64, grid: &RadialGrid) -> Result<Profile> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be positive")));
    }
    if !(delta > -gamma && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} outside (-gamma, 1) = ({}, 1)", -gamma)));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &r in grid.points() {
        let integral = m.integrate_kernel(&KernelSpec::PowerReciprocal { r, p: gamma + 1.0 })?;
        let prefactor = (1.0 - r).powf(gamma + delta);
        let integral = integral.real();
        let product = integral.map_or(f64::INFINITY, |v| prefactor * v);
        points.push(ProfilePoint { r, integral, prefactor, product });
    }
    Ok(build_profile(points, gamma, delta))
}

/// Same profile as [`continuity_functional`], read as a limit as `r → 1`.
pub fn compactness_profile(m: &Measure, gamma: f64, delta: f64, grid: &RadialGrid) -> Result<Profile> {
    continuity_functional(m, gamma, delta, grid)
}

pub type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A radial weight on `[0, 1)`.
#[derive(Clone)]
pub enum Weight {
    Standard(f64),
    Custom { label: String, eval: WeightFn },
}

impl std::fmt::Debug for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Weight::Standard(g) => write!(f, "Standard({g})"),
            Weight::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

impl Weight {
    pub fn custom(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Weight::Custom { label: label.into(), eval: Arc::new(eval) }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Weight::Standard(g) if *g == 0.0 => 1.0,
            Weight::Standard(g) => (1.0 - r).powf(*g),
            Weight::Custom { eval, .. } => eval(r),
        }
    }

    /// Samples 257 points and checks positivity and monotonicity.
    fn assert_admissible(&self, name: &'static str) -> Result<()> {
        if let Weight::Standard(g) = self {
            if !(*g >= 0.0 && g.is_finite()) {
                return Err(invalid(name, format!("standard exponent {g} must be nonnegative")));
            }
            return Ok(());
        }
        let mut prev = f64::INFINITY;
        for i in 0..=256 {
            let r = 1.0 - 2f64.powf(-(i as f64) / 8.0);
            let v = self.eval(r);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Precondition(format!("weight {name} is not positive at r = {r} (value {v})")));
            }
            if v > prev * (1.0 + 1e-12) {
                return Err(Error::Precondition(format!("weight {name} increases near r = {r}")));
            }
            prev = v;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralContinuity {
    pub sup: f64,
    pub argmax: f64,
    pub points: Vec<(f64, f64)>,
    /// True when `v` is a standard weight, so the constant equals the operator norm.
    pub is_norm: bool,
    /// Radii where the integral diverged.
    pub divergent: Vec<f64>,
}

/// `max_r w(r) ∫ dμ(t) / (v(tr)(1-tr))` over the grid.
pub fn general_continuity_constant(m: &Measure, v: &Weight, w: &Weight, grid: &RadialGrid) -> Result<GeneralContinuity> {
    v.assert_admissible("v")?;
    w.assert_admissible("w")?;
    let mut points = Vec::with_capacity(grid.len());
    let mut divergent = Vec::new();
    for &r in grid.points() {
        let integral = match v {
            Weight::Standard(g) => m.integrate_kernel(&KernelSpec::PowerReciprocal { r, p: g + 1.0 })?.real(),
            Weight::Custom { eval, .. } => custom_weight_integral(m, eval, r)?,
        };
        match integral {
            Some(val) => points.push((r, w.eval(r) * val)),
            None => {
                divergent.push(r);
                points.push((r, f64::INFINITY));
            }
        }
    }
    let (argmax, sup) = points.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best });
    Ok(GeneralContinuity { sup, argmax, points, is_norm: matches!(v, Weight::Standard(_)), divergent })
}

fn custom_weight_integral(m: &Measure, v: &WeightFn, r: f64) -> Result<Option<f64>> {
    let kernel = |t: f64, gap: f64| {
        let one_minus_tr = (1.0 - r) + r * gap;
        1.0 / (v(t * r) * one_minus_tr)
    };
    match m {
        Measure::Atomic(atoms) => {
            let mut acc = KahanSum::new();
            for a in atoms {
                acc.add(a.mass * kernel(a.location, 1.0 - a.location));
            }
            Ok(Some(acc.value()))
        }
        Measure::Density { kind, .. } => {
            let out = quadrature::integrate_to_one(|t, gap| kind.eval(t, gap) * kernel(t, gap), 0.0, &QuadratureOptions::default())?;
            Ok(out.value())
        }
        Measure::MomentDefined { .. } => Err(Error::UnsupportedRepresentation {
            operation: "general_continuity_constant with a custom weight",
            representation: "moment-defined",
            hint: "use a standard weight, whose kernel has a binomial expansion",
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summation {
    pub convergent: bool,
    /// Value when convergent, partial value otherwise.
    pub value: f64,
    pub method: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HinftyReport {
    pub moment_sum: Summation,
    pub gap_integral: Summation,
    pub agree: bool,
}

/// `Σ μ_n` and `∫ dμ/(1-t)`, which converge or diverge together.
pub fn hinfty_summability(m: &Measure) -> Result<HinftyReport> {
    let moment_sum = moment_sum(m)?;
    let gap_integral = match m.integrate_kernel(&KernelSpec::ReciprocalGap)? {
        KernelIntegral::Finite(v) => Summation { convergent: true, value: v.re, method: integral_method(m) },
        KernelIntegral::Divergent { partial, .. } => Summation { convergent: false, value: partial, method: integral_method(m) },
    };
    let agree = moment_sum.convergent == gap_integral.convergent
        && (!moment_sum.convergent || (moment_sum.value - gap_integral.value).abs() <= 1e-6 * gap_integral.value.abs().max(1e-300));
    Ok(HinftyReport { moment_sum, gap_integral, agree })
}

fn integral_method(m: &Measure) -> &'static str {
    match m {
        Measure::Atomic(_) => "atom sum",
        Measure::Density { .. } => "quadrature",
        Measure::MomentDefined { .. } => "moment expansion",
    }
}

fn from_series(s: SeriesSum, method: &'static str) -> Summation {
    match s {
        SeriesSum::Converged { value, .. } => Summation { convergent: true, value, method },
        SeriesSum::Diverged { partial, .. } => Summation { convergent: false, value: partial, method },
    }
}

fn moment_sum(m: &Measure) -> Result<Summation> {
    match m {
        Measure::Atomic(atoms) => {
            let decay = atoms.iter().map(|a| if a.location > 0.0 { -a.location.ln() } else { f64::INFINITY }).fold(f64::INFINITY, f64::min);
            let ext = |x: f64| atoms.iter().map(|a| if a.location > 0.0 { a.mass * a.location.powf(x) } else { 0.0 }).sum::<f64>();
            let s = quadrature::sum_positive_series(|k| m.moment(k).ok(), Some(&ext), decay, &SeriesPolicy::default())?;
            Ok(from_series(s, "direct sum with Euler-Maclaurin tail"))
        }
        Measure::MomentDefined { rule, .. } => {
            let s = m.integrate_kernel(&KernelSpec::ReciprocalGap)?;
            let method = if matches!(rule, MomentRule::Custom(_)) { "direct sum" } else { "direct sum with Euler-Maclaurin tail" };
            Ok(match s {
                KernelIntegral::Finite(v) => Summation { convergent: true, value: v.re, method },
                KernelIntegral::Divergent { partial, .. } => Summation { convergent: false, value: partial, method },
            })
        }
        Measure::Density { .. } => density_moment_sum(m),
    }
}

/// Direct summation with an Euler–Maclaurin tail on the real-index moments `∫ t^x ρ dt`.
fn density_moment_sum(m: &Measure) -> Result<Summation> {
    let Measure::Density { kind, .. } = m else {
        return Err(Error::Precondition("density_moment_sum needs a density".into()));
    };
    let ext = |x: f64| measures::density_moment_real(kind, x).unwrap_or(f64::NAN);
    let s = quadrature::sum_positive_series(|k| m.moment(k).ok(), Some(&ext), 0.0, &SeriesPolicy::default())?;
    Ok(from_series(s, "direct sum with Euler-Maclaurin tail"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessityReport {
    pub values: Vec<f64>,
    pub running_max: Vec<f64>,
    pub trend: Trend,
}

/// `μ_n ‖z^n‖_{v_γ} Σ_{k≤n} Σ_{j≤k} a_j` for `n = 0..=deg f`.
pub fn necessity_bound(seq: &MomentSequence<f64>, f: &TruncatedSeries<f64>, gamma_w: f64) -> Result<NecessityReport> {
    if seq.len() < f.degree() + 1 {
        return Err(Error::LengthMismatch { expected: f.degree() + 1, got: seq.len() });
    }
    if let Some(i) = f.coeffs().iter().position(|&c| !(c > 0.0)) {
        return Err(Error::NonPositiveCoefficient { index: i });
    }
    let mut inner = KahanSum::new();
    let mut outer = KahanSum::new();
    let mut values = Vec::with_capacity(f.degree() + 1);
    let mut running_max = Vec::with_capacity(f.degree() + 1);
    let mut best = 0.0f64;
    for (n, &a) in f.coeffs().iter().enumerate() {
        inner.add(a);
        outer.add(inner.value());
        let v = seq.values()[n] * spaces::monomial_norm(gamma_w, n)? * outer.value();
        best = best.max(v);
        values.push(v);
        running_max.push(best);
    }
    let trend = if values.len() > 64 {
        let samples: Vec<(f64, f64)> = trend::dyadic_ladder(values.len() - 1).into_iter().map(|n| ((n as f64).log2(), values[n])).collect();
        trend::classify(&samples, &TrendPolicy::default()).0
    } else {
        Trend::Inconclusive
    };
    Ok(NecessityReport { values, running_max, trend })
}
