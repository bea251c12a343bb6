//! Positive finite Borel measures on `[0, 1)`.
//!
//! A [`Measure`] is atomic, given by a density, or defined by its moment
//! sequence. Moments, tail masses and kernel integrals are computed exactly
//! for atoms, by quadrature for densities and by certified series
//! summation for moment-defined measures.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::moments::MomentSequence;
use crate::quadrature::{self, Integral, QuadratureOptions, SeriesPolicy, SeriesSum};
use crate::scalar::KahanSum;

/// Default moment depth.
pub const DEFAULT_DEPTH: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

pub type DensityFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Density families. `Custom` evaluators receive `(t, 1 - t)`.
#[derive(Clone)]
pub enum DensityKind {
    Lebesgue,
    /// `a (1 - t)^b`
    Poly { a: f64, b: f64 },
    /// `exp(-alpha / (1 - t)^beta)`
    ExpGap { alpha: f64, beta: f64 },
    Custom { label: String, eval: DensityFn },
}

impl fmt::Debug for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityKind::Lebesgue => write!(f, "Lebesgue"),
            DensityKind::Poly { a, b } => write!(f, "Poly({a}, {b})"),
            DensityKind::ExpGap { alpha, beta } => write!(f, "ExpGap({alpha}, {beta})"),
            DensityKind::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

impl DensityKind {
    pub(crate) fn eval(&self, t: f64, gap: f64) -> f64 {
        match self {
            DensityKind::Lebesgue => 1.0,
            DensityKind::Poly { a, b } => a * gap.powf(*b),
            DensityKind::ExpGap { alpha, beta } => (-alpha / gap.powf(*beta)).exp(),
            DensityKind::Custom { eval, .. } => eval(t, gap),
        }
    }
}

/// Moment rules `n ↦ μ_n / μ_0`; the measure scales them by its declared mass.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentRule {
    /// `a^n`
    Geometric { a: f64 },
    /// `(n + 1)^{-p}`
    Power { p: f64 },
    /// `(n + 2) / (2 (n + 1)^2)`
    Shifted,
    /// `1 / (n + 1)`
    Cesaro,
    /// Explicit values; entry 0 is the total mass.
    Custom(Vec<f64>),
}

impl MomentRule {
    /// Normalized value at a real index, for the closed-form rules.
    pub fn at_real(&self, x: f64) -> Option<f64> {
        match self {
            MomentRule::Geometric { a } => Some(a.powf(x)),
            MomentRule::Power { p } => Some((x + 1.0).powf(-p)),
            MomentRule::Shifted => Some((x + 2.0) / (2.0 * (x + 1.0) * (x + 1.0))),
            MomentRule::Cesaro => Some(1.0 / (x + 1.0)),
            MomentRule::Custom(_) => None,
        }
    }

    fn at(&self, n: usize) -> Option<f64> {
        match self {
            MomentRule::Geometric { a } => Some(if n <= i32::MAX as usize { a.powi(n as i32) } else { a.powf(n as f64) }),
            MomentRule::Custom(v) => v.get(n).copied(),
            _ => self.at_real(n as f64),
        }
    }

    fn exponential_decay(&self) -> f64 {
        match self {
            MomentRule::Geometric { a } => -a.ln(),
            _ => 0.0,
        }
    }

    fn exact(&self, n: usize) -> Option<BigRational> {
        let n_big = BigRational::from_integer((n as i64).into());
        match self {
            MomentRule::Geometric { a } => {
                let a = BigRational::from_float(*a)?;
                Some(num_traits::pow::Pow::pow(&a, n))
            }
            MomentRule::Power { p } if p.fract() == 0.0 && *p >= 0.0 => {
                let base = n_big + BigRational::one();
                Some(num_traits::pow::Pow::pow(&base, *p as usize).recip())
            }
            MomentRule::Power { .. } => None,
            MomentRule::Shifted => {
                let one = BigRational::one();
                let np1 = n_big.clone() + one.clone();
                Some((n_big + one.clone() + one.clone()) / (np1.clone() * np1 * (one.clone() + one)))
            }
            MomentRule::Cesaro => Some((n_big + BigRational::one()).recip()),
            MomentRule::Custom(v) => v.get(n).and_then(|x| BigRational::from_float(*x)),
        }
    }
}

/// Kernels integrated against a measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `(1 - t r)^{-p}`
    PowerReciprocal { r: f64, p: f64 },
    /// `1 / (1 - t z)`
    CauchyComplex { z: Complex64 },
    /// `1 / (1 - t)`
    ReciprocalGap,
    /// `t^n`
    Monomial { n: usize },
}

impl KernelSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::PowerReciprocal { r, p } => {
                if !(0.0..1.0).contains(&r) {
                    return Err(invalid("r", format!("{r} outside [0, 1)")));
                }
                if !(p > 0.0 && p.is_finite()) {
                    return Err(invalid("p", format!("exponent {p} must be positive")));
                }
            }
            KernelSpec::CauchyComplex { z } => {
                if !(z.norm() < 1.0) {
                    return Err(invalid("z", format!("|z| = {} is not below 1", z.norm())));
                }
            }
            KernelSpec::ReciprocalGap | KernelSpec::Monomial { .. } => {}
        }
        Ok(())
    }

    /// Kernel value at `t`, with `gap = 1 - t`.
    fn eval(&self, t: f64, gap: f64) -> Complex64 {
        match *self {
            KernelSpec::PowerReciprocal { r, p } => Complex64::new(((1.0 - r) + r * gap).powf(-p), 0.0),
            KernelSpec::CauchyComplex { z } => (Complex64::one() - z * t).inv(),
            KernelSpec::ReciprocalGap => Complex64::new(1.0 / gap, 0.0),
            KernelSpec::Monomial { n } => Complex64::new(powi_usize(t, n), 0.0),
        }
    }

    fn is_real(&self) -> bool {
        !matches!(self, KernelSpec::CauchyComplex { .. })
    }
}

/// Result of integrating a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelIntegral {
    Finite(Complex64),
    Divergent { partial: f64, steps: usize },
}

impl KernelIntegral {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            KernelIntegral::Finite(v) => Some(*v),
            KernelIntegral::Divergent { .. } => None,
        }
    }

    pub fn real(&self) -> Option<f64> {
        self.finite().map(|v| v.re)
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, KernelIntegral::Divergent { .. })
    }
}

#[derive(Clone, Debug)]
pub enum Measure {
    Atomic(Vec<Atom>),
    Density { kind: DensityKind, integrable: bool },
    MomentDefined { rule: MomentRule, mass: f64 },
}

pub(crate) fn powi_usize(t: f64, n: usize) -> f64 {
    if n <= i32::MAX as usize {
        t.powi(n as i32)
    } else {
        t.powf(n as f64)
    }
}

impl Measure {
    pub fn atomic(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms.into_iter().map(|(location, mass)| Atom { location, mass }).collect();
        if atoms.is_empty() {
            return Err(invalid("atoms", "an atomic measure needs at least one atom"));
        }
        for a in &atoms {
            if !(0.0..1.0).contains(&a.location) {
                return Err(invalid("location", format!("atom at {} outside [0, 1)", a.location)));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(invalid("mass", format!("atom mass {} must be positive and finite", a.mass)));
            }
        }
        Ok(Measure::Atomic(atoms))
    }

    pub fn point_mass(location: f64, mass: f64) -> Result<Self> {
        Self::atomic([(location, mass)])
    }

    pub fn lebesgue() -> Self {
        Measure::Density { kind: DensityKind::Lebesgue, integrable: true }
    }

    /// `a (1 - t)^b`, integrable for `b > -1`.
    pub fn poly(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid("a", format!("{a} must be positive")));
        }
        if !(b > -1.0 && b.is_finite()) {
            return Err(invalid("b", format!("{b} must exceed -1 for integrability")));
        }
        Ok(Measure::Density { kind: DensityKind::Poly { a, b }, integrable: true })
    }

    /// `exp(-alpha / (1 - t)^beta)`.
    pub fn expgap(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("{alpha} must be positive")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("{beta} must be positive")));
        }
        Ok(Measure::Density { kind: DensityKind::ExpGap { alpha, beta }, integrable: true })
    }

    /// Density from an evaluator of `(t, 1 - t)`.
    pub fn density(label: impl Into<String>, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Measure::Density { kind: DensityKind::Custom { label: label.into(), eval: Arc::new(eval) }, integrable: true }
    }

    pub fn from_rule(rule: MomentRule, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(invalid("mass", format!("total mass {mass} must be positive")));
        }
        match &rule {
            MomentRule::Geometric { a } if !(*a > 0.0 && *a < 1.0) => {
                return Err(invalid("a", format!("{a} outside (0, 1)")));
            }
            MomentRule::Power { p } if !(*p > 0.0 && p.is_finite()) => {
                return Err(invalid("p", format!("{p} must be positive")));
            }
            MomentRule::Custom(v) => {
                if v.is_empty() {
                    return Err(invalid("moments", "empty moment list"));
                }
                if (v[0] - mass).abs() > 1e-12 * mass {
                    return Err(invalid("mass", format!("declared mass {mass} differs from first moment {}", v[0])));
                }
                for (i, x) in v.iter().enumerate() {
                    if !(x.is_finite() && *x >= 0.0) {
                        return Err(invalid("moments", format!("entry {i} = {x} is not a nonnegative number")));
                    }
                    if i > 0 && *x > v[i - 1] {
                        return Err(Error::Precondition(format!(
                            "moment list increases at index {i} ({} -> {x}); moments of a measure on [0,1) are nonincreasing",
                            v[i - 1]
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(Measure::MomentDefined { rule, mass })
    }

    pub fn geometric(a: f64) -> Result<Self> {
        Self::from_rule(MomentRule::Geometric { a }, 1.0)
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::from_rule(MomentRule::Power { p }, 1.0)
    }

    pub fn shifted() -> Self {
        Measure::MomentDefined { rule: MomentRule::Shifted, mass: 1.0 }
    }

    pub fn cesaro() -> Self {
        Measure::MomentDefined { rule: MomentRule::Cesaro, mass: 1.0 }
    }

    pub fn custom_moments(values: Vec<f64>) -> Result<Self> {
        let mass = values.first().copied().unwrap_or(0.0);
        Self::from_rule(MomentRule::Custom(values), mass)
    }

    pub fn representation(&self) -> &'static str {
        match self {
            Measure::Atomic(_) => "atomic",
            Measure::Density { .. } => "density",
            Measure::MomentDefined { .. } => "moment-defined",
        }
    }

    /// True when the measure charges `(0, 1)`, i.e. the moments strictly decrease.
    pub fn charges_open_interval(&self) -> bool {
        match self {
            Measure::Atomic(atoms) => atoms.iter().any(|a| a.location > 0.0),
            Measure::Density { .. } => true,
            Measure::MomentDefined { rule: MomentRule::Custom(v), .. } => v.len() > 1 && v[1] > 0.0,
            Measure::MomentDefined { .. } => true,
        }
    }

    /// Total mass `μ_0`.
    pub fn total_mass(&self) -> Result<f64> {
        self.moment(0)
    }

    /// `μ_n = ∫ t^n dμ`.
    pub fn moment(&self, n: usize) -> Result<f64> {
        match self {
            Measure::Atomic(atoms) => {
                let mut acc = KahanSum::new();
                for a in atoms {
                    acc.add(a.mass * powi_usize(a.location, n));
                }
                Ok(acc.value())
            }
            Measure::Density { kind, .. } => {
                let bad = Cell::new(None);
                let out = quadrature::integrate_to_one(
                    |t, gap| {
                        let rho = kind.eval(t, gap);
                        if !(rho.is_finite() && rho >= 0.0) {
                            bad.set(Some((t, rho)));
                            return 0.0;
                        }
                        rho * powi_usize(t, n)
                    },
                    0.0,
                    &QuadratureOptions::default(),
                )?;
                check_density(bad.get())?;
                match out {
                    Integral::Converged { value, .. } => Ok(value),
                    Integral::Diverged { partial, panels } => Err(Error::DivergedIntegral { panels, partial }),
                }
            }
            Measure::MomentDefined { rule, mass } => match rule.at(n) {
                Some(v) if matches!(rule, MomentRule::Custom(_)) => Ok(v),
                Some(v) => Ok(mass * v),
                None => Err(Error::IndexOutOfRange { index: n, max: custom_len(rule).saturating_sub(1) }),
            },
        }
    }

    /// `(μ_0, …, μ_N)`.
    pub fn moments_upto(&self, n_max: usize) -> Result<MomentSequence<f64>> {
        let values = (0..=n_max).map(|n| self.moment(n)).collect::<Result<Vec<_>>>()?;
        if let Measure::MomentDefined { .. } = self {
            for i in 1..values.len() {
                if values[i] > values[i - 1] {
                    return Err(Error::Precondition(format!("moment rule increases at index {i}")));
                }
            }
        }
        MomentSequence::new(values)
    }

    /// Exact rational moments, available for atoms and rational closed-form rules.
    pub fn exact_moments_upto(&self, n_max: usize) -> Result<MomentSequence<BigRational>> {
        let unsupported = |what: &str| Error::ExactUnsupported { what: what.to_string() };
        let values = match self {
            Measure::Atomic(atoms) => {
                let atoms: Vec<(BigRational, BigRational)> = atoms
                    .iter()
                    .map(|a| Ok((BigRational::from_float(a.location).ok_or_else(|| unsupported("atom location"))?, BigRational::from_float(a.mass).ok_or_else(|| unsupported("atom mass"))?)))
                    .collect::<Result<_>>()?;
                (0..=n_max)
                    .map(|n| atoms.iter().fold(BigRational::zero(), |acc, (t, m)| acc + m * num_traits::pow::Pow::pow(t, n)))
                    .collect()
            }
            Measure::Density { .. } => return Err(unsupported("density moments (they require quadrature)")),
            Measure::MomentDefined { rule, mass } => {
                let mass_q = BigRational::from_float(*mass).ok_or_else(|| unsupported("mass"))?;
                (0..=n_max)
                    .map(|n| {
                        let v = rule.exact(n).ok_or_else(|| match rule {
                            MomentRule::Custom(v) if n >= v.len() => Error::IndexOutOfRange { index: n, max: v.len() - 1 },
                            _ => unsupported("this moment rule"),
                        })?;
                        Ok(if matches!(rule, MomentRule::Custom(_)) { v } else { mass_q.clone() * v })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        MomentSequence::new(values)
    }

    /// `μ([t, 1))`.
    pub fn tail_mass(&self, t: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return Err(invalid("t", format!("{t} outside [0, 1)")));
        }
        match self {
            Measure::Atomic(atoms) => {
                let mut acc = KahanSum::new();
                for a in atoms.iter().filter(|a| a.location >= t) {
                    acc.add(a.mass);
                }
                Ok(acc.value())
            }
            Measure::Density { kind, .. } => {
                let bad = Cell::new(None);
                let out = quadrature::integrate_to_one(
                    |s, gap| {
                        let rho = kind.eval(s, gap);
                        if !(rho.is_finite() && rho >= 0.0) {
                            bad.set(Some((s, rho)));
                            return 0.0;
                        }
                        rho
                    },
                    t,
                    &QuadratureOptions::default(),
                )?;
                check_density(bad.get())?;
                match out {
                    Integral::Converged { value, .. } => Ok(value),
                    Integral::Diverged { partial, panels } => Err(Error::DivergedIntegral { panels, partial }),
                }
            }
            Measure::MomentDefined { .. } => Err(Error::UnsupportedRepresentation {
                operation: "tail_mass",
                representation: "moment-defined",
                hint: "use moment-based Carleson classification (moment_classify) instead",
            }),
        }
    }

    /// `∫ K(t) dμ(t)`.
    pub fn integrate_kernel(&self, kernel: &KernelSpec) -> Result<KernelIntegral> {
        kernel.validate()?;
        match self {
            Measure::Atomic(atoms) => {
                let mut re = KahanSum::new();
                let mut im = KahanSum::new();
                for a in atoms {
                    let v = kernel.eval(a.location, 1.0 - a.location) * a.mass;
                    re.add(v.re);
                    im.add(v.im);
                }
                Ok(KernelIntegral::Finite(Complex64::new(re.value(), im.value())))
            }
            Measure::Density { kind, .. } => {
                let bad = Cell::new(None);
                let opts = QuadratureOptions::default();
                let out = if kernel.is_real() {
                    quadrature::integrate_to_one(
                        |t, gap| {
                            let rho = kind.eval(t, gap);
                            if !(rho.is_finite() && rho >= 0.0) {
                                bad.set(Some((t, rho)));
                                return 0.0;
                            }
                            if rho == 0.0 {
                                return 0.0;
                            }
                            rho * kernel.eval(t, gap).re
                        },
                        0.0,
                        &opts,
                    )?
                    .map(|v| Complex64::new(v, 0.0))
                } else {
                    quadrature::integrate_to_one(
                        |t, gap| {
                            let rho = kind.eval(t, gap);
                            if !(rho.is_finite() && rho >= 0.0) {
                                bad.set(Some((t, rho)));
                                return Complex64::zero();
                            }
                            kernel.eval(t, gap) * rho
                        },
                        0.0,
                        &opts,
                    )?
                };
                check_density(bad.get())?;
                Ok(match out {
                    Integral::Converged { value, .. } => KernelIntegral::Finite(value),
                    Integral::Diverged { partial, panels } => KernelIntegral::Divergent { partial: partial.norm(), steps: panels },
                })
            }
            Measure::MomentDefined { rule, mass } => integrate_moment_kernel(rule, *mass, kernel),
        }
    }
}

fn custom_len(rule: &MomentRule) -> usize {
    match rule {
        MomentRule::Custom(v) => v.len(),
        _ => usize::MAX,
    }
}

/// `∫ t^x ρ(t) dt` at a real index, the extension of density moments used for series tails.
pub(crate) fn density_moment_real(kind: &DensityKind, x: f64) -> Result<f64> {
    let bad = Cell::new(None);
    let out = quadrature::integrate_to_one(
        |t, gap| {
            let rho = kind.eval(t, gap);
            if !(rho.is_finite() && rho >= 0.0) {
                bad.set(Some((t, rho)));
                return 0.0;
            }
            rho * (x * (-gap).ln_1p()).exp()
        },
        0.0,
        &QuadratureOptions::default(),
    )?;
    check_density(bad.get())?;
    match out {
        Integral::Converged { value, .. } => Ok(value),
        Integral::Diverged { partial, panels } => Err(Error::DivergedIntegral { panels, partial }),
    }
}

fn check_density(bad: Option<(f64, f64)>) -> Result<()> {
    match bad {
        Some((t, rho)) => Err(invalid("density", format!("evaluator returned {rho} at t = {t}; densities must be nonnegative and finite"))),
        None => Ok(()),
    }
}

impl<V> Integral<V> {
    fn map<W>(self, f: impl Fn(V) -> W) -> Integral<W> {
        match self {
            Integral::Converged { value, error_estimate } => Integral::Converged { value: f(value), error_estimate },
            Integral::Diverged { partial, panels } => Integral::Diverged { partial: f(partial), panels },
        }
    }
}

/// `Γ(x + p) / (Γ(p) Γ(x + 1))` continued from integer `k` to real `x ≥ k`
/// through the asymptotic shape `x^{p-1} (1 + c1/x + c2/x^2)`.
fn binomial_extension(p: f64, k: usize, ck: f64) -> impl Fn(f64) -> f64 {
    let c1 = (p - 1.0) * p / 2.0;
    let d = p - 1.0;
    let c2 = d * (d - 1.0) / 24.0 * (3.0 * p * p - (d + 1.0));
    let shape = move |x: f64| x.powf(p - 1.0) * (1.0 + c1 / x + c2 / (x * x));
    let k = k as f64;
    let anchor = ck / shape(k);
    move |x| anchor * shape(x)
}

/// Sums `Σ_k binom(p+k-1, k) r^k μ_k`.
pub(crate) fn binomial_moment_series(rule: &MomentRule, mass: f64, r: f64, p: f64) -> Result<SeriesSum> {
    let policy = SeriesPolicy::default();
    let scale = if matches!(rule, MomentRule::Custom(_)) { 1.0 } else { mass };
    let mut coeff = 1.0f64;
    let mut r_pow = 1.0f64;
    let term = |k: usize| -> Option<f64> {
        if k > 0 {
            coeff *= (k as f64 - 1.0 + p) / k as f64;
            r_pow *= r;
        }
        rule.at(k).map(|m| scale * coeff * r_pow * m)
    };
    let decay = rule.exponential_decay() + if r > 0.0 { -r.ln() } else { f64::INFINITY };
    if rule.at_real(0.0).is_none() || r == 0.0 {
        return quadrature::sum_positive_series(term, None, 0.0, &policy);
    }
    // Run the direct sum first; the extension is anchored at the switch index.
    let k_switch = policy.switch_at;
    let mut c_at = 1.0f64;
    for k in 1..=k_switch {
        c_at *= (k as f64 - 1.0 + p) / k as f64;
    }
    let ext_c = binomial_extension(p, k_switch, c_at);
    let ln_r = r.ln();
    let ext = move |x: f64| scale * ext_c(x) * (x * ln_r).exp() * rule.at_real(x).unwrap_or(0.0);
    quadrature::sum_positive_series(term, Some(&ext), decay, &policy)
}

fn integrate_moment_kernel(rule: &MomentRule, mass: f64, kernel: &KernelSpec) -> Result<KernelIntegral> {
    let series = |s: SeriesSum| match s {
        SeriesSum::Converged { value, .. } => KernelIntegral::Finite(Complex64::new(value, 0.0)),
        SeriesSum::Diverged { partial, terms } => KernelIntegral::Divergent { partial, steps: terms },
    };
    let scale = if matches!(rule, MomentRule::Custom(_)) { 1.0 } else { mass };
    match *kernel {
        KernelSpec::Monomial { n } => {
            let v = rule.at(n).ok_or(Error::IndexOutOfRange { index: n, max: custom_len(rule).saturating_sub(1) })?;
            Ok(KernelIntegral::Finite(Complex64::new(scale * v, 0.0)))
        }
        KernelSpec::PowerReciprocal { r, p } => Ok(series(binomial_moment_series(rule, mass, r, p)?)),
        KernelSpec::ReciprocalGap => {
            let policy = SeriesPolicy::default();
            let term = |k: usize| rule.at(k).map(|m| scale * m);
            let ext = |x: f64| scale * rule.at_real(x).unwrap_or(0.0);
            let ext_ref: Option<&dyn Fn(f64) -> f64> = if rule.at_real(0.0).is_some() { Some(&ext) } else { None };
            Ok(series(quadrature::sum_positive_series(term, ext_ref, rule.exponential_decay(), &policy)?))
        }
        KernelSpec::CauchyComplex { z } => {
            let rho = z.norm();
            let policy = SeriesPolicy::default();
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            let mut zk = Complex64::one();
            for k in 0..policy.max_terms {
                let Some(m) = rule.at(k) else {
                    return Err(Error::TruncationNotConverged { terms: k, tail: scale * rho.powi(k as i32) });
                };
                let t = zk * (scale * m);
                re.add(t.re);
                im.add(t.im);
                let bound = t.norm() * rho / (1.0 - rho);
                let sum = Complex64::new(re.value(), im.value()).norm();
                if bound <= policy.rel_tol * sum || m == 0.0 || rho == 0.0 {
                    return Ok(KernelIntegral::Finite(Complex64::new(re.value(), im.value())));
                }
                zk *= z;
            }
            Err(Error::TruncationNotConverged { terms: policy.max_terms, tail: f64::NAN })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_first_moment() {
        assert!((Measure::lebesgue().moment(1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_masses() {
        let zero = Measure::point_mass(0.0, 1.0).unwrap();
        assert_eq!(zero.moment(3).unwrap(), 0.0);
        assert_eq!(zero.moment(0).unwrap(), 1.0);
        let half = Measure::point_mass(0.5, 1.0).unwrap();
        assert_eq!(half.moment(3).unwrap(), 0.125);
    }

    #[test]
    fn linear_density_moments() {
        let m = Measure::density("2t", |t, _| 2.0 * t);
        let seq = m.moments_upto(2).unwrap();
        let want = [1.0, 2.0 / 3.0, 0.5];
        for (got, want) in seq.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_masses() {
        assert!((Measure::lebesgue().tail_mass(0.25).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(Measure::point_mass(0.5, 1.0).unwrap().tail_mass(0.6).unwrap(), 0.0);
        let m = Measure::poly(2.0, 1.0).unwrap();
        assert!((m.tail_mass(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(Measure::cesaro().tail_mass(0.5), Err(Error::UnsupportedRepresentation { .. })));
    }

    #[test]
    fn kernel_examples() {
        let out = Measure::lebesgue().integrate_kernel(&KernelSpec::ReciprocalGap).unwrap();
        assert!(out.is_divergent());
        let zero = Measure::point_mass(0.0, 1.0).unwrap();
        let v = zero.integrate_kernel(&KernelSpec::PowerReciprocal { r: 0.9, p: 2.0 }).unwrap();
        assert_eq!(v.real(), Some(1.0));
        let g = Measure::geometric(0.5).unwrap();
        let v = g.integrate_kernel(&KernelSpec::ReciprocalGap).unwrap().real().unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn negative_density_is_rejected() {
        let m = Measure::density("bad", |t, _| t - 0.5);
        assert!(matches!(m.moment(0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn custom_moments_must_decrease() {
        assert!(Measure::custom_moments(vec![1.0, 0.9, 0.95]).is_err());
        assert!(Measure::custom_moments(vec![1.0, 0.5, 0.25]).is_ok());
    }

    #[test]
    fn binomial_series_against_closed_form() {
        // cesaro moments: ∫ dt/(1-tr)^2 = 1/(1-r)
        for r in [0.5, 0.9, 0.999, 1.0 - 2f64.powi(-20)] {
            let v = Measure::cesaro().integrate_kernel(&KernelSpec::PowerReciprocal { r, p: 2.0 }).unwrap().real().unwrap();
            assert!((v * (1.0 - r) - 1.0).abs() < 1e-9, "r = {r}: {v}");
        }
    }

    #[test]
    fn cauchy_kernel_moment_series() {
        let z = Complex64::new(0.5, 0.3);
        let a = Measure::lebesgue().integrate_kernel(&KernelSpec::CauchyComplex { z }).unwrap().finite().unwrap();
        let b = Measure::cesaro().integrate_kernel(&KernelSpec::CauchyComplex { z }).unwrap().finite().unwrap();
        let exact = -(Complex64::one() - z).ln() / z;
        assert!((a - exact).norm() < 1e-13);
        assert!((b - exact).norm() < 1e-13);
    }

    #[test]
    fn exact_moments() {
        let q = Measure::shifted().exact_moments_upto(2).unwrap();
        assert_eq!(q.values()[1], BigRational::new(3.into(), 8.into()));
        assert!(Measure::power(0.5).unwrap().exact_moments_upto(2).is_err());
    }
}
