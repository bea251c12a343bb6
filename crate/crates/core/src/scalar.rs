//! Numeric abstractions shared by the algebraic layer.
//!
//! [`Coefficient`] is anything a power-series coefficient can be: real or
//! complex, floating or exact. [`Scalar`] narrows that to ordered real
//! fields, which is what moment sequences need.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// A ring element usable as a truncated-series coefficient.
pub trait Coefficient: Clone + Debug + PartialEq + Num + std::ops::Neg<Output = Self> + Send + Sync + 'static {
    /// Modulus as an `f64`, used for diagnostics only.
    fn modulus(&self) -> f64;

    /// True when arithmetic in this type is exact.
    fn is_exact() -> bool;

    /// Relative size below which a pivot is treated as zero.
    fn pivot_tolerance() -> f64;

    fn is_finite_value(&self) -> bool;

    /// Lossy conversion for evaluation and norms.
    fn to_c64(&self) -> Complex64;
}

/// An ordered real field. Implemented for `f32`, `f64` and [`BigRational`].
pub trait Scalar: Coefficient + PartialOrd + Signed + FromPrimitive + ToPrimitive {
    /// `num / den`, exact when the type allows it.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// `self^p`, or `None` when the power is not representable in this type.
    fn powf_checked(&self, p: f64) -> Option<Self>;

    /// `exp(x)`, or `None` for exact types.
    fn exp_checked(x: f64) -> Option<Self>;

    /// Absolute tolerance for sign tests on quantities of size `scale`.
    fn sign_tolerance(scale: &Self) -> Self;

    /// Multiplicative slack `1 + eps` for relative comparisons (exactly one for exact types).
    fn relative_slack(eps: f64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Coefficient for $t {
            fn modulus(&self) -> f64 {
                self.abs() as f64
            }
            fn is_exact() -> bool {
                false
            }
            fn pivot_tolerance() -> f64 {
                4.0 * <$t>::EPSILON as f64
            }
            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }
            fn to_c64(&self) -> Complex64 {
                Complex64::new(*self as f64, 0.0)
            }
        }

        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
            fn powf_checked(&self, p: f64) -> Option<Self> {
                Some(self.powf(p as $t))
            }
            fn exp_checked(x: f64) -> Option<Self> {
                Some((x as $t).exp())
            }
            fn sign_tolerance(scale: &Self) -> Self {
                $tol * scale.abs()
            }
            fn relative_slack(eps: f64) -> Self {
                1.0 + eps as $t
            }
        }

        impl Coefficient for Complex<$t> {
            fn modulus(&self) -> f64 {
                self.norm() as f64
            }
            fn is_exact() -> bool {
                false
            }
            fn pivot_tolerance() -> f64 {
                4.0 * <$t>::EPSILON as f64
            }
            fn is_finite_value(&self) -> bool {
                self.re.is_finite() && self.im.is_finite()
            }
            fn to_c64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }
        }
    };
}

impl_float_scalar!(f64, 1e-12);
impl_float_scalar!(f32, 1e-5);

impl Coefficient for BigRational {
    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn is_exact() -> bool {
        true
    }
    fn pivot_tolerance() -> f64 {
        0.0
    }
    fn is_finite_value(&self) -> bool {
        true
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn powf_checked(&self, p: f64) -> Option<Self> {
        if p.fract() != 0.0 || p.abs() > i32::MAX as f64 {
            return None;
        }
        let e = p as i32;
        if e < 0 && self.is_zero() {
            return None;
        }
        Some(num_traits::pow::Pow::pow(self, e))
    }

    fn exp_checked(x: f64) -> Option<Self> {
        if x == 0.0 {
            Some(Self::one())
        } else {
            None
        }
    }

    fn sign_tolerance(_scale: &Self) -> Self {
        Self::zero()
    }

    fn relative_slack(_eps: f64) -> Self {
        Self::one()
    }
}

impl Coefficient for Complex<BigRational> {
    fn modulus(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
    fn is_exact() -> bool {
        true
    }
    fn pivot_tolerance() -> f64 {
        0.0
    }
    fn is_finite_value(&self) -> bool {
        true
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// True when `pivot` is numerically indistinguishable from zero relative to `scale`.
pub(crate) fn is_negligible<C: Coefficient>(pivot: &C, scale: f64) -> bool {
    if C::is_exact() {
        pivot.is_zero()
    } else {
        pivot.modulus() <= C::pivot_tolerance() * scale.max(f64::MIN_POSITIVE)
    }
}

/// Compensated running sum. Exact types carry a zero compensation term.
#[derive(Debug, Clone)]
pub(crate) struct KahanSum<C> {
    sum: C,
    comp: C,
}

impl<C: Coefficient> KahanSum<C> {
    pub(crate) fn new() -> Self {
        Self { sum: C::zero(), comp: C::zero() }
    }

    pub(crate) fn add(&mut self, x: C) {
        if C::is_exact() {
            self.sum = self.sum.clone() + x;
            return;
        }
        let y = x - self.comp.clone();
        let t = self.sum.clone() + y.clone();
        self.comp = (t.clone() - self.sum.clone()) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> C {
        self.sum.clone()
    }
}
