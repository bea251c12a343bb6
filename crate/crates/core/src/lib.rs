//! Numerical toolkit for generalized Cesàro operators
//! `C_μ f(z) = Σ_n μ_n (Σ_{k≤n} a_k) z^n` with `μ_n = ∫_{[0,1)} t^n dμ(t)`.
//!
//! Sequence and series code is generic over the scalar type (`f32`, `f64`,
//! `BigRational` and their complex counterparts); the aliases below cover
//! the common concrete choices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod catalog;
pub mod error;
pub mod grammar;
pub mod measures;
pub mod moments;
pub mod operator;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod spaces;
pub mod spectrum;
pub mod trend;

pub use error::{Error, Result};
pub use measures::{Atom, DensityKind, KernelIntegral, KernelSpec, Measure, MomentRule};
pub use moments::{CatalogSequence, MomentSequence};
pub use report::{Check, DiagnosticReport, Verdict};
pub use scalar::{Coefficient, Scalar};
pub use spaces::{RadialGrid, TruncatedSeries};

pub use num_complex::Complex64;
pub use num_rational::BigRational;

/// Complex series, the default for operator evaluation.
pub type Series = TruncatedSeries<Complex64>;
pub type RealSeries = TruncatedSeries<f64>;
pub type ExactSeries = TruncatedSeries<BigRational>;
pub type Moments = MomentSequence<f64>;
pub type ExactMoments = MomentSequence<BigRational>;
