//! Spectral diagnostics for Jacobi operators whose coefficients are sampled
//! along an orbit of a subshift.
//!
//! The crate is organised bottom-up:
//!
//! * [`subshift`] generates symbolic orbits and their factor statistics.
//! * [`operator`] turns an orbit into Jacobi coefficients and works with
//!   finite sections, solutions of the eigenvalue equation and resolvents.
//! * [`cocycle`] multiplies transfer matrices with log-scale renormalisation
//!   and estimates Lyapunov exponents.
//! * [`spectrum`] combines both into spectrum estimates, measure trends and
//!   per-energy classification.
//! * [`cli`] is the batch front end behind the `aperiodic-spectra` binary.
//!
//! The numeric modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the double-precision instances used by the CLI.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cocycle;
mod error;
pub mod operator;
mod scalar;
pub mod spectrum;
pub mod subshift;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Mat2F64 = cocycle::Mat2<f64>;
pub type Mat2F32 = cocycle::Mat2<f32>;
pub type CocycleAccumulatorF64 = cocycle::CocycleAccumulator<f64>;
pub type SamplingFunctionsF64 = operator::SamplingFunctions<f64>;
pub type CoefficientWindowF64 = operator::CoefficientWindow<f64>;
pub type CoefficientWindowF32 = operator::CoefficientWindow<f32>;
pub type FiniteSectionF64 = operator::FiniteSection<f64>;
pub type FiniteSectionF32 = operator::FiniteSection<f32>;
pub type SiteVectorF64 = operator::SiteVector<f64>;

/// Formats a value with 17 significant digits, the precision used by every
/// CSV export.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
