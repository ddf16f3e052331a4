//! Spectrum estimates assembled from the cocycle and the finite sections.
//!
//! The spectrum coincides with the zero set of the Lyapunov exponent
//! whenever every cocycle is uniform, so `{γ̂ ≤ threshold}` on a grid gives
//! an outer estimate. Centred Dirichlet sections give an independent one.
//! The two are compared, refined across resolutions and used to classify
//! single energies.

mod analysis;
mod curve;
mod estimate;
mod grid;
mod sections;

pub use analysis::{
    cantor_diagnostic, classify_energy, classify_energy_with, compare_estimates, eigenvalues_in_resolvent_region,
    measure_trend, CantorReport, EnergyClassification, EstimateComparison, MeasureTrend, TrendOrder, TrendPoint,
    Verdict, UNIFORM_SPREAD,
};
pub use curve::{gamma_curve, zero_set_estimate, LyapunovCurve, Threshold, THRESHOLD_FLOOR};
pub use estimate::{Method, SpectrumEstimate, SLIVER_WIDTH};
pub use grid::{EnergyGrid, AUTO_MARGIN};
pub use sections::{centered_range, finite_section_spectrum, mean_spacing, SectionSpectrum};
