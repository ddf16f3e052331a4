//! Transfer-matrix cocycles of the eigenvalue equation.
//!
//! Products are kept as `e^s·B` with `‖B‖_F ∈ [0.5, 2]`, so growth rates of
//! order one survive arbitrarily long products in double precision.

mod diagnostics;
mod lyapunov;
mod mat2;
mod transfer;

pub use diagnostics::{cocycle_identity_residual, conjugation_residual, singular_directions, SingularDirections};
pub use lyapunov::{
    closed_form_lyapunov_periodic, log_norm_profile, lyapunov_estimate, spread_offsets, uniformity_diagnostic,
    uniformity_diagnostic_at, LyapunovSample, UniformityLevel, UniformityReport, MIN_LYAPUNOV_STEPS,
    MIN_UNIFORMITY_OFFSETS,
};
pub use mat2::Mat2;
pub use transfer::{
    cocycle_product, required_sites, sl2_transfer_matrix, transfer_matrix, CocycleAccumulator, Variant,
};
