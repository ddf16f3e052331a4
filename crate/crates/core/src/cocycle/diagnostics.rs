use serde::Serialize;

use super::transfer::{cocycle_product, pow2, CocycleAccumulator, Variant};
use super::Mat2;
use crate::error::{invalid, Result};
use crate::operator::CoefficientWindow;
use crate::Scalar;

/// `‖A − B‖_F / ‖A‖_F` for renormalised products `A`, `B`, computed without
/// leaving the unit scale. `left` and `right` multiply `B`'s unit part.
fn relative_gap<T: Scalar>(a: &CocycleAccumulator<T>, b: &CocycleAccumulator<T>, left: Mat2<T>, right: Mat2<T>) -> T {
    let rel_scale = pow2::<T>(b.exponent - a.exponent);
    let b_unit = (left * b.unit * right).scale(rel_scale);
    let denom = a.unit.frobenius();
    if denom.is_zero() {
        return b_unit.frobenius();
    }
    a.unit.sub(&b_unit).frobenius() / denom
}

/// Relative Frobenius size of `M^E(n, ω) − C^{−1}(Tⁿω)·M̃^E(n, ω)·C(ω)` with
/// `C(T^j ω) = diag(1, a(j+1))`.
pub fn conjugation_residual<T: Scalar>(coeffs: &CoefficientWindow<T>, energy: T, n: u64) -> Result<T> {
    let steps = n as i64;
    let plain = cocycle_product(coeffs, energy, steps, 0, Variant::Plain)?;
    let sl2 = cocycle_product(coeffs, energy, steps, 0, Variant::Sl2)?;
    let c_start = Mat2::diag(T::one(), coeffs.a(1));
    let c_end_inv = Mat2::diag(T::one(), coeffs.a(steps + 1).recip());
    Ok(relative_gap(&plain, &sl2, c_end_inv, c_start))
}

/// Relative Frobenius deviation between `M(m, Tⁿω)·M(n, ω)` and
/// `M(m + n, ω)`.
pub fn cocycle_identity_residual<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    m: u64,
    n: u64,
    variant: Variant,
) -> Result<T> {
    let (m, n) = (m as i64, n as i64);
    let head = cocycle_product(coeffs, energy, n, 0, variant)?;
    let tail = cocycle_product(coeffs, energy, m, n, variant)?;
    let whole = cocycle_product(coeffs, energy, m + n, 0, variant)?;
    let composed = head.then(&tail);
    Ok(relative_gap(&whole, &composed, Mat2::identity(), Mat2::identity()))
}

/// Right singular directions of `M̃(n, ω)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularDirections<T> {
    /// Unit vector minimising `‖M̃(n, ω)x‖`.
    pub contracting: [T; 2],
    /// Unit vector maximising `‖M̃(n, ω)x‖`.
    pub expanding: [T; 2],
    pub log_sigma_max: T,
    pub log_sigma_min: T,
}

impl<T: Scalar> SingularDirections<T> {
    pub fn sigma_max(&self) -> T {
        self.log_sigma_max.exp()
    }

    pub fn sigma_min(&self) -> T {
        self.log_sigma_min.exp()
    }

    /// `log σ_max / n`, comparable to the Lyapunov estimate.
    pub fn growth_rate(&self, n: u64) -> T {
        self.log_sigma_max / T::from_u64(n).unwrap_or_else(T::one)
    }
}

pub fn singular_directions<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    n: u64,
) -> Result<SingularDirections<T>> {
    if n < 10 {
        return Err(invalid("singular directions need n >= 10"));
    }
    let acc = cocycle_product(coeffs, energy, n as i64, 0, Variant::Sl2)?;
    let expanding = acc.unit.top_right_singular_vector();
    let contracting = [-expanding[1], expanding[0]];
    Ok(SingularDirections {
        contracting,
        expanding,
        log_sigma_max: acc.log_norm(),
        log_sigma_min: acc.log_sigma_min(),
    })
}
