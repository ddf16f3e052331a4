use serde::Serialize;

use super::transfer::{cocycle_product, one_step, required_sites, Variant};
use super::Mat2;
use crate::error::{invalid, Result};
use crate::operator::CoefficientWindow;
use crate::Scalar;

/// Smallest step count accepted by [`lyapunov_estimate`].
pub const MIN_LYAPUNOV_STEPS: u64 = 100;

/// Smallest number of base offsets accepted by [`uniformity_diagnostic`].
pub const MIN_UNIFORMITY_OFFSETS: usize = 8;

/// `(1/|n|)·log‖M̃(n, T^k ω)‖` aggregated over base offsets `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovSample<T> {
    pub energy: T,
    pub steps: i64,
    /// Mean over offsets.
    pub value: T,
    pub min: T,
    pub max: T,
    pub spread: T,
    pub base_offsets: Vec<i64>,
}

pub(crate) fn per_offset_rates<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    steps: i64,
    base_offsets: &[i64],
) -> Result<Vec<T>> {
    base_offsets
        .iter()
        .map(|&k| {
            let acc = cocycle_product(coeffs, energy, steps, k, Variant::Sl2)?;
            Ok(acc.log_norm() / T::from_i64_lossy(steps.abs()))
        })
        .collect()
}

fn summarize<T: Scalar>(values: &[T]) -> (T, T, T) {
    let min = values.iter().copied().fold(T::infinity(), T::min);
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let mean = values.iter().copied().sum::<T>() / T::from_usize_lossy(values.len());
    // Rounding can push the mean a hair outside [min, max] when all agree.
    (min, mean.max(min).min(max), max)
}

/// Orbitwise Lyapunov estimate. Negative `steps` uses the backward cocycle.
pub fn lyapunov_estimate<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    steps: i64,
    base_offsets: &[i64],
) -> Result<LyapunovSample<T>> {
    if steps.unsigned_abs() < MIN_LYAPUNOV_STEPS {
        return Err(invalid(format!(
            "Lyapunov estimates need |n| >= {MIN_LYAPUNOV_STEPS}, got {steps}"
        )));
    }
    if base_offsets.is_empty() {
        return Err(invalid("at least one base offset is required"));
    }
    let rates = per_offset_rates(coeffs, energy, steps, base_offsets)?;
    let (min, value, max) = summarize(&rates);
    Ok(LyapunovSample {
        energy,
        steps,
        value,
        min,
        max,
        spread: max - min,
        base_offsets: base_offsets.to_vec(),
    })
}

/// `count` base offsets spread evenly over every `k` for which
/// `M(steps, T^k ω)` stays inside the coefficient window.
pub fn spread_offsets<T: Scalar>(coeffs: &CoefficientWindow<T>, steps: i64, count: usize) -> Result<Vec<i64>> {
    let (lo_rel, hi_rel) = required_sites(steps, 0);
    let (k_lo, k_hi) = (coeffs.lo() - lo_rel, coeffs.hi() - hi_rel);
    if k_lo > k_hi {
        return Err(invalid(format!(
            "coefficient window [{}, {}] is too short for {steps} steps",
            coeffs.lo(),
            coeffs.hi()
        )));
    }
    if count <= 1 {
        return Ok(vec![k_lo]);
    }
    let span = (k_hi - k_lo) as i128;
    Ok((0..count as i128)
        .map(|i| k_lo + (span * i / (count as i128 - 1)) as i64)
        .collect())
}

/// `(1/p)·log ρ` for the exact one-period monodromy of periodic
/// coefficients, `p = lcm(|a_period|, |b_period|)`.
///
/// Coefficients follow `a(n) = a_period[n mod |a_period|]`, and the
/// monodromy multiplies sites `1..=p`. `ρ = |t|/2 + √(t²/4 − 1)` for trace
/// `|t| > 2`, else 1.
pub fn closed_form_lyapunov_periodic<T: Scalar>(a_period: &[T], b_period: &[T], energy: T) -> Result<T> {
    if a_period.is_empty() || b_period.is_empty() {
        return Err(invalid("periods must be nonempty"));
    }
    if a_period.iter().any(|a| a.is_zero()) {
        return Err(invalid("a entries must be nonzero"));
    }
    let (pa, pb) = (a_period.len(), b_period.len());
    let period = pa / gcd(pa, pb) * pb;
    let mut mono = Mat2::identity();
    for n in 1..=period {
        let next = a_period[(n + 1) % pa];
        let b = b_period[n % pb];
        mono = Mat2::new((energy - b) / next, -next.recip(), next, T::zero()) * mono;
    }
    let half_trace = T::lit(0.5) * mono.trace().abs();
    let rho = if half_trace > T::one() {
        half_trace + (half_trace * half_trace - T::one()).sqrt()
    } else {
        T::one()
    };
    Ok(rho.ln() / T::from_usize_lossy(period))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityLevel<T> {
    pub n: u64,
    pub min: T,
    pub max: T,
    pub mean: T,
    pub spread: T,
}

/// Spread of per-offset growth rates across increasing step counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityReport<T> {
    #[serde(rename = "E")]
    pub energy: T,
    pub n_list: Vec<u64>,
    pub spreads: Vec<T>,
    pub levels: Vec<UniformityLevel<T>>,
    /// Spreads shrink with `n` (or are already at rounding level).
    pub consistent_with_uniform: bool,
}

/// Tolerance below which a spread counts as rounding noise.
const NEGLIGIBLE_SPREAD: f64 = 1e-12;

/// Uniformity probe at `n`, `2n` and `4n`.
pub fn uniformity_diagnostic<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    steps: u64,
    base_offsets: &[i64],
) -> Result<UniformityReport<T>> {
    uniformity_diagnostic_at(coeffs, energy, &[steps, 2 * steps, 4 * steps], base_offsets)
}

/// Uniformity probe at an explicit list of step counts.
pub fn uniformity_diagnostic_at<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    n_list: &[u64],
    base_offsets: &[i64],
) -> Result<UniformityReport<T>> {
    if base_offsets.len() < MIN_UNIFORMITY_OFFSETS {
        return Err(invalid(format!(
            "uniformity needs at least {MIN_UNIFORMITY_OFFSETS} base offsets"
        )));
    }
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(invalid("step counts must be positive"));
    }
    let mut levels = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let rates = per_offset_rates(coeffs, energy, n as i64, base_offsets)?;
        let (min, mean, max) = summarize(&rates);
        levels.push(UniformityLevel {
            n,
            min,
            max,
            mean,
            spread: max - min,
        });
    }
    let spreads: Vec<T> = levels.iter().map(|l| l.spread).collect();
    let negligible = T::lit(NEGLIGIBLE_SPREAD);
    let consistent_with_uniform = spreads.windows(2).all(|w| w[1] < w[0] || w[1] <= negligible);
    Ok(UniformityReport {
        energy,
        n_list: n_list.to_vec(),
        spreads,
        levels,
        consistent_with_uniform,
    })
}

/// Per-step log-norms `log‖M(j, ω)‖₂` for `j = 1..=steps` of one variant.
pub fn log_norm_profile<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    steps: u64,
    variant: Variant,
) -> Result<Vec<T>> {
    let (lo, hi) = required_sites(steps as i64, 0);
    coeffs.require(lo, hi)?;
    let mut acc = super::CocycleAccumulator::new();
    Ok((1..=steps as i64)
        .map(|n| {
            acc.push(one_step(coeffs, energy, n, variant));
            acc.log_norm()
        })
        .collect())
}
