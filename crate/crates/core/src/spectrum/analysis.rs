use std::io::Write;

use serde::{Deserialize, Serialize};

use super::sections::{centered_range, mean_spacing};
use super::{gamma_curve, zero_set_estimate, EnergyGrid, LyapunovCurve, SpectrumEstimate, Threshold};
use crate::cocycle::{lyapunov_estimate, spread_offsets, MIN_UNIFORMITY_OFFSETS};
use crate::error::{invalid, Result};
use crate::operator::{CoefficientWindow, FiniteSection};
use crate::Scalar;

/// Spread below which a positive `γ̂` is taken as uniform growth.
pub const UNIFORM_SPREAD: f64 = 0.02;

/// Eigenvalue tolerance used by the classifier's sections.
const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimateComparison {
    pub hausdorff_distance: f64,
    pub symmetric_difference_measure: f64,
}

pub fn compare_estimates(a: &SpectrumEstimate, b: &SpectrumEstimate) -> Result<EstimateComparison> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("cannot compare an empty spectrum estimate"));
    }
    Ok(EstimateComparison {
        hausdorff_distance: a.hausdorff(b),
        symmetric_difference_measure: a.symmetric_difference_measure(b),
    })
}

/// One resolution level of a measure trend: grid spacing and step count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendOrder {
    pub step: f64,
    pub n_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    pub order: usize,
    pub step: f64,
    pub n_steps: u64,
    /// Measure of this order's own zero-set estimate.
    pub raw_measure: f64,
    /// Measure after intersecting with every coarser order.
    pub measure: f64,
    /// Width of the widest interval after intersection.
    pub max_contained_interval: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureTrend {
    pub points: Vec<TrendPoint>,
    /// The intersection over all orders.
    pub estimate: SpectrumEstimate,
    /// The curve of the finest order.
    pub finest_curve: LyapunovCurve,
}

impl MeasureTrend {
    pub fn measures(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.measure).collect()
    }

    /// CSV `order,measure`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "order,measure")?;
        for p in &self.points {
            writeln!(out, "{},{}", p.order, crate::fmt_f64(p.measure))?;
        }
        Ok(())
    }
}

/// Zero-set estimates over `[lo, hi]` at increasing resolution, intersected
/// cumulatively so each order refines the coarser ones.
///
/// `base_offsets` supplies the offsets for a given step count.
pub fn measure_trend<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    lo: f64,
    hi: f64,
    orders: &[TrendOrder],
    base_offsets: impl Fn(u64) -> Result<Vec<i64>>,
    threshold: Threshold,
) -> Result<MeasureTrend> {
    if orders.is_empty() {
        return Err(invalid("a measure trend needs at least one order"));
    }
    let mut points = Vec::with_capacity(orders.len());
    let mut cumulative: Option<SpectrumEstimate> = None;
    let mut finest = None;
    for (i, order) in orders.iter().enumerate() {
        let grid = EnergyGrid::uniform(lo, hi, order.step)?;
        let curve = gamma_curve(coeffs, &grid, order.n_steps, &base_offsets(order.n_steps)?)?;
        let raw = zero_set_estimate(&curve, threshold)?;
        let refined = match cumulative {
            None => raw.clone(),
            Some(prev) => prev.intersect(&raw),
        };
        points.push(TrendPoint {
            order: i + 1,
            step: order.step,
            n_steps: order.n_steps,
            raw_measure: raw.measure(),
            measure: refined.measure(),
            max_contained_interval: refined.widest().map_or(0.0, |iv| iv[1] - iv[0]),
        });
        cumulative = Some(refined);
        finest = Some(curve);
    }
    Ok(MeasureTrend {
        points,
        estimate: cumulative.expect("orders is nonempty"),
        finest_curve: finest.expect("orders is nonempty"),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CantorReport {
    /// Components no wider than one grid spacing with no other component
    /// within `isolation_eps`.
    pub isolated_points: Vec<[f64; 2]>,
    /// The widest interval of the estimate.
    pub max_contained_interval: Option<[f64; 2]>,
    pub max_contained_width: f64,
}

/// Looks for discrete-point suspects and reports the widest interval.
pub fn cantor_diagnostic(estimate: &SpectrumEstimate, curve: &LyapunovCurve, isolation_eps: f64) -> CantorReport {
    let ivs = estimate.intervals();
    let narrow = curve.grid.spacing() * (1.0 + 1e-9);
    let isolated_points = ivs
        .iter()
        .enumerate()
        .filter(|(i, iv)| {
            let left_gap = i.checked_sub(1).map_or(f64::INFINITY, |j| iv[0] - ivs[j][1]);
            let right_gap = ivs.get(i + 1).map_or(f64::INFINITY, |next| next[0] - iv[1]);
            iv[1] - iv[0] <= narrow && left_gap > isolation_eps && right_gap > isolation_eps
        })
        .map(|(_, iv)| *iv)
        .collect();
    let widest = estimate.widest();
    CantorReport {
        isolated_points,
        max_contained_interval: widest,
        max_contained_width: widest.map_or(0.0, |iv| iv[1] - iv[0]),
    }
}

/// Eigenvalues lying between two neighbouring grid points that both have
/// `γ̂ ≥ gamma_min` and spread at most `spread_max`.
pub fn eigenvalues_in_resolvent_region(
    curve: &LyapunovCurve,
    eigenvalues: &[f64],
    gamma_min: f64,
    spread_max: f64,
) -> Vec<f64> {
    let e = curve.energies();
    let ok = |i: usize| curve.gamma[i] >= gamma_min && curve.spread[i] <= spread_max;
    eigenvalues
        .iter()
        .copied()
        .filter(|&l| {
            let i = e.partition_point(|&x| x <= l);
            i > 0 && i < e.len() && ok(i - 1) && ok(i)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LikelySpectrumGammaZero,
    LikelyResolvent,
    /// `γ̂` is positive yet the energy is not clearly separated from the
    /// section spectrum, or the growth is not uniform across offsets.
    UniformitySuspect,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyClassification {
    pub energy: f64,
    pub gamma_hat: f64,
    pub spread: f64,
    pub threshold: f64,
    /// Distance to the nearest eigenvalue of the largest section.
    pub section_distance: f64,
    /// Twice the mean eigenvalue spacing of the largest section.
    pub gap_threshold: f64,
    pub verdict: Verdict,
}

/// [`classify_energy_with`] using evenly spread offsets and the automatic
/// threshold.
pub fn classify_energy<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: f64,
    n_steps: u64,
    sizes: &[usize],
) -> Result<EnergyClassification> {
    let offsets = spread_offsets(coeffs, n_steps as i64, MIN_UNIFORMITY_OFFSETS)?;
    classify_energy_with(coeffs, energy, n_steps, &offsets, sizes, Threshold::Auto)
}

/// Places an energy in one of three strata: zero Lyapunov exponent, uniform
/// positive growth away from the section spectrum, or neither.
pub fn classify_energy_with<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: f64,
    n_steps: u64,
    base_offsets: &[i64],
    sizes: &[usize],
    threshold: Threshold,
) -> Result<EnergyClassification> {
    let size = *sizes
        .iter()
        .max()
        .ok_or_else(|| invalid("at least one section size is required"))?;
    let sample = lyapunov_estimate(coeffs, T::lit(energy), n_steps as i64, base_offsets)?;
    let (gamma_hat, spread) = (sample.value.to_f64_lossy(), sample.spread.to_f64_lossy());

    let (lo, hi) = centered_range(size);
    let eigenvalues: Vec<f64> = FiniteSection::from_coefficients(coeffs, lo, hi)?
        .eigenvalues_bisection(T::lit(CLASSIFY_TOL))?
        .into_iter()
        .map(|x| x.to_f64_lossy())
        .collect();
    let section_distance = eigenvalues
        .iter()
        .map(|l| (l - energy).abs())
        .fold(f64::INFINITY, f64::min);
    let gap_threshold = 2.0 * mean_spacing(&eigenvalues);

    let threshold = threshold.at(spread, n_steps);
    let verdict = if gamma_hat <= threshold {
        Verdict::LikelySpectrumGammaZero
    } else if spread <= UNIFORM_SPREAD && section_distance > gap_threshold {
        Verdict::LikelyResolvent
    } else {
        Verdict::UniformitySuspect
    };
    Ok(EnergyClassification {
        energy,
        gamma_hat,
        spread,
        threshold,
        section_distance,
        gap_threshold,
        verdict,
    })
}
