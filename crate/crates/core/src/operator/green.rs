use serde::Serialize;

use super::{CoefficientWindow, FiniteSection, SiteVector};
use crate::error::{invalid, Error, Result};
use crate::Scalar;

/// Pivots below this magnitude mark `E` as numerically on the section
/// spectrum.
pub const SINGULAR_PIVOT: f64 = 1e-13;

/// Solves the tridiagonal system `(section − E) x = rhs` by Gaussian
/// elimination with partial pivoting (LAPACK `gtsv` ordering).
pub fn solve_shifted<T: Scalar>(section: &FiniteSection<T>, energy: T, rhs: &[T]) -> Result<Vec<T>> {
    let n = section.size();
    if rhs.len() != n {
        return Err(invalid("right-hand side length differs from section size"));
    }
    let mut d: Vec<T> = section.diag().iter().map(|&b| b - energy).collect();
    let mut dl: Vec<T> = section.offdiag().to_vec();
    let mut du: Vec<T> = section.offdiag().to_vec();
    let mut du2 = vec![T::zero(); n.saturating_sub(2)];
    let mut x = rhs.to_vec();

    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            let fact = dl[i] / d[i];
            d[i + 1] = d[i + 1] - fact * du[i];
            x[i + 1] = x[i + 1] - fact * x[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            x.swap(i, i + 1);
            x[i + 1] = x[i + 1] - fact * x[i];
        }
        dl[i] = T::zero();
    }

    let tiny = T::lit(SINGULAR_PIVOT);
    if let Some((row, p)) = d.iter().enumerate().find(|(_, p)| !(p.abs() >= tiny)) {
        return Err(Error::SingularSystem {
            row,
            pivot: p.to_f64_lossy(),
        });
    }

    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s = s - du[i] * x[i + 1];
        }
        if i + 2 < n {
            s = s - du2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    Ok(x)
}

/// Column `G(·, m)` of the section resolvent `(H_{[lo,hi]} − E)^{−1}`.
pub fn greens_function<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    lo: i64,
    hi: i64,
    m: i64,
) -> Result<SiteVector<T>> {
    if m < lo || m > hi {
        return Err(invalid("column index outside the section"));
    }
    let section = FiniteSection::from_coefficients(coeffs, lo, hi)?;
    let mut rhs = vec![T::zero(); section.size()];
    rhs[(m - lo) as usize] = T::one();
    Ok(SiteVector::new(lo, solve_shifted(&section, energy, &rhs)?))
}

/// Knobs for [`combes_thomas_check`].
#[derive(Clone, Copy, Debug)]
pub struct CombesThomasOptions {
    /// Below this distance to the section spectrum the energy is rejected.
    pub min_eta: f64,
    /// Bisection tolerance for the section eigenvalues.
    pub tol: f64,
    /// Sites with `|n − m|` at or below this are left out of fit and bound.
    pub near_field: i64,
}

impl Default for CombesThomasOptions {
    fn default() -> Self {
        CombesThomasOptions {
            min_eta: 1e-2,
            tol: 1e-12,
            near_field: 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CombesThomasReport {
    pub energy: f64,
    pub eta: f64,
    /// Least-squares decay rate of `log|G(n, m)|` over the middle half of
    /// the section.
    pub kappa_fit: f64,
    /// Largest `κ` with `|G(n, m)| ≤ (2/η)e^{−κ|n−m|}` at every probed site.
    pub kappa_max: f64,
    /// Some `κ > 0` satisfies the bound at every probed site.
    pub bound_satisfied: bool,
    /// The bound also holds with `κ = kappa_fit`.
    pub bound_holds_at_fit: bool,
}

/// Measures exponential off-diagonal decay of the section resolvent at an
/// energy away from the section spectrum.
pub fn combes_thomas_check<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    lo: i64,
    hi: i64,
    m: i64,
    opts: CombesThomasOptions,
) -> Result<CombesThomasReport> {
    let section = FiniteSection::from_coefficients(coeffs, lo, hi)?;
    let eigenvalues = section.eigenvalues_bisection(T::lit(opts.tol))?;
    let e = energy.to_f64_lossy();
    let eta = eigenvalues
        .iter()
        .map(|l| (l.to_f64_lossy() - e).abs())
        .fold(f64::INFINITY, f64::min);
    if eta < opts.min_eta {
        return Err(Error::InSpectrum { energy: e, eta });
    }
    let g = greens_function(coeffs, energy, lo, hi, m)?;

    let probed: Vec<(f64, f64)> = (lo..=hi)
        .filter(|n| (n - m).abs() > opts.near_field)
        .filter_map(|n| {
            let v = g.get(n).to_f64_lossy().abs();
            (v > 0.0).then(|| ((n - m).abs() as f64, v.ln()))
        })
        .collect();
    if probed.is_empty() {
        return Err(invalid("section too small for a decay fit"));
    }

    let size = hi - lo + 1;
    let (mid_lo, mid_hi) = (lo + size / 4, hi - size / 4);
    let fit: Vec<(f64, f64)> = (mid_lo..=mid_hi)
        .filter(|n| (n - m).abs() > opts.near_field)
        .filter_map(|n| {
            let v = g.get(n).to_f64_lossy().abs();
            (v > 0.0).then(|| ((n - m).abs() as f64, v.ln()))
        })
        .collect();
    let kappa_fit = -least_squares_slope(&fit).unwrap_or(f64::NAN);

    let log_prefactor = (2.0 / eta).ln();
    let kappa_max = probed
        .iter()
        .map(|&(d, lg)| (log_prefactor - lg) / d)
        .fold(f64::INFINITY, f64::min);
    let bound_holds_at_fit = kappa_fit.is_finite() && probed.iter().all(|&(d, lg)| lg <= log_prefactor - kappa_fit * d);

    Ok(CombesThomasReport {
        energy: e,
        eta,
        kappa_fit,
        kappa_max,
        bound_satisfied: kappa_max > 0.0,
        bound_holds_at_fit,
    })
}

/// Slope of the least-squares line through `points`.
pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Green's-function export, CSV `n,m,value`.
pub fn write_greens_csv<T: Scalar, W: std::io::Write>(g: &SiteVector<T>, m: i64, mut out: W) -> std::io::Result<()> {
    writeln!(out, "n,m,value")?;
    for (i, v) in g.values().iter().enumerate() {
        writeln!(out, "{},{},{}", g.lo() + i as i64, m, crate::fmt_f64(v.to_f64_lossy()))?;
    }
    Ok(())
}
