use rayon::prelude::*;
use serde::Serialize;

use super::{Method, SpectrumEstimate};
use crate::error::{invalid, Result};
use crate::operator::{CoefficientWindow, FiniteSection};
use crate::Scalar;

/// Site range `[−⌊size/2⌋, size − 1 − ⌊size/2⌋]` of a section centred on the
/// origin.
pub fn centered_range(size: usize) -> (i64, i64) {
    let half = (size / 2) as i64;
    (-half, size as i64 - 1 - half)
}

/// Mean distance between neighbouring eigenvalues of a sorted list.
pub fn mean_spacing(eigenvalues: &[f64]) -> f64 {
    match eigenvalues {
        [first, .., last] => (last - first) / (eigenvalues.len() - 1) as f64,
        _ => 0.0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionSpectrum {
    pub sizes: Vec<usize>,
    /// Ascending eigenvalues, one list per size.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Half-width of the clusters around the largest section's eigenvalues.
    pub delta: f64,
    pub estimate: SpectrumEstimate,
}

impl SectionSpectrum {
    pub fn largest(&self) -> &[f64] {
        self.eigenvalues.last().map_or(&[], Vec::as_slice)
    }
}

/// Eigenvalues of centred Dirichlet sections of increasing size, plus the
/// union of `[λ − δ, λ + δ]` over the largest one, `δ = max(tol, 2·mean
/// spacing)`.
pub fn finite_section_spectrum<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    sizes: &[usize],
    tol: f64,
) -> Result<SectionSpectrum> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(invalid("section sizes must be positive"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("section sizes must be strictly increasing"));
    }
    if !(tol > 0.0) {
        return Err(invalid("eigenvalue tolerance must be positive"));
    }
    let eigenvalues: Vec<Vec<f64>> = sizes
        .par_iter()
        .map(|&size| {
            let (lo, hi) = centered_range(size);
            let section = FiniteSection::from_coefficients(coeffs, lo, hi)?;
            let ev = section.eigenvalues_bisection(T::lit(tol))?;
            Ok(ev.into_iter().map(|x| x.to_f64_lossy()).collect())
        })
        .collect::<Result<_>>()?;
    let largest = eigenvalues.last().expect("sizes is nonempty");
    let delta = tol.max(2.0 * mean_spacing(largest));
    let estimate = SpectrumEstimate::new(Method::FiniteSection, largest.iter().map(|&l| [l - delta, l + delta]));
    Ok(SectionSpectrum {
        sizes: sizes.to_vec(),
        eigenvalues,
        delta,
        estimate,
    })
}
