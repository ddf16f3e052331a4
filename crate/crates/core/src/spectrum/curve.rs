use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{EnergyGrid, Method, SpectrumEstimate};
use crate::cocycle::lyapunov_estimate;
use crate::error::{invalid, Result};
use crate::operator::CoefficientWindow;
use crate::Scalar;

/// Smallest threshold [`Threshold::Auto`] will use.
pub const THRESHOLD_FLOOR: f64 = 0.01;

/// Lyapunov estimates along an energy grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovCurve {
    pub grid: EnergyGrid,
    pub gamma: Vec<f64>,
    pub spread: Vec<f64>,
    pub n_steps: u64,
}

impl LyapunovCurve {
    pub fn energies(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Smallest `γ̂` and the energy where it occurs.
    pub fn min_gamma(&self) -> Option<(f64, f64)> {
        self.energies()
            .iter()
            .zip(&self.gamma)
            .map(|(&e, &g)| (e, g))
            .reduce(|best, p| if p.1 < best.1 { p } else { best })
    }

    /// CSV `E,gamma,spread`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "E,gamma,spread")?;
        for ((e, g), s) in self.energies().iter().zip(&self.gamma).zip(&self.spread) {
            writeln!(
                out,
                "{},{},{}",
                crate::fmt_f64(*e),
                crate::fmt_f64(*g),
                crate::fmt_f64(*s)
            )?;
        }
        Ok(())
    }
}

/// `γ̂(E)` and its spread over `base_offsets` at every grid point.
///
/// Points are evaluated in parallel; the result is ordered by grid index and
/// does not depend on the number of worker threads.
pub fn gamma_curve<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    grid: &EnergyGrid,
    n_steps: u64,
    base_offsets: &[i64],
) -> Result<LyapunovCurve> {
    let samples: Vec<(f64, f64)> = grid
        .points()
        .par_iter()
        .map(|&e| {
            let s = lyapunov_estimate(coeffs, T::lit(e), n_steps as i64, base_offsets)?;
            Ok((s.value.to_f64_lossy(), s.spread.to_f64_lossy()))
        })
        .collect::<Result<_>>()?;
    let (gamma, spread) = samples.into_iter().unzip();
    Ok(LyapunovCurve {
        grid: grid.clone(),
        gamma,
        spread,
        n_steps,
    })
}

/// When `γ̂` counts as zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Fixed(f64),
    /// `max(0.01, 3·(spread + log n / n))` per point: the estimator bias at
    /// elliptic and parabolic energies decays like `log n / n`.
    Auto,
}

impl Threshold {
    pub fn at(&self, spread: f64, n_steps: u64) -> f64 {
        match *self {
            Threshold::Fixed(t) => t,
            Threshold::Auto => {
                let n = n_steps.max(2) as f64;
                THRESHOLD_FLOOR.max(3.0 * (spread + n.ln() / n))
            }
        }
    }
}

/// Maximal runs of grid points with `γ̂ ≤ threshold`, each padded by half a
/// grid spacing on both sides. An empty result is a valid answer.
pub fn zero_set_estimate(curve: &LyapunovCurve, threshold: Threshold) -> Result<SpectrumEstimate> {
    if let Threshold::Fixed(t) = threshold {
        if !(t > 0.0) {
            return Err(invalid("zero-set threshold must be positive"));
        }
    }
    let energies = curve.energies();
    let pad = 0.5 * curve.grid.spacing();
    let below: Vec<bool> = curve
        .gamma
        .iter()
        .zip(&curve.spread)
        .map(|(&g, &s)| g <= threshold.at(s, curve.n_steps))
        .collect();
    let mut intervals = Vec::new();
    let mut i = 0;
    while i < below.len() {
        if !below[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < below.len() && below[i + 1] {
            i += 1;
        }
        intervals.push([energies[start] - pad, energies[i] + pad]);
        i += 1;
    }
    Ok(SpectrumEstimate::new(Method::GammaZeroSet, intervals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::spread_offsets;

    fn curve_from(gamma: Vec<f64>, lo: f64, hi: f64, step: f64) -> LyapunovCurve {
        let grid = EnergyGrid::uniform(lo, hi, step).unwrap();
        assert_eq!(grid.len(), gamma.len());
        LyapunovCurve {
            spread: vec![0.0; gamma.len()],
            grid,
            gamma,
            n_steps: 1000,
        }
    }

    #[test]
    fn runs_become_padded_intervals() {
        let c = curve_from(vec![1.0, 0.0, 0.0, 1.0, 0.0], 0.0, 4.0, 1.0);
        let e = zero_set_estimate(&c, Threshold::Fixed(0.02)).unwrap();
        assert_eq!(e.intervals(), &[[0.5, 2.5], [3.5, 4.5]]);
    }

    #[test]
    fn constant_positive_curve_is_empty() {
        let c = curve_from(vec![0.5; 11], 0.0, 1.0, 0.1);
        assert!(zero_set_estimate(&c, Threshold::Auto).unwrap().is_empty());
    }

    #[test]
    fn auto_threshold_floor_and_growth() {
        assert_eq!(Threshold::Auto.at(0.0, 1_000_000), THRESHOLD_FLOOR);
        let t = Threshold::Auto.at(0.01, 1000);
        assert!((t - 3.0 * (0.01 + 1000f64.ln() / 1000.0)).abs() < 1e-15);
    }

    #[test]
    fn free_curve_matches_closed_form() {
        let c = CoefficientWindow::<f64>::constant(1.0, 0.0, -3000, 3000).unwrap();
        let offsets = spread_offsets(&c, 2000, 8).unwrap();
        let grid = EnergyGrid::uniform(-3.0, 3.0, 0.05).unwrap();
        let curve = gamma_curve(&c, &grid, 2000, &offsets).unwrap();
        for (e, g) in curve.energies().iter().zip(&curve.gamma) {
            if e.abs() <= 1.9 {
                assert!(*g <= 0.02, "γ̂({e}) = {g}");
            }
            if e.abs() >= 2.5 {
                assert!((g - (e.abs() / 2.0).acosh()).abs() < 1e-3);
            }
            assert!(*g >= -1e-9);
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let c = curve_from(vec![0.25, 0.5], 0.0, 1.0, 1.0);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "E,gamma,spread");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("1.0000000000000000e0,5.0000000000000000e-1"));
    }
}
