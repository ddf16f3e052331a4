use serde::Serialize;

use crate::error::{invalid, Result};

/// Margin added beyond `±3K` when a grid is built from the coefficient bound.
pub const AUTO_MARGIN: f64 = 0.5;

/// Equally spaced energies covering `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyGrid {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
    /// How many times the grid has been halved since construction.
    level: u32,
}

impl EnergyGrid {
    /// Grid with spacing at most `step`. `lo == hi` gives the single point.
    pub fn uniform(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(invalid(format!("grid bounds [{lo}, {hi}] are not an interval")));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(invalid("grid step must be positive"));
        }
        if lo == hi {
            return Ok(EnergyGrid {
                lo,
                hi,
                points: vec![lo],
                level: 0,
            });
        }
        // The tiny slack keeps (hi − lo)/step = 600.0000000001 from adding a point.
        let cells = ((hi - lo) / step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let points = (0..=cells)
            .map(|i| {
                if i == cells {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / cells as f64
                }
            })
            .collect();
        Ok(EnergyGrid {
            lo,
            hi,
            points,
            level: 0,
        })
    }

    /// `[−3K − 0.5, 3K + 0.5]`, which contains every spectrum with bound `K`.
    pub fn auto(bound: f64, step: f64) -> Result<Self> {
        let edge = 3.0 * bound + AUTO_MARGIN;
        Self::uniform(-edge, edge, step)
    }

    /// The same range with every cell halved.
    pub fn refined(&self) -> Self {
        if self.points.len() < 2 {
            return self.clone();
        }
        let mut points = Vec::with_capacity(2 * self.points.len() - 1);
        for w in self.points.windows(2) {
            points.push(w[0]);
            points.push(0.5 * (w[0] + w[1]));
        }
        points.push(self.hi);
        EnergyGrid {
            lo: self.lo,
            hi: self.hi,
            points,
            level: self.level + 1,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Distance between neighbouring points; zero for a single point.
    pub fn spacing(&self) -> f64 {
        if self.points.len() < 2 {
            0.0
        } else {
            (self.hi - self.lo) / (self.points.len() - 1) as f64
        }
    }
}
