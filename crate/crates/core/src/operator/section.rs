use std::io::Write;

use super::CoefficientWindow;
use crate::error::{invalid, Result};
use crate::Scalar;

/// Dirichlet restriction of the Jacobi operator to `[lo, hi]`: diagonal
/// `b(lo..=hi)`, off-diagonal `a(lo+1..=hi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSection<T> {
    lo: i64,
    diag: Vec<T>,
    offdiag: Vec<T>,
    bound: T,
}

impl<T: Scalar> FiniteSection<T> {
    pub fn from_coefficients(coeffs: &CoefficientWindow<T>, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(invalid("empty section range"));
        }
        coeffs.require(lo, hi)?;
        let diag = (lo..=hi).map(|n| coeffs.b(n)).collect();
        let offdiag = (lo + 1..=hi).map(|n| coeffs.a(n)).collect();
        Self::with_origin(lo, diag, offdiag)
    }

    /// A section indexed from 0.
    pub fn from_parts(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        Self::with_origin(0, diag, offdiag)
    }

    pub fn with_origin(lo: i64, diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(invalid("section needs size >= 1 and size - 1 off-diagonal entries"));
        }
        if offdiag.iter().any(|a| a.is_zero() || !a.is_finite()) || diag.iter().any(|b| !b.is_finite()) {
            return Err(invalid("off-diagonal entries must be finite and nonzero"));
        }
        let bound = offdiag
            .iter()
            .flat_map(|&x| [x.abs(), x.abs().recip()])
            .chain(diag.iter().map(|x| x.abs()))
            .fold(T::one(), T::max);
        Ok(FiniteSection {
            lo,
            diag,
            offdiag,
            bound,
        })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.diag.len() as i64 - 1
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    /// The constant `K` of the entries; the spectrum lies in `[−3K, 3K]`.
    pub fn bound(&self) -> T {
        self.bound
    }

    /// The leading `size × size` block.
    pub fn leading(&self, size: usize) -> Result<Self> {
        if size == 0 || size > self.size() {
            return Err(invalid("leading block size out of range"));
        }
        Self::with_origin(self.lo, self.diag[..size].to_vec(), self.offdiag[..size - 1].to_vec())
    }

    /// Number of eigenvalues strictly below `energy`.
    ///
    /// Counts negative pivots of the `LDLᵀ` factorisation of the shifted
    /// matrix; pivots smaller than [`Scalar::PIVOT_FLOOR`] are replaced by the
    /// floor carrying their sign.
    pub fn sturm_count(&self, energy: T) -> usize {
        let floor = T::PIVOT_FLOOR;
        let mut count = 0;
        let mut d = self.diag[0] - energy;
        for k in 0.. {
            if d.abs() < floor {
                d = floor.copysign(d);
            }
            if d < T::zero() {
                count += 1;
            }
            if k + 1 == self.diag.len() {
                break;
            }
            let a = self.offdiag[k];
            d = (self.diag[k + 1] - energy) - a * (a / d);
        }
        count
    }

    /// All eigenvalues, ascending, each bracketed by Sturm-count bisection to
    /// width at most `tol` inside `[−3K − tol, 3K + tol]`.
    pub fn eigenvalues_bisection(&self, tol: T) -> Result<Vec<T>> {
        if !(tol > T::zero()) {
            return Err(invalid("tolerance must be positive"));
        }
        let edge = T::lit(3.0) * self.bound + tol;
        let mut out = vec![T::zero(); self.size()];
        self.isolate(-edge, edge, 0, self.size(), tol, &mut out);
        Ok(out)
    }

    /// Fills `out[lo_count..hi_count]`, the eigenvalues inside `[lo, hi)`.
    fn isolate(&self, lo: T, hi: T, lo_count: usize, hi_count: usize, tol: T, out: &mut [T]) {
        if lo_count == hi_count {
            return;
        }
        let half = T::lit(0.5);
        let mid = half * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            out[lo_count..hi_count].fill(mid);
            return;
        }
        let mid_count = self.sturm_count(mid);
        self.isolate(lo, mid, lo_count, mid_count, tol, out);
        self.isolate(mid, hi, mid_count, hi_count, tol, out);
    }

    /// Dense copy, row-major. Intended for small sections.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.size();
        let mut m = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }
}

/// Eigenvalue export, CSV `index,eigenvalue`.
pub fn write_eigenvalues_csv<T: Scalar, W: Write>(eigenvalues: &[T], mut out: W) -> std::io::Result<()> {
    writeln!(out, "index,eigenvalue")?;
    for (i, e) in eigenvalues.iter().enumerate() {
        writeln!(out, "{},{}", i, crate::fmt_f64(e.to_f64_lossy()))?;
    }
    Ok(())
}
