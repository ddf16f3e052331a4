use super::CoefficientWindow;
use crate::error::{invalid, Error, Result};
use crate::Scalar;

/// A finitely supported sequence on ℤ; zero outside `[lo, lo + len)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteVector<T> {
    lo: i64,
    values: Vec<T>,
}

impl<T: Scalar> SiteVector<T> {
    pub fn new(lo: i64, values: Vec<T>) -> Self {
        SiteVector { lo, values }
    }

    pub fn zeros(lo: i64, hi: i64) -> Self {
        SiteVector {
            lo,
            values: vec![T::zero(); (hi - lo + 1).max(0) as usize],
        }
    }

    pub fn delta(site: i64) -> Self {
        SiteVector {
            lo: site,
            values: vec![T::one()],
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, n: i64) -> T {
        let i = n - self.lo;
        if i < 0 {
            return T::zero();
        }
        self.values.get(i as usize).copied().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, n: i64, v: T) {
        let i = (n - self.lo) as usize;
        self.values[i] = v;
    }

    pub fn norm(&self) -> T {
        let scale = self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if scale.is_zero() {
            return T::zero();
        }
        let sum: T = self.values.iter().map(|&v| (v / scale) * (v / scale)).sum();
        scale * sum.sqrt()
    }

    /// Copy restricted to `[lo, hi]`, zero-padded where uncovered.
    pub fn truncated(&self, lo: i64, hi: i64) -> Self {
        SiteVector {
            lo,
            values: (lo..=hi).map(|n| self.get(n)).collect(),
        }
    }
}

/// A solution of `a(n+1)u(n+1) + b(n)u(n) + a(n)u(n−1) = E·u(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub energy: T,
    pub u: SiteVector<T>,
}

impl<T: Scalar> Solution<T> {
    /// Largest `|(H − E)u|(n)` over interior sites relative to the local
    /// magnitude `|a(n+1)u(n+1)| + |b(n)u(n)| + |a(n)u(n−1)| + |E u(n)|`.
    pub fn max_relative_residual(&self, coeffs: &CoefficientWindow<T>) -> T {
        let (lo, hi) = (self.u.lo() + 1, self.u.hi() - 1);
        let e = self.energy;
        (lo..=hi)
            .map(|n| {
                let t = [
                    coeffs.a(n + 1) * self.u.get(n + 1),
                    coeffs.b(n) * self.u.get(n),
                    coeffs.a(n) * self.u.get(n - 1),
                    -e * self.u.get(n),
                ];
                let scale: T = t.iter().map(|x| x.abs()).sum();
                let r: T = t.iter().copied().sum();
                if scale.is_zero() {
                    T::zero()
                } else {
                    r.abs() / scale
                }
            })
            .fold(T::zero(), T::max)
    }
}

/// `(Hu)(n) = a(n+1)u(n+1) + b(n)u(n) + a(n)u(n−1)` for `n ∈ [lo, hi]`, with
/// `u` taken as zero off its support.
pub fn apply_operator<T: Scalar>(
    u: &SiteVector<T>,
    coeffs: &CoefficientWindow<T>,
    lo: i64,
    hi: i64,
) -> Result<SiteVector<T>> {
    if hi < lo {
        return Err(invalid("empty range"));
    }
    coeffs.require(lo, hi + 1)?;
    let values = (lo..=hi)
        .map(|n| coeffs.a(n + 1) * u.get(n + 1) + coeffs.b(n) * u.get(n) + coeffs.a(n) * u.get(n - 1))
        .collect();
    Ok(SiteVector::new(lo, values))
}

fn propagate<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    u0: T,
    u1: T,
    lo: i64,
    hi: i64,
    guard: Option<T>,
) -> Result<Solution<T>> {
    if lo > 0 || hi < 1 {
        return Err(invalid("solution range must contain sites 0 and 1"));
    }
    coeffs.require(lo + 1, hi)?;
    let mut u = SiteVector::zeros(lo, hi);
    u.set(0, u0);
    u.set(1, u1);
    let check = |n: i64, v: T| match guard {
        Some(g) if !(v.abs() <= g) => Err(Error::OverflowGuard { site: n }),
        _ => Ok(()),
    };
    for n in 1..hi {
        let next = ((energy - coeffs.b(n)) * u.get(n) - coeffs.a(n) * u.get(n - 1)) / coeffs.a(n + 1);
        check(n + 1, next)?;
        u.set(n + 1, next);
    }
    for n in (lo + 1..=0).rev() {
        let prev = ((energy - coeffs.b(n)) * u.get(n) - coeffs.a(n + 1) * u.get(n + 1)) / coeffs.a(n);
        check(n - 1, prev)?;
        u.set(n - 1, prev);
    }
    Ok(Solution { energy, u })
}

/// Solves the eigenvalue equation on `[lo, hi]` from `u(0) = u0`,
/// `u(1) = u1`, propagating in both directions.
pub fn solve_difference_equation<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    u0: T,
    u1: T,
    lo: i64,
    hi: i64,
) -> Result<Solution<T>> {
    propagate(coeffs, energy, u0, u1, lo, hi, None)
}

/// `‖(H − E)u_l‖ / ‖u_l‖` for the truncation `u_l = 1_{[−l, l]}·u` of the
/// solution through `(u0, u1)`.
///
/// Coefficients must cover `[−l − 1, l + 2]`. Fails with
/// [`Error::OverflowGuard`] when the solution outgrows
/// [`Scalar::GROWTH_GUARD`] before reaching `±l`.
pub fn weyl_residual<T: Scalar>(coeffs: &CoefficientWindow<T>, energy: T, u0: T, u1: T, l: usize) -> Result<T> {
    if l < 2 {
        return Err(invalid("truncation length must be at least 2"));
    }
    if u0.is_zero() && u1.is_zero() {
        return Err(invalid("initial data must not vanish"));
    }
    let l = l as i64;
    coeffs.require(-l - 1, l + 2)?;
    let sol = propagate(coeffs, energy, u0, u1, -l - 1, l + 1, Some(T::GROWTH_GUARD))?;
    let truncated = sol.u.truncated(-l, l);
    let hu = apply_operator(&truncated, coeffs, -l - 1, l + 1)?;
    let residual = SiteVector::new(
        -l - 1,
        (-l - 1..=l + 1)
            .map(|n| hu.get(n) - energy * truncated.get(n))
            .collect(),
    );
    Ok(residual.norm() / truncated.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(lo: i64, hi: i64) -> CoefficientWindow<f64> {
        CoefficientWindow::constant(1.0, 0.0, lo, hi).unwrap()
    }

    #[test]
    fn laplacian_on_delta() {
        let hu = apply_operator(&SiteVector::delta(0), &free(-5, 6), -3, 3).unwrap();
        assert_eq!(hu.values(), &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        assert!((hu.norm() - 2f64.sqrt()).abs() < 1e-15);
        assert!(hu.norm() <= 3.0);
    }

    #[test]
    fn laplacian_on_constant() {
        let u = SiteVector::new(-10, vec![1.0; 21]);
        let hu = apply_operator(&u, &free(-10, 11), -5, 5).unwrap();
        assert!(hu.values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn rotation_solution_has_period_four() {
        let sol = solve_difference_equation(&free(-20, 20), 0.0, 1.0, 0.0, -12, 12).unwrap();
        for n in -12..=12i64 {
            let expect = match n.rem_euclid(4) {
                0 => 1.0,
                2 => -1.0,
                _ => 0.0,
            };
            assert_eq!(sol.u.get(n), expect, "site {n}");
        }
    }

    #[test]
    fn constant_solution_at_band_edge() {
        let sol = solve_difference_equation(&free(-20, 20), 2.0, 1.0, 1.0, -10, 10).unwrap();
        assert!(sol.u.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn zero_data_gives_zero() {
        let c = CoefficientWindow::periodic(&[1.0, 2.0, 0.5], &[0.3, -1.0], -30, 30).unwrap();
        let sol = solve_difference_equation(&c, 0.4, 0.0, 0.0, -20, 20).unwrap();
        assert!(sol.u.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn residual_of_general_solution() {
        let c = CoefficientWindow::periodic(&[1.0, 2.0, 0.5], &[0.3, -1.0], -30, 30).unwrap();
        let sol = solve_difference_equation(&c, 0.4, 0.2, -1.0, -20, 20).unwrap();
        assert!(sol.max_relative_residual(&c) <= 1e-10);
    }

    #[test]
    fn weyl_residual_small_in_band() {
        let r = weyl_residual(&free(-1002, 1002), 0.0, 1.0, 0.0, 1000).unwrap();
        assert!(r < 0.1, "{r}");
    }

    #[test]
    fn weyl_residual_preconditions() {
        assert!(weyl_residual(&free(-20, 20), 0.0, 0.0, 0.0, 10).is_err());
        assert!(weyl_residual(&free(-20, 20), 0.0, 1.0, 0.0, 1).is_err());
        assert!(matches!(
            weyl_residual(&free(-2000, 2000), 3.0, 1.0, 0.0, 1500),
            Err(Error::OverflowGuard { .. })
        ));
    }
}
