use super::Mat2;
use crate::error::{invalid, Result};
use crate::operator::CoefficientWindow;
use crate::Scalar;

/// Which one-step matrix the cocycle is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `M^E`, acting on `(u(n), u(n−1))`; determinant `a(n)/a(n+1)`.
    Plain,
    /// `M̃^E`, acting on `(u(n), a(n)u(n−1))`; determinant one.
    Sl2,
}

// Site convention: the one-step matrix at site n reads b(n), a(n), a(n+1)
// and maps (u(n), u(n-1)) to (u(n+1), u(n)). M(ω) itself is the site-1
// matrix, so M(k, T^j ω) multiplies sites j+1..=j+k.

#[inline]
pub(crate) fn one_step<T: Scalar>(c: &CoefficientWindow<T>, energy: T, n: i64, variant: Variant) -> Mat2<T> {
    let next = c.a(n + 1);
    let diag = (energy - c.b(n)) / next;
    match variant {
        Variant::Plain => Mat2::new(diag, -c.a(n) / next, T::one(), T::zero()),
        Variant::Sl2 => Mat2::new(diag, -next.recip(), next, T::zero()),
    }
}

/// `M^E` at site `n`: `[[(E − b(n))/a(n+1), −a(n)/a(n+1)], [1, 0]]`.
pub fn transfer_matrix<T: Scalar>(coeffs: &CoefficientWindow<T>, energy: T, n: i64) -> Result<Mat2<T>> {
    coeffs.require(n, n + 1)?;
    Ok(one_step(coeffs, energy, n, Variant::Plain))
}

/// `M̃^E` at site `n`: `[[(E − b(n))/a(n+1), −1/a(n+1)], [a(n+1), 0]]`.
pub fn sl2_transfer_matrix<T: Scalar>(coeffs: &CoefficientWindow<T>, energy: T, n: i64) -> Result<Mat2<T>> {
    coeffs.require(n, n + 1)?;
    Ok(one_step(coeffs, energy, n, Variant::Sl2))
}

/// Renormalised product `2^exponent·B`, with `‖B‖_F` kept in `[0.5, 2]`.
///
/// Rescaling by powers of two is exact, so `B` carries only the rounding of
/// the multiplications. The accumulator also tracks `log|det|` of the
/// factors so the small singular value stays available after `B` has
/// become numerically rank one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CocycleAccumulator<T> {
    pub unit: Mat2<T>,
    pub exponent: i64,
    pub steps: i64,
    log_det: T,
    // Product of |det| not yet folded into `log_det`; saves a logarithm per
    // step.
    det_pending: T,
}

impl<T: Scalar> Default for CocycleAccumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CocycleAccumulator<T> {
    pub fn new() -> Self {
        CocycleAccumulator {
            unit: Mat2::identity(),
            exponent: 0,
            steps: 0,
            log_det: T::zero(),
            det_pending: T::one(),
        }
    }

    /// Left-multiplies by one more factor.
    #[inline]
    pub fn push(&mut self, m: Mat2<T>) {
        self.unit = m * self.unit;
        self.det_pending = self.det_pending * m.det().abs();
        let p = self.det_pending;
        if !(p >= T::lit(1e-8) && p <= T::lit(1e8)) {
            self.fold_det();
        }
        self.steps += 1;
        self.renormalize();
    }

    fn fold_det(&mut self) {
        self.log_det = self.log_det + self.det_pending.ln();
        self.det_pending = T::one();
    }

    #[inline]
    fn renormalize(&mut self) {
        let [a, b, c, d] = self.unit.m;
        let sq = a * a + b * b + c * c + d * d;
        if sq >= T::lit(0.25) && sq <= T::lit(4.0) {
            return;
        }
        let f = self.unit.frobenius();
        if f.is_zero() || !f.is_finite() {
            return;
        }
        let k = f.log2().floor().to_i64().unwrap_or(0);
        self.unit = self.unit.scale(pow2(-k));
        self.exponent += k;
    }

    /// `s` in `e^s·B`.
    pub fn log_scale(&self) -> T {
        T::from_i64_lossy(self.exponent) * T::LN_2()
    }

    /// `log‖product‖₂`.
    pub fn log_norm(&self) -> T {
        self.log_scale() + self.unit.op_norm().ln()
    }

    pub fn log_frobenius(&self) -> T {
        self.log_scale() + self.unit.frobenius().ln()
    }

    /// `log|det|` of the product, summed over the factors.
    pub fn log_det(&self) -> T {
        self.log_det + self.det_pending.ln()
    }

    /// `log σ_min` of the product, from the tracked determinant.
    pub fn log_sigma_min(&self) -> T {
        self.log_det() - self.log_norm()
    }

    /// `det` of the de-renormalised product, `4^exponent·det B`.
    pub fn det(&self) -> T {
        pow2::<T>(2 * self.exponent) * self.unit.det()
    }

    /// The exact product; overflows once the exponent leaves the range of `T`.
    pub fn matrix(&self) -> Mat2<T> {
        self.unit.scale(pow2(self.exponent))
    }

    /// `other · self`.
    pub fn then(&self, other: &Self) -> Self {
        let mut out = CocycleAccumulator {
            unit: other.unit * self.unit,
            exponent: self.exponent + other.exponent,
            steps: self.steps + other.steps,
            log_det: self.log_det() + other.log_det(),
            det_pending: T::one(),
        };
        out.renormalize();
        out
    }
}

/// `2^k`, exact while representable.
pub(crate) fn pow2<T: Scalar>(k: i64) -> T {
    let k = k.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    T::lit(2.0).powi(k)
}

/// Sites `[lo, hi]` whose coefficients `cocycle_product` reads.
pub fn required_sites(steps: i64, base_offset: i64) -> (i64, i64) {
    if steps >= 0 {
        (base_offset + 1, base_offset + steps.max(1) + 1)
    } else {
        (base_offset + steps + 1, base_offset + 1)
    }
}

/// `M(n, T^k ω)` for `n = steps`, `k = base_offset`.
///
/// Positive `steps` multiplies sites `k+1..=k+n` left to right in time;
/// negative `steps` multiplies the inverses of sites `k, k−1, …, k+n+1`.
pub fn cocycle_product<T: Scalar>(
    coeffs: &CoefficientWindow<T>,
    energy: T,
    steps: i64,
    base_offset: i64,
    variant: Variant,
) -> Result<CocycleAccumulator<T>> {
    let (lo, hi) = required_sites(steps, base_offset);
    coeffs.require(lo, hi)?;
    let mut acc = CocycleAccumulator::new();
    if steps >= 0 {
        for n in base_offset + 1..=base_offset + steps {
            acc.push(one_step(coeffs, energy, n, variant));
        }
    } else {
        for n in (base_offset + steps + 1..=base_offset).rev() {
            let m = one_step(coeffs, energy, n, variant)
                .inverse()
                .ok_or_else(|| invalid(format!("singular transfer matrix at site {n}")))?;
            acc.push(m);
        }
        acc.steps = steps;
    }
    Ok(acc)
}
