use std::ops::Mul;

use crate::Scalar;

/// Row-major 2×2 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [T; 4],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 {
            m: [a11, a12, a21, a22],
        }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn diag(d1: T, d2: T) -> Self {
        Self::new(d1, T::zero(), T::zero(), d2)
    }

    pub fn det(&self) -> T {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    pub fn trace(&self) -> T {
        self.m[0] + self.m[3]
    }

    pub fn frobenius(&self) -> T {
        let s = self.max_abs();
        if s.is_zero() {
            return T::zero();
        }
        let sum: T = self.m.iter().map(|&x| (x / s) * (x / s)).sum();
        s * sum.sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        Mat2 {
            m: self.m.map(|x| x * s),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Self::new(a - e, b - f, c - g, d - h)
    }

    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::new(a, c, b, d)
    }

    /// Inverse by the adjugate formula. `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() || !det.is_finite() {
            return None;
        }
        let [a, b, c, d] = self.m;
        Some(Self::new(d / det, -b / det, -c / det, a / det))
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        let [a, b, c, d] = self.m;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    /// Singular values `(σ_max, σ_min)`.
    pub fn singular_values(&self) -> (T, T) {
        let s = self.max_abs();
        if s.is_zero() {
            return (T::zero(), T::zero());
        }
        let n = self.scale(s.recip());
        let (p, q, r) = n.gram();
        let half = T::lit(0.5);
        let mean = half * (p + r);
        let radius = (half * (p - r)).hypot(q);
        let big = (mean + radius).sqrt();
        // σ_min from the determinant avoids cancellation in mean − radius.
        let small = if big.is_zero() { T::zero() } else { n.det().abs() / big };
        (s * big, s * small)
    }

    /// Spectral (operator 2-) norm.
    pub fn op_norm(&self) -> T {
        self.singular_values().0
    }

    /// Unit right singular vector for `σ_max`.
    pub fn top_right_singular_vector(&self) -> [T; 2] {
        let s = self.max_abs();
        if s.is_zero() {
            return [T::one(), T::zero()];
        }
        let (p, q, r) = self.scale(s.recip()).gram();
        let angle = T::lit(0.5) * (T::lit(2.0) * q).atan2(p - r);
        [angle.cos(), angle.sin()]
    }

    /// Entries `(p, q, r)` of `AᵀA = [[p, q], [q, r]]`.
    fn gram(&self) -> (T, T, T) {
        let [a, b, c, d] = self.m;
        (a * a + c * c, a * b + c * d, b * b + d * d)
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Mat2<T>;

    fn mul(self, o: Mat2<T>) -> Mat2<T> {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}
