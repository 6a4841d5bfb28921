use std::ops::{Mul, MulAssign};

use num_complex::Complex;

use crate::scalar::Real;

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mat2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn real(a: T, b: T, c: T, d: T) -> Self {
        let r = |x| Complex::new(x, T::zero());
        Mat2::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Self::real(T::one(), T::zero(), T::zero(), T::one())
    }

    /// `diag(1, -1)`, the form preserved by U(1,1).
    pub fn j() -> Self {
        Self::real(T::one(), T::zero(), T::zero(), -T::one())
    }

    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn adjoint(&self) -> Self {
        Mat2::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == T::zero() {
            return None;
        }
        let inv = det.inv();
        Some(Mat2::new(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv))
    }

    pub fn scale(&self, s: T) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn frobenius_sq(&self) -> T {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    /// Largest singular value.
    ///
    /// Uses `σ² = (s + sqrt(s² - 4|det|²)) / 2` with `s = ‖M‖_F²`, which has
    /// no cancellation in the sum.
    pub fn norm(&self) -> T {
        let m = self.max_abs();
        if m == T::zero() || !m.is_finite() {
            return m;
        }
        // scale entries to O(1), then take the top eigenvalue of M*M in a
        // form that avoids the cancellation in s² - 4|det|²
        let inv = m.recip();
        let [a, b, c, d] = [self.a * inv, self.b * inv, self.c * inv, self.d * inv];
        let p = a.norm_sqr() + c.norm_sqr();
        let q = b.norm_sqr() + d.norm_sqr();
        let r = (a.conj() * b + c.conj() * d).norm();
        let half = (p - q) / T::lit(2.0);
        m * ((p + q) / T::lit(2.0) + half.hypot(r)).sqrt()
    }

    /// Smallest singular value, `|det| / σ_max`.
    pub fn min_singular(&self) -> T {
        let n = self.norm();
        if n == T::zero() {
            T::zero()
        } else {
            self.det().norm() / n
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    /// Entrywise distance in the max norm.
    pub fn max_diff(&self, other: &Self) -> T {
        (self.a - other.a)
            .norm()
            .max((self.b - other.b).norm())
            .max((self.c - other.c).norm())
            .max((self.d - other.d).norm())
    }

    /// `‖M* J M - J‖` in the entrywise max norm; zero for M ∈ U(1,1).
    pub fn u11_defect(&self) -> T {
        let j = Self::j();
        (self.adjoint() * j * *self).max_diff(&j)
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Mat2<T>;

    #[inline]
    fn mul(self, r: Mat2<T>) -> Mat2<T> {
        Mat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl<T: Real> MulAssign for Mat2<T> {
    fn mul_assign(&mut self, rhs: Mat2<T>) {
        *self = *self * rhs;
    }
}
