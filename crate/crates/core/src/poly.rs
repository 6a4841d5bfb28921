//! Dense complex polynomials and companion-matrix root finding.

use std::ops::{Add, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{hessenberg_eigenvalues, CMatrix};
use crate::scalar::Real;

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Poly { coeffs }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// `a + b z`.
    pub fn linear(a: Complex<T>, b: Complex<T>) -> Self {
        Poly { coeffs: vec![a, b] }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Degree after ignoring exactly-zero leading coefficients.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.re != T::zero() || c.im != T::zero())
    }

    pub fn leading(&self) -> Complex<T> {
        self.degree()
            .map(|d| self.coeffs[d])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::count(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Roots from the eigenvalues of the balanced companion matrix, each
    /// followed by at most a few Newton steps that are kept only when they
    /// reduce the residual.
    pub fn roots(&self) -> Result<Vec<Complex<T>>> {
        let deg = self
            .degree()
            .ok_or_else(|| Error::Domain("roots of the zero polynomial".into()))?;
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[deg];
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let mut c = CMatrix::zeros(deg);
        for i in 1..deg {
            c[(i, i - 1)] = one;
        }
        for i in 0..deg {
            c[(i, deg - 1)] = -self.coeffs[i] / lead;
        }
        if deg == 1 {
            return Ok(vec![c[(0, 0)]]);
        }
        c.balance();
        let mut roots = hessenberg_eigenvalues(c)?;
        let dp = self.derivative();
        for r in roots.iter_mut() {
            let mut res = self.eval(*r).norm();
            for _ in 0..3 {
                let d = dp.eval(*r);
                if d == zero {
                    break;
                }
                let cand = *r - self.eval(*r) / d;
                let cres = self.eval(cand).norm();
                if cres < res {
                    *r = cand;
                    res = cres;
                } else {
                    break;
                }
            }
        }
        Ok(roots)
    }
}

impl<T: Real> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl<T: Real> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}
