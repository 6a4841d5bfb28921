use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A coefficient `α` in the open unit disk, with `ρ = sqrt(1 - |α|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verblunsky<T> {
    alpha: Complex<T>,
    rho: T,
}

impl<T: Real> Verblunsky<T> {
    pub fn new(alpha: Complex<T>) -> Result<Self> {
        let m2 = alpha.norm_sqr();
        if !(m2 < T::one()) {
            return Err(Error::InvalidCoefficient(format!(
                "|alpha| = {} is not < 1",
                m2.sqrt()
            )));
        }
        Ok(Verblunsky {
            alpha,
            rho: (T::one() - m2).sqrt(),
        })
    }

    pub fn real(alpha: T) -> Result<Self> {
        Self::new(Complex::new(alpha, T::zero()))
    }

    #[inline]
    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    #[inline]
    pub fn rho(&self) -> T {
        self.rho
    }

    /// Real with `α ∈ (0, 1)`.
    pub fn is_real_positive(&self) -> bool {
        self.alpha.im == T::zero() && self.alpha.re > T::zero()
    }
}

impl<T: Real> fmt::Display for Verblunsky<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.alpha.re, self.alpha.im);
        if im == T::zero() {
            write!(f, "{re}")
        } else if im < T::zero() {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

/// A finite ordered list of Verblunsky coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerblunskyWord<T> {
    coeffs: Vec<Verblunsky<T>>,
}

impl<T: Real> VerblunskyWord<T> {
    pub fn new(coeffs: Vec<Verblunsky<T>>) -> Self {
        VerblunskyWord { coeffs }
    }

    pub fn from_complex(alphas: impl IntoIterator<Item = Complex<T>>) -> Result<Self> {
        alphas
            .into_iter()
            .map(Verblunsky::new)
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn from_reals(alphas: impl IntoIterator<Item = T>) -> Result<Self> {
        Self::from_complex(alphas.into_iter().map(|a| Complex::new(a, T::zero())))
    }

    /// `n` copies of `alpha`.
    pub fn constant(alpha: T, n: usize) -> Result<Self> {
        Ok(Self::new(vec![Verblunsky::real(alpha)?; n]))
    }

    pub fn coeffs(&self) -> &[Verblunsky<T>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff every coefficient is real and in `(0, 1)`.
    pub fn is_real_positive(&self) -> bool {
        !self.coeffs.is_empty() && self.coeffs.iter().all(Verblunsky::is_real_positive)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.alpha.im == T::zero())
    }

    /// Smallest `|α|` in the word.
    pub fn min_modulus(&self) -> Option<T> {
        self.coeffs.iter().map(|c| c.alpha.norm()).reduce(T::min)
    }

    /// Word rotated left by `k` places.
    pub fn rotated(&self, k: usize) -> Self {
        let mut c = self.coeffs.clone();
        if !c.is_empty() {
            let k = k % c.len();
            c.rotate_left(k);
        }
        Self::new(c)
    }

    /// The word repeated `times` times.
    pub fn repeated(&self, times: usize) -> Self {
        let mut c = Vec::with_capacity(self.len() * times);
        for _ in 0..times {
            c.extend_from_slice(&self.coeffs);
        }
        Self::new(c)
    }

    /// Periodic extension truncated to `n` letters.
    pub fn cycled(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().copied().cycle().take(n).collect())
    }
}

impl<T: Real> fmt::Display for VerblunskyWord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
