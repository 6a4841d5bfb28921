//! Periodic discriminants: exact coefficients and fast evaluation of the
//! normalized (real) discriminant along the circle.

use num_complex::Complex;
use serde::Serialize;

use crate::circle::Angle;
use crate::cocycle::ScaledProduct;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Real;
use crate::verblunsky::VerblunskyWord;

/// Largest word accepted by the coefficient pipeline.
pub const MAX_POLY_PERIOD: usize = 4096;

/// `T(z) = Tr A(α_p, z) ⋯ A(α_1, z)` as `exp(log_scale) · Σ c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantPoly<T> {
    coeffs: Vec<Complex<T>>,
    log_scale: T,
}

impl<T: Real> DiscriminantPoly<T> {
    pub fn period(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients up to the common factor `exp(log_scale)`.
    pub fn scaled_coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    /// Unscaled coefficients; may overflow for long words.
    pub fn coeffs(&self) -> Vec<Complex<T>> {
        let s = self.log_scale.exp();
        self.coeffs.iter().map(|&c| c * s).collect()
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs[self.period()] * self.log_scale.exp()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.as_poly().eval(z) * self.log_scale.exp()
    }

    /// The scaled polynomial; it has the same roots as `T`.
    pub fn as_poly(&self) -> Poly<T> {
        Poly::new(self.coeffs.clone())
    }
}

/// Accumulates the product with polynomial entries, renormalizing after
/// every factor so the coefficients stay in range.
pub fn discriminant_poly<T: Real>(word: &VerblunskyWord<T>) -> Result<DiscriminantPoly<T>> {
    let p = word.len();
    if p == 0 {
        return Err(Error::Domain("discriminant of an empty word".into()));
    }
    if p > MAX_POLY_PERIOD {
        return Err(Error::Size {
            what: "word length for the coefficient pipeline",
            got: p,
            limit: MAX_POLY_PERIOD,
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    // entries of the running product, ascending coefficients, length p+1
    let mut a = vec![zero; p + 1];
    let mut b = vec![zero; p + 1];
    let mut c = vec![zero; p + 1];
    let mut d = vec![zero; p + 1];
    a[0] = Complex::new(T::one(), T::zero());
    d[0] = a[0];
    let mut log_scale = T::zero();
    for (n, v) in word.coeffs().iter().enumerate() {
        let al = v.alpha();
        let alc = al.conj();
        // new = A · old, A = ρ⁻¹ [[z, -ᾱ], [-α z, 1]]
        for k in (0..=n + 1).rev() {
            let za = if k > 0 { a[k - 1] } else { zero };
            let zb = if k > 0 { b[k - 1] } else { zero };
            let (ck, dk) = (c[k], d[k]);
            a[k] = za - alc * ck;
            b[k] = zb - alc * dk;
            c[k] = ck - al * za;
            d[k] = dk - al * zb;
        }
        let mut m = T::zero();
        for k in 0..=n + 1 {
            m = m.max(a[k].norm()).max(b[k].norm()).max(c[k].norm()).max(d[k].norm());
        }
        let inv = m.recip();
        for k in 0..=n + 1 {
            a[k] = a[k] * inv;
            b[k] = b[k] * inv;
            c[k] = c[k] * inv;
            d[k] = d[k] * inv;
        }
        log_scale += m.ln() - v.rho().ln();
    }
    let coeffs = (0..=p).map(|k| a[k] + d[k]).collect();
    Ok(DiscriminantPoly { coeffs, log_scale })
}

/// `e^{-ipθ/2} T(e^{iθ})`: its real part `value` and the imaginary part
/// relative to the size of the monodromy, `residual`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedDiscriminant<T> {
    pub value: T,
    pub residual: T,
}

/// The normalized discriminant at a canonical angle `θ ∈ [-π, π)`; the
/// branch of `e^{-ipθ/2}` follows the canonical angle, so for odd `p` the
/// sign flips across `θ = ±π`.
pub fn normalized_discriminant<T: Real>(
    word: &VerblunskyWord<T>,
    theta: Angle<T>,
) -> Result<NormalizedDiscriminant<T>> {
    if word.is_empty() {
        return Err(Error::Domain("discriminant of an empty word".into()));
    }
    Ok(complex_lifted(word, theta.radians()))
}

/// Same as [`normalized_discriminant`] but for any real `θ`, continuous in
/// `θ` (period `2π` for even `p`, antiperiod `2π` for odd `p`).
pub(crate) fn complex_lifted<T: Real>(word: &VerblunskyWord<T>, theta: T) -> NormalizedDiscriminant<T> {
    let z = Complex::from_polar(T::one(), theta);
    let p = word.len();
    let mut acc = ScaledProduct::default();
    for a in word.coeffs() {
        acc.push(a.transfer(z));
    }
    acc.renormalize();
    let phase = Complex::from_polar(T::one(), -theta * T::count(p) / T::lit(2.0));
    let t = acc.m.trace() * phase;
    let scale = acc.log_scale.exp();
    let size = acc.m.norm().max(T::min_positive_value());
    NormalizedDiscriminant {
        value: t.re * scale,
        residual: t.im.abs() / size.max(scale.recip()),
    }
}

/// `D = mantissa · exp(log_scale)`, keeping the sign and magnitude of very
/// large values without overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal<T> {
    pub mantissa: T,
    pub log_scale: T,
}

impl<T: Real> ScaledReal<T> {
    pub fn value(&self) -> T {
        self.mantissa * self.log_scale.exp()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa > T::zero()
    }

    /// `ln |D|`.
    pub fn ln_abs(&self) -> T {
        self.mantissa.abs().ln() + self.log_scale
    }

    /// `|D| > x` for positive `x`.
    pub fn abs_exceeds(&self, x: T) -> bool {
        self.ln_abs() > x.ln()
    }
}

/// Evaluation of a grid point by [`RealDiscriminant::sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub theta: T,
    pub positive: bool,
    /// Number of zeros of `D` in the lifted angle range below `theta`
    /// (offset by a constant), when `theta` is certainly in a gap.
    pub count: Option<i64>,
    /// The same formula evaluated anywhere; inside bands it can be off by
    /// a little, which is enough to tell where zeros crowd together.
    pub estimate: Option<i64>,
}

/// The normalized discriminant of a real word evaluated through the cone
/// coordinates: each factor is `diag(d_j, 1/d_j) · R(θ/2)` with
/// `d_j = sqrt((1-α_j)/(1+α_j))`, a real `SL(2)` matrix, so the product is
/// real and its trace is exactly `D`.
#[derive(Debug, Clone)]
pub struct RealDiscriminant<T> {
    diag: Vec<(T, T)>,
}

const RENORM: usize = 16;

#[inline]
fn quadrant<T: Real>(x: T, y: T) -> u8 {
    let z = T::zero();
    if x > z && y >= z {
        0
    } else if x <= z && y > z {
        1
    } else if x < z && y <= z {
        2
    } else {
        3
    }
}

impl<T: Real> RealDiscriminant<T> {
    /// `None` unless every coefficient is real.
    pub fn new(word: &VerblunskyWord<T>) -> Option<Self> {
        if word.is_empty() || !word.is_real() {
            return None;
        }
        let diag = word
            .coeffs()
            .iter()
            .map(|v| {
                let a = v.alpha().re;
                ((T::one() - a) / v.rho(), (T::one() + a) / v.rho())
            })
            .collect();
        Some(RealDiscriminant { diag })
    }

    pub fn period(&self) -> usize {
        self.diag.len()
    }

    /// `D` at any real `θ` (continuous lift).
    pub fn eval(&self, theta: T) -> ScaledReal<T> {
        let (c, s) = ((theta / T::lit(2.0)).cos(), (theta / T::lit(2.0)).sin());
        let (mut m00, mut m01, mut m10, mut m11) = (T::one(), T::zero(), T::zero(), T::one());
        let mut log_scale = T::zero();
        // scales are multiplied up and logged in batches
        let mut pending = T::one();
        let big = T::max_value().sqrt();
        for (j, &(d1, d2)) in self.diag.iter().enumerate() {
            let r00 = c * m00 - s * m10;
            let r01 = c * m01 - s * m11;
            let r10 = s * m00 + c * m10;
            let r11 = s * m01 + c * m11;
            m00 = d1 * r00;
            m01 = d1 * r01;
            m10 = d2 * r10;
            m11 = d2 * r11;
            if j % RENORM == RENORM - 1 {
                let mx = m00.abs().max(m01.abs()).max(m10.abs()).max(m11.abs());
                let inv = mx.recip();
                m00 *= inv;
                m01 *= inv;
                m10 *= inv;
                m11 *= inv;
                pending *= mx;
                if pending > big || pending < big.recip() {
                    log_scale += pending.ln();
                    pending = T::one();
                }
            }
        }
        ScaledReal {
            mantissa: m00 + m11,
            log_scale: log_scale + pending.ln(),
        }
    }

    /// Evaluates `D` at `θ ∈ [-π, π)` and, when `|D| > 2` with a margin
    /// well above rounding, the zero count below `θ`.
    ///
    /// The count comes from the lifted rotation of the second column: the
    /// translation number `τ` of the lifted product is a multiple `jπ` of
    /// `π` in a gap, it differs from the rotation of any single vector by
    /// less than `π`, and `sign D = (-1)^j`. Zeros of `D` sit where `τ`
    /// crosses `π/2 + kπ`, so `j` counts them.
    pub fn sample(&self, theta: T) -> Sample<T> {
        let phi = theta / T::lit(2.0);
        let (c, s) = (phi.cos(), phi.sin());
        let (mut m00, mut m01, mut m10, mut m11) = (T::one(), T::zero(), T::zero(), T::one());
        let mut log_scale = T::zero();
        // scales are multiplied up and logged in batches
        let mut pending = T::one();
        let big = T::max_value().sqrt();
        let mut q = 1u8;
        let mut turns: i64 = 0;
        for (j, &(d1, d2)) in self.diag.iter().enumerate() {
            let r00 = c * m00 - s * m10;
            let r01 = c * m01 - s * m11;
            let r10 = s * m00 + c * m10;
            let r11 = s * m01 + c * m11;
            m00 = d1 * r00;
            m01 = d1 * r01;
            m10 = d2 * r10;
            m11 = d2 * r11;
            let nq = quadrant(m01, m11);
            match (nq + 4 - q) & 3 {
                1 => turns += 1,
                3 => turns -= 1,
                _ => {}
            }
            q = nq;
            if j % RENORM == RENORM - 1 {
                let mx = m00.abs().max(m01.abs()).max(m10.abs()).max(m11.abs());
                let inv = mx.recip();
                m00 *= inv;
                m01 *= inv;
                m10 *= inv;
                m11 *= inv;
                pending *= mx;
                if pending > big || pending < big.recip() {
                    log_scale += pending.ln();
                    pending = T::one();
                }
            }
        }
        let tr = m00 + m11;
        let d = ScaledReal {
            mantissa: tr,
            log_scale: log_scale + pending.ln(),
        };
        let mx = m00.abs().max(m01.abs()).max(m10.abs()).max(m11.abs());
        let noise = T::lit(64.0) * T::count(self.period()) * T::epsilon() * mx;
        let hyperbolic = tr.abs() > T::lit(2.0) * noise && d.abs_exceeds(T::lit(2.0 + 1e-9));
        let half_pi = T::FRAC_PI_2();
        let mut off = m11.atan2(m01) - T::count(q as usize) * half_pi;
        if off < T::zero() {
            off += T::two_pi();
        }
        let f = T::lit(turns as f64) * half_pi + off;
        let base = (f / T::PI()).floor().to_i64().unwrap_or(0);
        let even = tr > T::zero();
        let estimate = if (base.rem_euclid(2) == 0) == even { base } else { base + 1 };
        Sample {
            theta,
            positive: tr > T::zero(),
            count: hyperbolic.then_some(estimate),
            estimate: Some(estimate),
        }
    }
}
