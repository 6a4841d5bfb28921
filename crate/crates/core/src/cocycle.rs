//! Products of transfer matrices: growth, the cone certificate, Lyapunov
//! exponents and invariant splittings of periodic cocycles.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::CirclePoint;
use crate::ensemble::SingleSiteMeasure;
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::rng::IndexedStream;
use crate::scalar::Real;
use crate::transfer::{cone_constants, cone_entries, in_gap, principal_root, ConeConstants};
use crate::verblunsky::{Verblunsky, VerblunskyWord};

/// Renormalization period for long products.
pub const RENORM_EVERY: usize = 32;

/// `A(α_n, z) ⋯ A(α_1, z)`; the first coefficient acts first.
pub fn product<T: Real>(word: &VerblunskyWord<T>, z: Complex<T>) -> Mat2<T> {
    word.coeffs()
        .iter()
        .fold(Mat2::identity(), |m, a| a.transfer(z) * m)
}

/// Running product kept as `exp(log_scale) · m`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledProduct<T> {
    pub m: Mat2<T>,
    pub log_scale: T,
    steps: usize,
}

impl<T: Real> Default for ScaledProduct<T> {
    fn default() -> Self {
        ScaledProduct {
            m: Mat2::identity(),
            log_scale: T::zero(),
            steps: 0,
        }
    }
}

impl<T: Real> ScaledProduct<T> {
    pub fn push(&mut self, factor: Mat2<T>) {
        self.m = factor * self.m;
        self.steps += 1;
        if self.steps % RENORM_EVERY == 0 {
            self.renormalize();
        }
    }

    pub fn renormalize(&mut self) {
        let s = self.m.max_abs();
        if s > T::zero() && s.is_finite() {
            self.m = self.m.scale(s.recip());
            self.log_scale += s.ln();
        }
    }

    pub fn log_norm(&self) -> T {
        self.log_scale + self.m.norm().ln()
    }
}

/// `log ‖A(α_n, z) ⋯ A(α_1, z)‖` for every prefix of a word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthTrace<T> {
    pub log_norms: Vec<T>,
    /// `log κ` when the word and `z` satisfy the cone criterion, i.e. the
    /// per-step rate the log-norms are guaranteed to beat.
    pub kappa_floor: Option<T>,
}

pub fn growth_trace<T: Real>(word: &VerblunskyWord<T>, z: &CirclePoint<T>) -> GrowthTrace<T> {
    let zv = z.value();
    let mut acc = ScaledProduct::default();
    let log_norms = word
        .coeffs()
        .iter()
        .map(|a| {
            acc.push(a.transfer(zv));
            acc.log_norm()
        })
        .collect();
    let kappa_floor = if word.is_real_positive() {
        let a_min = word.min_modulus().unwrap_or_else(T::zero);
        hyperbolicity_certificate(a_min, z)
            .constants
            .map(|c| c.kappa.ln())
    } else {
        None
    };
    GrowthTrace {
        log_norms,
        kappa_floor,
    }
}

/// Outcome of the uniform-hyperbolicity test for all words with
/// coefficients in `[a_min, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate<T> {
    pub holds: bool,
    pub constants: Option<ConeConstants<T>>,
}

pub fn hyperbolicity_certificate<T: Real>(a_min: T, z: &CirclePoint<T>) -> Certificate<T> {
    let none = Certificate {
        holds: false,
        constants: None,
    };
    if !(a_min > T::zero() && a_min < T::one()) || !in_gap(a_min, z.theta()) {
        return none;
    }
    match principal_root(z, a_min).and_then(|w| cone_constants(a_min, w)) {
        Ok(c) => Certificate {
            holds: true,
            constants: Some(c),
        },
        Err(_) => none,
    }
}

/// Orbit of a cone vector under the cone-coordinate matrices `B(α_k, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeOrbit<T> {
    pub constants: ConeConstants<T>,
    /// `log y_k` for `k = 0..=n` (entry 0 is the start vector).
    pub log_y: Vec<T>,
    /// Index of the first step violating `y > C|x|` or `y_k > κ y_{k-1}`.
    pub first_violation: Option<usize>,
}

impl<T: Real> ConeOrbit<T> {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Iterates `v_k = B(α_k, w) v_{k-1}` from `v0 = (x, y)` and records every
/// step. The vector is rescaled after each step (both conditions are
/// homogeneous), so words of any length are fine.
pub fn cone_orbit<T: Real>(
    word: &VerblunskyWord<T>,
    a_min: T,
    z: &CirclePoint<T>,
    v0: [T; 2],
) -> Result<ConeOrbit<T>> {
    if !word.is_real_positive() {
        return Err(Error::Domain(
            "cone orbit needs a nonempty word of real coefficients in (0,1)".into(),
        ));
    }
    if word.coeffs().iter().any(|c| c.alpha().re < a_min) {
        return Err(Error::Domain(format!(
            "word has a coefficient below A = {a_min}"
        )));
    }
    let w = principal_root(z, a_min)?;
    let k = cone_constants(a_min, w)?;
    let (mut x, mut y) = (v0[0], v0[1]);
    if !(y > k.c * x.abs()) {
        return Err(Error::Domain(format!(
            "start vector ({x}, {y}) is outside the cone y > {}|x|",
            k.c
        )));
    }
    let mut log_y = Vec::with_capacity(word.len() + 1);
    let mut shift = y.ln();
    log_y.push(shift);
    x = x / y;
    y = T::one();
    let mut first_violation = None;
    for (i, a) in word.coeffs().iter().enumerate() {
        let b = cone_entries(a.alpha().re, a.rho(), w);
        let nx = b[0][0] * x + b[0][1] * y;
        let ny = b[1][0] * x + b[1][1] * y;
        if first_violation.is_none() && !(ny > k.c * nx.abs() && ny > k.kappa * y) {
            first_violation = Some(i + 1);
        }
        shift += ny.abs().ln();
        log_y.push(shift);
        x = nx / ny.abs();
        y = ny / ny.abs();
    }
    Ok(ConeOrbit {
        constants: k,
        log_y,
        first_violation,
    })
}

/// True iff every iterate stays in the cone and grows by more than `κ`.
pub fn cone_orbit_check<T: Real>(
    word: &VerblunskyWord<T>,
    a_min: T,
    z: &CirclePoint<T>,
    v0: [T; 2],
) -> Result<bool> {
    cone_orbit(word, a_min, z, v0).map(|o| o.holds())
}

/// Monte Carlo estimate of the Lyapunov exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate<T> {
    pub value: T,
    pub std_error: T,
    pub n: usize,
    pub trials: usize,
}

/// `(1/n) log ‖A_z^n‖` for one trial: stream `trial` of the seed, sites
/// `0..n`.
pub fn lyapunov_sample<T: Real>(
    measure: &SingleSiteMeasure<T>,
    z: Complex<T>,
    n: usize,
    stream: IndexedStream,
) -> T {
    let mut acc = ScaledProduct::default();
    for i in 0..n {
        let a: Verblunsky<T> = measure.sample(stream.uniform(i as i64));
        acc.push(a.transfer(z));
    }
    acc.log_norm() / T::count(n)
}

/// Average of [`lyapunov_sample`] over independent trials. Trials run in
/// parallel; results are gathered by trial index and summed in order, so
/// the estimate is bit-reproducible.
pub fn lyapunov_estimate<T: Real>(
    measure: &SingleSiteMeasure<T>,
    z: Complex<T>,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<LyapunovEstimate<T>> {
    if n == 0 || trials == 0 {
        return Err(Error::Domain("lyapunov_estimate needs n >= 1 and trials >= 1".into()));
    }
    let samples: Vec<T> = (0..trials)
        .into_par_iter()
        .map(|t| lyapunov_sample(measure, z, n, IndexedStream::new(seed, t as u64)))
        .collect();
    let k = T::count(trials);
    let mean = samples.iter().copied().sum::<T>() / k;
    let std_error = if trials > 1 {
        let var = samples.iter().map(|&s| (s - mean) * (s - mean)).sum::<T>() / (k - T::one());
        (var / k).sqrt()
    } else {
        T::zero()
    };
    Ok(LyapunovEstimate {
        value: mean,
        std_error,
        n,
        trials,
    })
}

/// Stable and unstable directions of a hyperbolic periodic monodromy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting<T> {
    pub stable_dir: [Complex<T>; 2],
    pub unstable_dir: [Complex<T>; 2],
    pub stable_eigenvalue: Complex<T>,
    pub unstable_eigenvalue: Complex<T>,
    /// `|λ_s|^{1/p}`.
    pub contraction_rate: T,
    pub normalized_trace: T,
}

fn unit<T: Real>(v: [Complex<T>; 2]) -> [Complex<T>; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// `|v × u| / (|v| |u|)`, the sine of the projective angle.
fn projective_gap<T: Real>(v: [Complex<T>; 2], u: [Complex<T>; 2]) -> T {
    let cross = (v[0] * u[1] - v[1] * u[0]).norm();
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    cross / (nv * nu)
}

fn eigenvector<T: Real>(m: &Mat2<T>, mu: Complex<T>) -> [Complex<T>; 2] {
    // two candidate kernels of M - μ; keep the larger one
    let v1 = [m.b, mu - m.a];
    let v2 = [mu - m.d, m.c];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    unit(if n1 >= n2 { v1 } else { v2 })
}

pub fn splitting_periodic<T: Real>(word: &VerblunskyWord<T>, z: &CirclePoint<T>) -> Result<Splitting<T>> {
    let p = word.len();
    if p == 0 {
        return Err(Error::Domain("splitting of an empty word".into()));
    }
    let m = product(word, z.value());
    let half = Complex::from_polar(T::one(), -z.theta() * T::count(p) / T::lit(2.0));
    let d = (m.trace() * half).re;
    if !(d.abs() > T::lit(2.0)) {
        return Err(Error::NotHyperbolic(d.to_f64().unwrap_or(f64::NAN)));
    }
    // eigenvalues of the normalized monodromy are real: (d ± sqrt(d²-4))/2
    let s = (d * d - T::lit(4.0)).sqrt();
    let big = if d > T::zero() { (d + s) / T::lit(2.0) } else { (d - s) / T::lit(2.0) };
    let small = big.recip();
    let phase = half.conj();
    let mu_u = phase * big;
    let mu_s = phase * small;
    let unstable_dir = eigenvector(&m, mu_u);
    let stable_dir = eigenvector(&m, mu_s);
    for v in [unstable_dir, stable_dir] {
        let g = projective_gap(v, m.apply(v));
        if g > T::tol(1e-9) {
            return Err(Error::NumericalFailure(format!(
                "eigen-direction not invariant under the monodromy (sin angle {g})"
            )));
        }
    }
    Ok(Splitting {
        stable_dir,
        unstable_dir,
        stable_eigenvalue: mu_s,
        unstable_eigenvalue: mu_u,
        contraction_rate: small.abs().powf(T::count(p).recip()),
        normalized_trace: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::SingleSiteMeasure;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn word(a: &[f64]) -> VerblunskyWord<f64> {
        VerblunskyWord::from_reals(a.iter().copied()).unwrap()
    }

    #[test]
    fn empty_product_is_identity() {
        let m = product(&word(&[]), C::new(0.0, 1.0));
        assert_eq!(m, Mat2::identity());
        assert_eq!(m.trace(), C::new(2.0, 0.0));
    }

    #[test]
    fn constant_word_norm() {
        let m = product(&VerblunskyWord::constant(0.5, 10).unwrap(), C::new(1.0, 0.0));
        assert!((m.norm() / 243.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn growth_constant_hyperbolic_and_elliptic() {
        let w = VerblunskyWord::constant(0.5, 400).unwrap();
        let g = growth_trace(&w, &CirclePoint::from_angle(0.0));
        for (n, l) in g.log_norms.iter().enumerate() {
            assert!((l - (n + 1) as f64 * 3f64.sqrt().ln()).abs() < 1e-8);
        }
        assert!(g.kappa_floor.is_some());
        let g = growth_trace(&w, &CirclePoint::from_angle(std::f64::consts::PI));
        let one = Verblunsky::real(0.5).unwrap().transfer(C::new(-1.0, 0.0)).norm().ln();
        assert!(g.log_norms.iter().all(|&l| l <= one + 1e-12));
        assert!(g.kappa_floor.is_none());
        let g = growth_trace(&VerblunskyWord::constant(0.0f64, 50).unwrap(), &CirclePoint::from_angle(1.0));
        assert!(g.log_norms.iter().all(|&l| l.abs() < 1e-14));
    }

    #[test]
    fn certificate_examples() {
        let c = hyperbolicity_certificate(0.5, &CirclePoint::from_angle(0.0));
        assert!(c.holds);
        assert!((c.constants.unwrap().kappa - 3f64.sqrt()).abs() < 1e-12);
        let edge = CirclePoint::from_angle(std::f64::consts::FRAC_PI_3);
        assert!(!hyperbolicity_certificate(0.5, &edge).holds);
        assert!(!hyperbolicity_certificate(0.5, &CirclePoint::from_angle(std::f64::consts::PI)).holds);
    }

    #[test]
    fn cone_orbit_examples() {
        let w = word(&[0.4, 0.7, 0.35, 0.9]);
        let z = CirclePoint::from_angle(0.3);
        assert!(cone_orbit_check(&w, 0.35, &z, [0.0, 1.0]).unwrap());
        let c = cone_constants(0.35, principal_root(&z, 0.35).unwrap()).unwrap().c;
        let bad = cone_orbit_check(&w, 0.35, &z, [1.0 / c + 1e-3, 1.0]);
        assert!(matches!(bad, Err(Error::Domain(_))));
        assert!(cone_orbit_check(&w, 0.4, &z, [0.0, 1.0]).is_err());
        assert!(cone_orbit_check(&w, 0.35, &CirclePoint::from_angle(2.0), [0.0, 1.0]).is_err());
    }

    #[test]
    fn lyapunov_constant_measures() {
        let one = C::new(1.0, 0.0);
        let m = SingleSiteMeasure::atoms(vec![(C::new(0.5, 0.0), 1.0)]).unwrap();
        let e = lyapunov_estimate(&m, one, 2000, 2, 1).unwrap();
        assert!((e.value - 0.5 * 3f64.ln()).abs() < 1e-3);
        let e = lyapunov_estimate(&m, C::new(-1.0, 0.0), 4000, 2, 1).unwrap();
        assert!(e.value.abs() < 5e-3);
        let m = SingleSiteMeasure::atoms(vec![(C::new(0.6, 0.0), 1.0)]).unwrap();
        let e = lyapunov_estimate(&m, one, 2000, 2, 1).unwrap();
        assert!((e.value - 2f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn lyapunov_reproducible() {
        let m = SingleSiteMeasure::uniform(0.2, 0.7).unwrap();
        let z = C::from_polar(1.0, 2.0);
        let a = lyapunov_estimate(&m, z, 300, 8, 42).unwrap();
        let b = lyapunov_estimate(&m, z, 300, 8, 42).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a.value >= -3.0 * a.std_error);
    }

    #[test]
    fn splitting_examples() {
        let s = splitting_periodic(&word(&[0.5]), &CirclePoint::from_angle(0.0)).unwrap();
        let u = s.unstable_dir;
        assert!((u[0] + u[1]).norm() < 1e-12);
        let st = s.stable_dir;
        assert!((st[0] - st[1]).norm() < 1e-12);
        assert!((s.stable_eigenvalue * s.unstable_eigenvalue).norm() - 1.0 < 1e-10);
        assert!(matches!(
            splitting_periodic(&word(&[0.5]), &CirclePoint::from_angle(std::f64::consts::PI)),
            Err(Error::NotHyperbolic(_))
        ));
        let s = splitting_periodic(&word(&[0.6, 0.6]), &CirclePoint::from_angle(0.0)).unwrap();
        assert!((s.contraction_rate - 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn det_of_product_is_z_to_the_n(
            alphas in prop::collection::vec((-0.6..0.6f64, -0.6..0.6f64), 0..40),
            t in -3.14..3.14f64,
        ) {
            let w = VerblunskyWord::from_complex(alphas.iter().map(|&(a, b)| C::new(a, b))).unwrap();
            let z = C::from_polar(1.0, t);
            let m = product(&w, z);
            let want = z.powu(alphas.len() as u32);
            prop_assert!((m.det() - want).norm() < 1e-10 * (1.0 + m.frobenius_sq()));
        }

        #[test]
        fn cone_orbit_grows_at_kappa(
            alphas in prop::collection::vec(0.3..0.9f64, 1..60),
            frac in -0.999..0.999f64,
        ) {
            let w = word(&alphas);
            let a = 0.3f64;
            let z = CirclePoint::from_angle(frac * 2.0 * a.asin());
            let o = cone_orbit(&w, a, &z, [0.0, 1.0]).unwrap();
            prop_assert!(o.holds());
            let lk = o.constants.kappa.ln();
            for (n, ly) in o.log_y.iter().enumerate() {
                prop_assert!(*ly >= n as f64 * lk - 1e-9);
            }
            let g = growth_trace(&w, &z);
            let last = *g.log_norms.last().unwrap();
            prop_assert!(last >= alphas.len() as f64 * lk - 0.5 * 2f64.ln() - 1e-9);
        }
    }
}
