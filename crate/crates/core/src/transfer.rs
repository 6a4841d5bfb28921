//! One-step Szegő transfer matrices, the real cone-coordinate form used for
//! positive coefficients, and the constants of the cone criterion.

use num_complex::Complex;

use crate::circle::{Arc, ArcSet, CirclePoint};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::scalar::Real;
use crate::verblunsky::Verblunsky;

/// `A(α, z) = ρ⁻¹ [[z, -ᾱ], [-α z, 1]]`.
///
/// `z` is normally unimodular; points inside the disk are accepted with the
/// same formula (then `det = z` is no longer unimodular).
#[inline]
pub fn transfer_matrix<T: Real>(alpha: &Verblunsky<T>, z: Complex<T>) -> Mat2<T> {
    let a = alpha.alpha();
    let inv = T::one() / alpha.rho();
    Mat2::new(
        z * inv,
        -a.conj() * inv,
        -a * z * inv,
        Complex::new(inv, T::zero()),
    )
}

impl<T: Real> Verblunsky<T> {
    pub fn transfer(&self, z: Complex<T>) -> Mat2<T> {
        transfer_matrix(self, z)
    }
}

/// Entries of `B(α, w) = w⁻¹ U A(α, w²) U⁻¹` for real `α`, as a real matrix
/// `[[m00, m01], [m10, m11]]`.
#[inline]
pub(crate) fn cone_entries<T: Real>(alpha: T, rho: T, w: Complex<T>) -> [[T; 2]; 2] {
    let lo = (T::one() - alpha) / rho;
    let hi = (T::one() + alpha) / rho;
    [[lo * w.re, -lo * w.im], [hi * w.im, hi * w.re]]
}

/// The conjugated transfer matrix in cone coordinates,
/// `ρ⁻¹ [[(1-α) Re w, -(1-α) Im w], [(1+α) Im w, (1+α) Re w]]`.
pub fn conjugated_matrix<T: Real>(alpha: T, w: Complex<T>) -> Result<Mat2<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidCoefficient(format!(
            "cone coordinates need alpha in (0,1), got {alpha}"
        )));
    }
    if (w.norm() - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::Domain(format!("|w| = {} is not unimodular", w.norm())));
    }
    let rho = (T::one() - alpha * alpha).sqrt();
    let m = cone_entries(alpha, rho, w);
    Ok(Mat2::real(m[0][0], m[0][1], m[1][0], m[1][1]))
}

/// `2 arcsin α`, the half-width of the gap arc `R_α`.
pub fn gap_half_width<T: Real>(alpha: T) -> T {
    T::lit(2.0) * alpha.asin()
}

/// Strict membership `|θ| < 2 arcsin α`.
pub fn in_gap<T: Real>(alpha: T, theta: T) -> bool {
    alpha > T::zero() && crate::circle::canonical(theta).abs() < gap_half_width(alpha)
}

/// The open arc `R_α = {e^{iθ} : |θ| < 2 arcsin α}`, stored through its
/// closure. Use [`ArcSet::contains_interior`] or [`in_gap`] for the strict
/// test.
pub fn gap_arc<T: Real>(alpha_min: T) -> Result<ArcSet<T>> {
    if !(alpha_min >= T::zero() && alpha_min < T::one()) {
        return Err(Error::Domain(format!(
            "gap parameter must lie in [0,1), got {alpha_min}"
        )));
    }
    if alpha_min == T::zero() {
        return Ok(ArcSet::empty());
    }
    let h = gap_half_width(alpha_min);
    Ok(ArcSet::from_arcs([Arc::new(-h, h)]))
}

/// The square root `w` of `z ∈ R_A` with `arg w ∈ (-arcsin A, arcsin A)`.
pub fn principal_root<T: Real>(z: &CirclePoint<T>, a: T) -> Result<Complex<T>> {
    if !(a > T::zero() && a < T::one()) {
        return Err(Error::Domain(format!("A must lie in (0,1), got {a}")));
    }
    let theta = z.theta();
    if !in_gap(a, theta) {
        return Err(Error::OutOfGap(format!(
            "theta = {theta} is not inside R_{a} (half-width {})",
            gap_half_width(a)
        )));
    }
    Ok(Complex::from_polar(T::one(), theta / T::lit(2.0)))
}

/// Constants of the cone criterion: `C = sqrt((1+A)/(1-A))` and
/// `κ = C Re w - |Im w|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeConstants<T> {
    pub a: T,
    pub w: Complex<T>,
    pub c: T,
    pub kappa: T,
}

/// Whether `w` satisfies `Re w > sqrt(1-A²)` and `|Im w| < A`.
pub fn is_admissible<T: Real>(a: T, w: Complex<T>) -> bool {
    w.re > (T::one() - a * a).sqrt() && w.im.abs() < a
}

pub fn cone_constants<T: Real>(a: T, w: Complex<T>) -> Result<ConeConstants<T>> {
    if !(a > T::zero() && a < T::one()) {
        return Err(Error::Domain(format!("A must lie in (0,1), got {a}")));
    }
    if (w.norm() - T::one()).abs() > T::tol(1e-12) || !is_admissible(a, w) {
        return Err(Error::Inadmissible(format!("w = {w} for A = {a}")));
    }
    let c = ((T::one() + a) / (T::one() - a)).sqrt();
    let kappa = c * w.re - w.im.abs();
    if !(kappa > T::one()) {
        return Err(Error::NumericalFailure(format!(
            "kappa = {kappa} is not > 1 for admissible w"
        )));
    }
    Ok(ConeConstants { a, w, c, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn v(a: f64) -> Verblunsky<f64> {
        Verblunsky::real(a).unwrap()
    }

    /// `w⁻¹ U A(α, w²) U⁻¹` evaluated literally.
    fn conjugate_by_u(alpha: f64, w: C) -> Mat2<f64> {
        let s = 1.0 / 2f64.sqrt();
        let i = C::new(0.0, 1.0);
        let u = Mat2::new(C::new(s, 0.0), C::new(s, 0.0), -i * s, i * s);
        let u_inv = u.inverse().unwrap();
        (u * transfer_matrix(&v(alpha), w * w) * u_inv).scale_c(w.inv())
    }

    #[test]
    fn transfer_examples() {
        let i = C::new(0.0, 1.0);
        let m = transfer_matrix(&v(0.0), i);
        assert!(m.max_diff(&Mat2::new(i, C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0))) < 1e-15);

        let m = transfer_matrix(&v(0.6), C::new(1.0, 0.0));
        assert!(m.max_diff(&Mat2::real(1.25, -0.75, -0.75, 1.25)) < 1e-14);

        let z = C::from_polar(1.0, PI / 2.0);
        assert!((transfer_matrix(&v(0.5), z).det() - z).norm() < 1e-14);
    }

    #[test]
    fn conjugated_examples() {
        let m = conjugated_matrix(0.5, C::new(1.0, 0.0)).unwrap();
        let r = 0.75f64.sqrt();
        assert!(m.max_diff(&Mat2::real(0.5 / r, 0.0, 0.0, 1.5 / r)) < 1e-14);
        assert!((m.a.re - 0.577350269).abs() < 1e-9);
        assert!((m.d.re - 1.732050808).abs() < 1e-9);

        let w = C::from_polar(1.0, 0.1);
        let closed = conjugated_matrix(0.3, w).unwrap();
        assert!(closed.max_diff(&conjugate_by_u(0.3, w)) < 1e-12);

        let near_zero = conjugated_matrix(1e-15, C::new(1.0, 0.0)).unwrap();
        assert!(near_zero.max_diff(&Mat2::identity()) < 1e-12);

        assert!(conjugated_matrix(0.0, w).is_err());
        assert!(conjugated_matrix(1.0, w).is_err());
        assert!(conjugated_matrix(0.5, C::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn principal_root_examples() {
        let one = CirclePoint::from_angle(0.0);
        assert!((principal_root(&one, 0.5).unwrap() - C::new(1.0, 0.0)).norm() < 1e-15);
        let w = principal_root(&CirclePoint::from_angle(0.4), 0.3).unwrap();
        assert!((w - C::from_polar(1.0, 0.2)).norm() < 1e-15);
        let w = principal_root(&CirclePoint::from_angle(-0.5), 0.3).unwrap();
        assert!((w - C::from_polar(1.0, -0.25)).norm() < 1e-15);
        assert!(matches!(
            principal_root(&CirclePoint::from_angle(1.0), 0.3),
            Err(Error::OutOfGap(_))
        ));
    }

    #[test]
    fn cone_constant_examples() {
        let k = cone_constants(0.5, C::new(1.0, 0.0)).unwrap();
        assert!((k.c - 1.7320508).abs() < 1e-7);
        assert!((k.kappa - 1.7320508).abs() < 1e-7);
        let k = cone_constants(0.3, C::from_polar(1.0, 0.2)).unwrap();
        assert!((k.c - 1.362770).abs() < 1e-6);
        assert!((k.kappa - 1.136937).abs() < 1e-6);
        let k = cone_constants(1e-4, C::new(1.0, 0.0)).unwrap();
        assert!((k.c - 1.0001).abs() < 1e-8 && k.kappa > 1.0);
        assert!(matches!(
            cone_constants(0.3, C::from_polar(1.0, 0.5)),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn gap_arc_examples() {
        let g = gap_arc(0.5).unwrap();
        let a = g.arcs()[0];
        assert!((a.start().radians() + PI / 3.0).abs() < 1e-12);
        assert!((a.end().radians() - PI / 3.0).abs() < 1e-12);
        assert!(gap_arc(0.0).unwrap().is_empty());
        let g = gap_arc(2f64.sqrt() / 2.0).unwrap();
        assert!((g.measure() - PI).abs() < 1e-12);
        assert!(gap_arc(1.0).is_err());
        assert!(gap_arc(-0.1).is_err());
        assert!(!g.contains_interior(PI / 2.0 + 1e-9));
        assert!(g.contains_interior(PI / 2.0 - 1e-9));
    }

    fn disk_point() -> impl Strategy<Value = C> {
        (0.0..0.999f64, -PI..PI).prop_map(|(r, t)| C::from_polar(r, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn transfer_in_u11_with_det_z(a in disk_point(), t in -PI..PI) {
            let z = C::from_polar(1.0, t);
            let m = transfer_matrix(&Verblunsky::new(a).unwrap(), z);
            let scale = 1.0 / (1.0 - a.norm_sqr());
            prop_assert!(m.u11_defect() < 1e-12 * scale);
            prop_assert!((m.det() - z).norm() < 1e-12 * scale);
            // ‖M‖ = ‖M⁻¹‖ in U(1,1)
            let n = m.norm();
            let ni = m.inverse().unwrap().norm();
            prop_assert!((n - ni).abs() < 1e-9 * n);
        }

        #[test]
        fn conjugation_matches_closed_form(alpha in 1e-6..0.999f64, t in -PI..PI) {
            let w = C::from_polar(1.0, t);
            let closed = conjugated_matrix(alpha, w).unwrap();
            let lit = conjugate_by_u(alpha, w);
            let scale = 1.0 / (1.0 - alpha * alpha).sqrt();
            prop_assert!(closed.max_diff(&lit) < 1e-12 * scale.max(1.0) * 4.0);
        }

        #[test]
        fn kappa_exceeds_one(a in 0.001..0.999f64, frac in -0.999..0.999f64) {
            let z = CirclePoint::from_angle(frac * gap_half_width(a));
            let w = principal_root(&z, a).unwrap();
            prop_assert!(is_admissible(a, w));
            let k = cone_constants(a, w).unwrap();
            prop_assert!(k.kappa > 1.0);
            prop_assert!(k.c > 1.0);
        }
    }
}
