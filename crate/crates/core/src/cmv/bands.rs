//! Band/gap structure of periodic CMV matrices.

use serde::Serialize;

use crate::circle::{Angle, Arc, ArcSet, CirclePoint, ZeroSet};
use crate::cmv::discriminant::{complex_lifted, normalized_discriminant, RealDiscriminant};
use crate::cmv::zeros::{discriminant_zeros, grid_zeros};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::transfer::gap_arc;
use crate::verblunsky::VerblunskyWord;

/// `|D| ≤ 2 + MEMBERSHIP_TOL` counts as spectrum.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Gaps whose `max |D|` exceeds 2 by no more than this are reported closed.
pub const CLOSED_GAP_TOL: f64 = 1e-9;
const EDGE_TOL: f64 = 1e-13;

/// One gap between consecutive bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gap<T> {
    /// The open gap as a closed arc through its edges; a single point when
    /// the gap is closed.
    pub arc: Arc<T>,
    pub closed: bool,
    /// `D` at the extremum of `|D|` inside the gap.
    pub extremum: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandStructure<T> {
    pub spectrum: ArcSet<T>,
    /// Bands in counterclockwise order starting from the band holding the
    /// first zero in `[-π, π)`; band `k` contains zero `k`.
    pub bands: Vec<Arc<T>>,
    /// Gap `k` lies between band `k` and band `k+1` (cyclically).
    pub gaps: Vec<Gap<T>>,
    pub band_edges: Vec<Angle<T>>,
    pub zeros: ZeroSet<T>,
}

impl<T: Real> BandStructure<T> {
    pub fn period(&self) -> usize {
        self.bands.len()
    }

    pub fn open_gaps(&self) -> impl Iterator<Item = &Gap<T>> {
        self.gaps.iter().filter(|g| !g.closed)
    }
}

/// `D` at any real angle.
pub(crate) struct Lifted<'a, T> {
    real: Option<RealDiscriminant<T>>,
    word: &'a VerblunskyWord<T>,
}

impl<'a, T: Real> Lifted<'a, T> {
    pub(crate) fn new(word: &'a VerblunskyWord<T>) -> Self {
        Lifted {
            real: RealDiscriminant::new(word),
            word,
        }
    }

    pub(crate) fn eval(&self, theta: T) -> T {
        match &self.real {
            Some(r) => r.eval(theta).value(),
            None => complex_lifted(self.word, theta).value,
        }
    }
}

/// Point of largest `|D|` in `(lo, hi)`, where `|D|` is unimodal.
fn golden_max<T: Real>(d: &Lifted<'_, T>, mut lo: T, mut hi: T) -> (T, T) {
    let g = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = d.eval(x1).abs();
    let mut f2 = d.eval(x2).abs();
    let tol = T::tol(EDGE_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = d.eval(x2).abs();
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = d.eval(x1).abs();
        }
    }
    let x = (lo + hi) / T::lit(2.0);
    (x, d.eval(x))
}

/// Crossing of `|D| = 2` in `(lo, hi)`, with `|D(lo)| < 2` iff `inside_lo`.
fn edge<T: Real>(d: &Lifted<'_, T>, mut lo: T, mut hi: T, inside_lo: bool) -> T {
    let two = T::lit(2.0);
    let tol = T::tol(EDGE_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        if (d.eval(mid).abs() <= two) == inside_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Bands are the closure of `{|D| ≤ 2}`. Zeros come from
/// [`grid_zeros`] with `grid_size` points for real words, or from
/// [`discriminant_zeros`] for complex ones. Between consecutive zeros `|D|`
/// has a single maximum (found by golden section); the gap edges are the
/// `|D| = 2` crossings on either side of it, bisected to about `1e-13`.
pub fn band_structure<T: Real>(word: &VerblunskyWord<T>, grid_size: usize) -> Result<BandStructure<T>> {
    let p = word.len();
    if p == 0 {
        return Err(Error::Domain("band structure of an empty word".into()));
    }
    if grid_size < 64 * p {
        return Err(Error::Domain(format!(
            "grid_size {grid_size} is below 64 * p = {}",
            64 * p
        )));
    }
    let zeros = if word.is_real() {
        grid_zeros(word, grid_size)?
    } else {
        discriminant_zeros(word)?
    };
    if zeros.count() != p || zeros.distinct() != p {
        return Err(Error::NumericalFailure(format!(
            "expected {p} simple zeros, found {} ({} distinct)",
            zeros.count(),
            zeros.distinct()
        )));
    }
    let d = Lifted::new(word);
    let mut z = zeros.angles();
    z.push(z[0] + T::two_pi());
    let two = T::lit(2.0);
    // (left edge, right edge) of each gap in lifted coordinates
    let mut gap_edges = Vec::with_capacity(p);
    let mut gaps = Vec::with_capacity(p);
    for k in 0..p {
        let (lo, hi) = (z[k], z[k + 1]);
        let (x, dx) = golden_max(&d, lo, hi);
        if dx.abs() > two + T::lit(CLOSED_GAP_TOL) {
            let l = edge(&d, lo, x, true);
            let r = edge(&d, x, hi, false);
            gap_edges.push((l, r));
            gaps.push(Gap {
                arc: Arc::new(l, r),
                closed: false,
                extremum: dx,
            });
        } else {
            gap_edges.push((x, x));
            gaps.push(Gap {
                arc: Arc::point(x),
                closed: true,
                extremum: dx,
            });
        }
    }
    let mut bands = Vec::with_capacity(p);
    let mut band_edges = Vec::with_capacity(2 * p);
    for k in 0..p {
        let start = if k == 0 {
            gap_edges[p - 1].1 - T::two_pi()
        } else {
            gap_edges[k - 1].1
        };
        let end = gap_edges[k].0;
        bands.push(Arc::with_len(start, end - start));
        band_edges.push(Angle::new(start));
        band_edges.push(Angle::new(end));
    }
    let spectrum = ArcSet::from_arcs(bands.iter().copied());
    Ok(BandStructure {
        spectrum,
        bands,
        gaps,
        band_edges,
        zeros,
    })
}

/// `|D(z)| ≤ 2 + 1e-9`.
pub fn spectrum_membership<T: Real>(word: &VerblunskyWord<T>, z: &CirclePoint<T>) -> Result<bool> {
    let d = normalized_discriminant(word, z.angle())?;
    Ok(d.value.abs() <= T::lit(2.0 + MEMBERSHIP_TOL))
}

/// Spectrum of the constant-coefficient matrix: the complement of `R_α`.
pub fn constant_spectrum<T: Real>(alpha: T) -> Result<ArcSet<T>> {
    Ok(gap_arc(alpha)?.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::hausdorff_distance;
    use num_complex::Complex;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn word(a: &[f64]) -> VerblunskyWord<f64> {
        VerblunskyWord::from_reals(a.iter().copied()).unwrap()
    }

    #[test]
    fn constant_word_bands() {
        let b = band_structure(&word(&[0.5]), 64).unwrap();
        let want = constant_spectrum(0.5).unwrap();
        assert_eq!(b.spectrum.arcs().len(), 1);
        assert!(hausdorff_distance(&b.spectrum, &want).unwrap() < 1e-10);
        let a = b.spectrum.arcs()[0];
        assert!((a.start().radians() - PI / 3.0).abs() < 1e-10);
        assert!((a.len() - 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn rotated_gap_for_alternating_signs() {
        let b = band_structure(&word(&[0.3, -0.3]), 128).unwrap();
        let want = constant_spectrum(0.3).unwrap().rotate(PI);
        assert!(hausdorff_distance(&b.spectrum, &want).unwrap() < 1e-9);
        assert!(b.spectrum.contains(0.0));
        assert!(!b.spectrum.contains(PI - 0.1));
    }

    #[test]
    fn closed_gap_at_minus_one() {
        let b = band_structure(&word(&[0.5, 0.5]), 128).unwrap();
        let closed: Vec<_> = b.gaps.iter().filter(|g| g.closed).collect();
        assert_eq!(closed.len(), 1);
        assert!((closed[0].arc.start().radians().abs() - PI).abs() < 1e-6);
        assert!((closed[0].extremum + 2.0).abs() < 1e-9);
        assert_eq!(b.spectrum.arcs().len(), 1);
    }

    #[test]
    fn membership_examples() {
        let z = CirclePoint::from_angle(1.1);
        let a = C::new(0.6, 0.0);
        let bt = C::new(0.0, 0.9);
        let m = |v: Vec<C>| spectrum_membership(&VerblunskyWord::from_complex(v).unwrap(), &z).unwrap();
        assert!(!m(vec![a]));
        assert!(!m(vec![bt]));
        assert!(!m(vec![a, bt]));
        assert!(m(vec![a, a, a, bt]));
        let w = word(&[0.5]);
        assert!(spectrum_membership(&w, &CirclePoint::from_angle(PI)).unwrap());
        assert!(!spectrum_membership(&w, &CirclePoint::from_angle(0.0)).unwrap());
    }

    #[test]
    fn constant_spectrum_examples() {
        assert!(constant_spectrum(0.0).unwrap().is_full());
        let s = constant_spectrum(0.99).unwrap();
        assert!((s.measure() - (2.0 * PI - 4.0 * 0.99f64.asin())).abs() < 1e-12);
        assert!(constant_spectrum(1.0).is_err());
    }

    #[test]
    fn complex_word_bands() {
        let w = VerblunskyWord::from_complex([C::new(0.6, 0.0), C::new(0.0, 0.9)]).unwrap();
        let b = band_structure(&w, 128).unwrap();
        assert_eq!(b.zeros.count(), 2);
        for k in 0..200 {
            let t = -PI + 2.0 * PI * (k as f64 + 0.3) / 200.0;
            let inside = spectrum_membership(&w, &CirclePoint::from_angle(t)).unwrap();
            let dist = b.spectrum.distance_to(t);
            assert!(inside == b.spectrum.contains(t) || dist < 1e-8);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn one_zero_per_band(alphas in prop::collection::vec(-0.9..0.9f64, 1..10)) {
            let w = word(&alphas);
            let b = band_structure(&w, 64 * alphas.len()).unwrap();
            for (band, (z, _)) in b.bands.iter().zip(b.zeros.entries()) {
                prop_assert!(band.contains_interior(z.radians()));
                let inside = b.zeros.entries().iter().filter(|(y, _)| band.contains(y.radians(), 0.0)).count();
                prop_assert_eq!(inside, 1);
            }
        }

        #[test]
        fn membership_invariant_under_rotation(
            alphas in prop::collection::vec((-0.8..0.8f64, -0.5..0.5f64), 1..12),
            k in 0usize..12,
            t in -3.14..3.14f64,
        ) {
            let w = VerblunskyWord::from_complex(alphas.iter().map(|&(a, b)| C::new(a, b) * 0.9)).unwrap();
            let z = CirclePoint::from_angle(t);
            let d0 = normalized_discriminant(&w, z.angle()).unwrap().value;
            let d1 = normalized_discriminant(&w.rotated(k), z.angle()).unwrap().value;
            prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0.abs()));
            if (d0.abs() - 2.0).abs() > 1e-6 {
                prop_assert_eq!(
                    spectrum_membership(&w, &z).unwrap(),
                    spectrum_membership(&w.rotated(k), &z).unwrap()
                );
            }
        }
    }
}
