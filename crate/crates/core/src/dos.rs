//! Density of states from zero counting measures, the Thouless-type
//! formula for the Lyapunov exponent, and gap labels.

use num_complex::Complex;
use serde::Serialize;

use crate::circle::{Angle, Arc, ZeroSet};
use crate::cmv::BandStructure;
use crate::cocycle::LyapunovEstimate;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Distance below which `z` counts as sitting on an atom.
pub const ATOM_TOL: f64 = 1e-12;
/// Slack used when deciding whether an atom lies in a band.
pub const BAND_TOL: f64 = 1e-9;

/// A probability measure on the circle made of finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityOfStates<T> {
    atoms: Vec<(Angle<T>, T)>,
    #[serde(skip)]
    windows: Vec<ZeroSet<T>>,
}

impl<T: Real> DensityOfStates<T> {
    /// Normalized counting measure of `zeros`, multiplicities included.
    pub fn from_zero_set(zeros: &ZeroSet<T>) -> Result<Self> {
        let n = zeros.count();
        if n == 0 {
            return Err(Error::Domain("density of states of an empty zero set".into()));
        }
        let w = T::count(n).recip();
        Ok(DensityOfStates {
            atoms: zeros.entries().iter().map(|&(a, m)| (a, w * T::count(m))).collect(),
            windows: vec![zeros.clone()],
        })
    }

    pub fn atoms(&self) -> &[(Angle<T>, T)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().map(|(_, w)| *w).sum()
    }

    /// Mass of the closed arc, atoms within `tol` of it included.
    pub fn mass_on(&self, arc: &Arc<T>, tol: T) -> T {
        self.atoms
            .iter()
            .filter(|(a, _)| arc.contains(a.radians(), tol))
            .map(|(_, w)| *w)
            .sum()
    }

    /// Mass of `arc` under every retained window's counting measure, paired
    /// with the window size, in input order.
    pub fn mass_history(&self, arc: &Arc<T>, tol: T) -> Vec<(usize, T)> {
        self.windows
            .iter()
            .map(|z| {
                let n = z.count();
                let inside: usize = z
                    .entries()
                    .iter()
                    .filter(|(a, _)| arc.contains(a.radians(), tol))
                    .map(|(_, m)| m)
                    .sum();
                (n, T::count(inside) / T::count(n))
            })
            .collect()
    }

    /// `∫ log|z - w| dk(w)`.
    pub fn log_potential(&self, z: Complex<T>) -> Result<T> {
        let mut acc = T::zero();
        for (a, w) in &self.atoms {
            let d = (z - a.point().value()).norm();
            if d <= T::tol(ATOM_TOL) {
                return Err(Error::Singularity(format!(
                    "z = {z} sits on the atom at {}",
                    a.radians()
                )));
            }
            acc += *w * d.ln();
        }
        Ok(acc)
    }
}

/// Density of states from zero sets of growing windows: the counting
/// measure of the window with the most zeros, each zero carrying `1/n`.
/// All windows are kept for [`DensityOfStates::mass_history`].
pub fn dos_from_zeros<T: Real>(windows: &[ZeroSet<T>]) -> Result<DensityOfStates<T>> {
    let largest = windows
        .iter()
        .enumerate()
        .max_by_key(|(i, z)| (z.count(), *i))
        .map(|(_, z)| z)
        .ok_or_else(|| Error::Domain("dos_from_zeros needs at least one window".into()))?;
    let mut dos = DensityOfStates::from_zero_set(largest)?;
    dos.windows = windows.to_vec();
    Ok(dos)
}

/// `L(z) = R + ∫ log|z - w| dk(w)`.
pub fn thouless_lyapunov<T: Real>(dos: &DensityOfStates<T>, r: T, z: Complex<T>) -> Result<T> {
    Ok(r + dos.log_potential(z)?)
}

/// The constant `R` that makes the Thouless form match `direct` at `z_ref`.
pub fn fit_r<T: Real>(dos: &DensityOfStates<T>, z_ref: Complex<T>, direct: &LyapunovEstimate<T>) -> Result<T> {
    Ok(direct.value - dos.log_potential(z_ref)?)
}

/// One labeled gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabeledGap<T> {
    pub start: T,
    pub end: T,
    pub label: T,
}

impl<T: Real> LabeledGap<T> {
    pub fn arc(&self) -> Arc<T> {
        Arc::new(self.start, self.end)
    }
}

/// Gaps with their labels, counterclockwise from the base gap (label 0).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapLabelReport<T> {
    pub gaps: Vec<LabeledGap<T>>,
    #[serde(rename = "R")]
    pub rotation_offset: Option<T>,
    /// Index into `gaps` of the base gap; always 0 when present.
    #[serde(skip)]
    pub base_gap: Option<usize>,
    #[serde(skip)]
    pub warning: Option<String>,
}

impl<T: Real> GapLabelReport<T> {
    pub fn empty() -> Self {
        GapLabelReport {
            gaps: Vec::new(),
            rotation_offset: None,
            base_gap: None,
            warning: None,
        }
    }

    pub fn with_offset(mut self, r: T) -> Self {
        self.rotation_offset = Some(r);
        self
    }

    pub fn labels(&self) -> Vec<T> {
        self.gaps.iter().map(|g| g.label).collect()
    }
}

/// Labels each open gap by the dos mass of the bands met moving
/// counterclockwise from the base gap, the gap containing `θ = 0`. When
/// `θ = 0` is inside a band the widest gap becomes the base and the report
/// carries a warning. Closed gaps are not reported.
pub fn gap_labels<T: Real>(bands: &BandStructure<T>, dos: &DensityOfStates<T>) -> Result<GapLabelReport<T>> {
    let p = bands.period();
    if p == 0 {
        return Err(Error::Domain("gap_labels needs at least one band".into()));
    }
    let open: Vec<usize> = (0..p).filter(|&k| !bands.gaps[k].closed).collect();
    if open.is_empty() {
        return Ok(GapLabelReport::empty());
    }
    let mut warning = None;
    let base = match open
        .iter()
        .copied()
        .find(|&k| bands.gaps[k].arc.contains(T::zero(), T::zero()))
    {
        Some(k) => k,
        None => {
            let k = open
                .iter()
                .copied()
                .max_by(|&a, &b| {
                    bands.gaps[a]
                        .arc
                        .len()
                        .partial_cmp(&bands.gaps[b].arc.len())
                        .expect("finite gap length")
                })
                .expect("nonempty");
            warning = Some(format!(
                "theta = 0 lies in a band; base moved to the gap at {:.6}",
                bands.gaps[k].arc.midpoint().radians()
            ));
            k
        }
    };
    let tol = T::lit(BAND_TOL);
    let mut label = T::zero();
    let mut gaps = Vec::with_capacity(open.len());
    for i in 0..p {
        let k = (base + i) % p;
        if i > 0 {
            label += dos.mass_on(&bands.bands[k], tol);
        }
        let g = &bands.gaps[k];
        if !g.closed {
            gaps.push(LabeledGap {
                start: g.arc.start().radians(),
                end: g.arc.end().radians(),
                label,
            });
        }
    }
    Ok(GapLabelReport {
        gaps,
        rotation_offset: None,
        base_gap: Some(0),
        warning,
    })
}

/// Gaps of a bare zero set: spacings wider than `min_width`, labeled by the
/// fraction of zeros met counterclockwise from the gap containing `θ = 0`.
/// Useful for non-periodic words, where no band structure is available.
pub fn empirical_gap_labels<T: Real>(zeros: &ZeroSet<T>, min_width: T) -> Result<GapLabelReport<T>> {
    let e = zeros.entries();
    let n = zeros.count();
    if n == 0 {
        return Ok(GapLabelReport::empty());
    }
    let tau = T::two_pi();
    // gap i runs from zero i to zero i+1
    let mut gaps: Vec<(usize, Arc<T>)> = Vec::new();
    for i in 0..e.len() {
        let a = e[i].0.radians();
        let b = if i + 1 < e.len() { e[i + 1].0.radians() } else { e[0].0.radians() + tau };
        if b - a > min_width {
            gaps.push((i, Arc::new(a, b)));
        }
    }
    let Some(bpos) = gaps.iter().position(|(_, g)| g.contains_interior(T::zero())) else {
        return Err(Error::Domain("no gap of the zero set contains theta = 0".into()));
    };
    let mut prefix = vec![0usize; e.len() + 1];
    for i in 0..e.len() {
        prefix[i + 1] = prefix[i] + e[i].1;
    }
    let b = gaps[bpos].0;
    let out = (0..gaps.len())
        .map(|j| {
            let (i, g) = gaps[(bpos + j) % gaps.len()];
            // zeros with index in (b, i], cyclically
            let m = if i >= b { prefix[i + 1] - prefix[b + 1] } else { n - (prefix[b + 1] - prefix[i + 1]) };
            LabeledGap {
                start: g.start().radians(),
                end: g.end().radians(),
                label: T::count(m) / T::count(n),
            }
        })
        .collect();
    Ok(GapLabelReport {
        gaps: out,
        rotation_offset: None,
        base_gap: Some(0),
        warning: None,
    })
}

/// The values `{m + n ω mod 1 : |m|, |n| ≤ bound}` in `[0, 1)`, sorted.
pub fn frequency_module<T: Real>(omega: T, bound: u32) -> Vec<T> {
    let b = i64::from(bound);
    let mut v: Vec<T> = (-b..=b)
        .map(|n| {
            let x = T::lit(n as f64) * omega;
            x - x.floor()
        })
        .collect();
    // integer shifts m collapse under mod 1
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon());
    v
}

/// Distance from `x` to the nearest element of the module, measured on
/// the circle `R/Z`.
pub fn module_distance<T: Real>(x: T, module: &[T]) -> T {
    module
        .iter()
        .map(|&m| {
            let d = (x - m).abs();
            d.min(T::one() - d)
        })
        .fold(T::infinity(), T::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmv::band_structure;
    use crate::cocycle::lyapunov_estimate;
    use crate::ensemble::{word_zero_set, SingleSiteMeasure};
    use crate::verblunsky::VerblunskyWord;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn dos_of(word: &VerblunskyWord<f64>) -> DensityOfStates<f64> {
        DensityOfStates::from_zero_set(&word_zero_set(word).unwrap()).unwrap()
    }

    #[test]
    fn unit_mass_potential() {
        let z = ZeroSet::from_angles([PI], 1e-12);
        let d = DensityOfStates::from_zero_set(&z).unwrap();
        let v = thouless_lyapunov(&d, 0.0, C::new(1.0, 0.0)).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(
            thouless_lyapunov(&d, 0.0, C::new(-1.0, 0.0)),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn conjugation_symmetry() {
        let z = ZeroSet::from_angles([0.5, -0.5, 2.0, -2.0, PI], 1e-12);
        let d = DensityOfStates::from_zero_set(&z).unwrap();
        let w = C::from_polar(0.9, 0.8);
        let a = thouless_lyapunov(&d, 0.3, w).unwrap();
        let b = thouless_lyapunov(&d, 0.3, w.conj()).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn periodic_band_masses() {
        let base = VerblunskyWord::from_reals([0.3, 0.4, 0.5]).unwrap();
        let b = band_structure(&base, 256).unwrap();
        let d = dos_of(&base.repeated(40));
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        for band in &b.bands {
            assert!((d.mass_on(band, 1e-9) - 1.0 / 3.0).abs() < 1e-9);
        }
        let c = dos_of(&VerblunskyWord::constant(0.5, 60).unwrap());
        let s = band_structure(&VerblunskyWord::constant(0.5, 1).unwrap(), 64).unwrap();
        assert!((c.mass_on(&s.bands[0], 1e-9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_history_agrees() {
        let base = VerblunskyWord::from_reals([0.2f64, 0.6]).unwrap();
        let zs: Vec<_> = [20, 80].iter().map(|&m| word_zero_set(&base.repeated(m)).unwrap()).collect();
        let d = dos_from_zeros(&zs).unwrap();
        assert_eq!(d.atoms().len(), 160);
        let arc = Arc::new(0.4, 2.5);
        let h = d.mass_history(&arc, 0.0);
        assert!((h[0].1 - h[1].1).abs() <= 2.0 / 40.0);
        assert!(dos_from_zeros::<f64>(&[]).is_err());
    }

    #[test]
    fn fitted_offset() {
        let d = dos_of(&VerblunskyWord::constant(0.5, 400).unwrap());
        let direct = LyapunovEstimate { value: 0.5 * 3f64.ln(), std_error: 0.0, n: 1, trials: 1 };
        let r = fit_r(&d, C::new(1.0, 0.0), &direct).unwrap();
        // for this measure ∫ log|1 - w| dk = ln 1.5
        assert!((r - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-3);
        let trivial = LyapunovEstimate { value: d.log_potential(C::new(1.0, 0.0)).unwrap(), ..direct };
        assert_eq!(fit_r(&d, C::new(1.0, 0.0), &trivial).unwrap(), 0.0);
    }

    #[test]
    fn prediction_in_the_gap() {
        let d = dos_of(&VerblunskyWord::constant(0.5, 2000).unwrap());
        let m = SingleSiteMeasure::constant(0.5).unwrap();
        let one = C::new(1.0, 0.0);
        let r = fit_r(&d, one, &lyapunov_estimate(&m, one, 2000, 2, 1).unwrap()).unwrap();
        let z = C::from_polar(1.0, 0.1);
        let direct = lyapunov_estimate(&m, z, 4000, 2, 2).unwrap().value;
        assert!((thouless_lyapunov(&d, r, z).unwrap() - direct).abs() < 1e-2);
    }

    #[test]
    fn labels_of_small_periods() {
        let w = VerblunskyWord::from_reals([0.2, 0.6]).unwrap();
        let b = band_structure(&w, 256).unwrap();
        let rep = gap_labels(&b, &dos_of(&w.repeated(50))).unwrap();
        assert!(rep.warning.is_none());
        assert_eq!(rep.gaps.len(), 2);
        assert_eq!(rep.gaps[0].label, 0.0);
        assert!((rep.gaps[1].label - 0.5).abs() < 1e-3);

        let w = VerblunskyWord::from_reals([0.3, 0.4, 0.5]).unwrap();
        let b = band_structure(&w, 256).unwrap();
        let rep = gap_labels(&b, &dos_of(&w.repeated(50))).unwrap();
        let l = rep.labels();
        assert_eq!(l.len(), 3);
        assert!((l[1] - 1.0 / 3.0).abs() < 1e-3 && (l[2] - 2.0 / 3.0).abs() < 1e-3);

        let w = VerblunskyWord::from_reals([0.4]).unwrap();
        let b = band_structure(&w, 64).unwrap();
        let rep = gap_labels(&b, &dos_of(&w.repeated(30))).unwrap();
        assert_eq!(rep.labels(), vec![0.0]);
    }

    #[test]
    fn labels_invariant_under_rotation() {
        let w = VerblunskyWord::from_reals([0.2, 0.7, 0.45, 0.3]).unwrap();
        let base = gap_labels(&band_structure(&w, 512).unwrap(), &dos_of(&w.repeated(25))).unwrap();
        for k in 1..4 {
            let r = w.rotated(k);
            let rep = gap_labels(&band_structure(&r, 512).unwrap(), &dos_of(&r.repeated(25))).unwrap();
            for (a, b) in base.labels().iter().zip(rep.labels()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn relocated_base() {
        // alternating signs move the only open gap to θ = π
        let w = VerblunskyWord::from_reals([0.3, -0.3]).unwrap();
        let b = band_structure(&w, 128).unwrap();
        let rep = gap_labels(&b, &dos_of(&w.repeated(20))).unwrap();
        assert!(rep.warning.is_some());
        assert_eq!(rep.labels(), vec![0.0]);
    }

    #[test]
    fn report_json() {
        let rep = GapLabelReport::<f64>::empty();
        assert_eq!(serde_json::to_string(&rep).unwrap(), r#"{"gaps":[],"R":null}"#);
        let rep = GapLabelReport {
            gaps: vec![LabeledGap { start: -0.5, end: 0.5, label: 0.0 }],
            ..GapLabelReport::empty()
        }
        .with_offset(0.25);
        assert_eq!(
            serde_json::to_string(&rep).unwrap(),
            r#"{"gaps":[{"start":-0.5,"end":0.5,"label":0.0}],"R":0.25}"#
        );
    }

    #[test]
    fn module_values() {
        let w = (5f64.sqrt() - 1.0) / 2.0;
        let m = frequency_module(w, 50);
        assert_eq!(m.len(), 101);
        assert!(module_distance(0.0, &m) < 1e-15);
        assert!(module_distance(1.0 - w, &m) < 1e-12);
    }

    #[test]
    fn quasiperiodic_labels_in_module() {
        let omega = (5f64.sqrt() - 1.0) / 2.0;
        let n = 2000;
        let w = VerblunskyWord::from_reals(
            (0..n).map(|j| 0.5 + 0.3 * (2.0 * PI * omega * j as f64).cos()),
        )
        .unwrap();
        let zeros = word_zero_set(&w).unwrap();
        let rep = empirical_gap_labels(&zeros, 0.02).unwrap();
        assert!(rep.gaps.len() >= 3);
        let low = frequency_module(omega, 6);
        for g in &rep.gaps {
            assert!(module_distance(g.label, &low) < 3.0 / n as f64, "label {}", g.label);
        }
    }
}
