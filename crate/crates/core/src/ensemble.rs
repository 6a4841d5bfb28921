//! Random and periodic coefficient sequences, their almost-sure spectra and
//! window zero sets.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{hausdorff_distance, Arc, ArcSet, ZeroSet};
use crate::cmv::{band_structure, constant_spectrum, default_grid, discriminant_zeros, grid_zeros};
use crate::error::{Error, Result};
use crate::rng::IndexedStream;
use crate::scalar::Real;
use crate::verblunsky::{Verblunsky, VerblunskyWord};

/// Single-site distribution of the coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MeasureKind<T> {
    /// Finitely many values with positive weights summing to one.
    Atoms(Vec<(Complex<T>, T)>),
    /// Uniform on the half-open interval `[a, b)`.
    Uniform { a: T, b: T },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleSiteMeasure<T> {
    kind: MeasureKind<T>,
}

impl<T: Real> SingleSiteMeasure<T> {
    pub fn atoms(atoms: Vec<(Complex<T>, T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("measure without atoms".into()));
        }
        let total: T = atoms.iter().map(|(_, w)| *w).sum();
        if atoms.iter().any(|(_, w)| !(*w > T::zero())) || (total - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::Domain(format!(
                "atom weights must be positive and sum to 1 (sum {total})"
            )));
        }
        for (v, _) in &atoms {
            Verblunsky::new(*v)?;
        }
        Ok(SingleSiteMeasure {
            kind: MeasureKind::Atoms(atoms),
        })
    }

    /// Equal weights on the given values.
    pub fn uniform_atoms(values: &[Complex<T>]) -> Result<Self> {
        let w = T::count(values.len()).recip();
        Self::atoms(values.iter().map(|&v| (v, w)).collect())
    }

    /// The point mass at a real value.
    pub fn constant(alpha: T) -> Result<Self> {
        Self::atoms(vec![(Complex::new(alpha, T::zero()), T::one())])
    }

    pub fn uniform(a: T, b: T) -> Result<Self> {
        if !(T::zero() <= a && a < b && b < T::one()) {
            return Err(Error::Domain(format!(
                "uniform interval [{a}, {b}) must satisfy 0 <= a < b < 1"
            )));
        }
        Ok(SingleSiteMeasure {
            kind: MeasureKind::Uniform { a, b },
        })
    }

    pub fn kind(&self) -> &MeasureKind<T> {
        &self.kind
    }

    /// Maps a uniform draw `u ∈ [0, 1)` to a coefficient.
    pub fn sample(&self, u: f64) -> Verblunsky<T> {
        let v = match &self.kind {
            MeasureKind::Uniform { a, b } => {
                let x = *a + (*b - *a) * T::lit(u);
                // rounding must not reach b
                Complex::new(if x < *b { x } else { *a }, T::zero())
            }
            MeasureKind::Atoms(atoms) => {
                let u = T::lit(u);
                let mut acc = T::zero();
                let mut pick = atoms[atoms.len() - 1].0;
                for (v, w) in atoms {
                    acc += *w;
                    if u < acc {
                        pick = *v;
                        break;
                    }
                }
                pick
            }
        };
        Verblunsky::new(v).expect("support lies in the open disk")
    }

    /// Whether the support is real and contained in `[0, 1)`.
    pub fn is_real_nonneg(&self) -> bool {
        match &self.kind {
            MeasureKind::Uniform { .. } => true,
            MeasureKind::Atoms(atoms) => atoms
                .iter()
                .all(|(v, _)| v.im == T::zero() && v.re >= T::zero()),
        }
    }

    /// `min supp ν` for real nonnegative support.
    pub fn min_support(&self) -> Option<T> {
        if !self.is_real_nonneg() {
            return None;
        }
        Some(match &self.kind {
            MeasureKind::Uniform { a, .. } => *a,
            MeasureKind::Atoms(atoms) => atoms.iter().map(|(v, _)| v.re).fold(T::infinity(), T::min),
        })
    }
}

/// Coefficients `ω_{-l}, …, ω_r` of one sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSequence<T> {
    pub seed: u64,
    pub l: usize,
    pub r: usize,
    pub values: Vec<Verblunsky<T>>,
}

impl<T: Real> SampledSequence<T> {
    /// Coefficient at site `n ∈ [-l, r]`.
    pub fn at(&self, n: i64) -> Option<&Verblunsky<T>> {
        let k = n + self.l as i64;
        if k < 0 {
            None
        } else {
            self.values.get(k as usize)
        }
    }

    pub fn word(&self) -> VerblunskyWord<T> {
        VerblunskyWord::new(self.values.clone())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// i.i.d. draws at sites `-l..=r`; site `n` uses draw `n` of stream 0, so
/// overlapping windows of the same seed agree.
pub fn sample_window<T: Real>(measure: &SingleSiteMeasure<T>, l: usize, r: usize, seed: u64) -> SampledSequence<T> {
    let s = IndexedStream::new(seed, 0);
    let values = (-(l as i64)..=r as i64).map(|n| measure.sample(s.uniform(n))).collect();
    SampledSequence { seed, l, r, values }
}

/// `∂D ∖ R_{min supp ν}` for a measure on `[0, 1)`.
pub fn almost_sure_spectrum_nonneg<T: Real>(measure: &SingleSiteMeasure<T>) -> Result<ArcSet<T>> {
    let a = measure.min_support().ok_or_else(|| {
        Error::UnsupportedMeasure("support is not contained in [0, 1)".into())
    })?;
    constant_spectrum(a)
}

/// Zeros of the discriminant of the window word. Real words go through the
/// sign-change pipeline (exact zero counts for any length); complex words
/// through the companion matrix with its cross-check.
pub fn window_zero_set<T: Real>(sequence: &SampledSequence<T>) -> Result<ZeroSet<T>> {
    word_zero_set(&sequence.word())
}

pub fn word_zero_set<T: Real>(word: &VerblunskyWord<T>) -> Result<ZeroSet<T>> {
    if word.is_empty() {
        return Err(Error::Domain("empty window".into()));
    }
    if word.is_real() {
        grid_zeros(word, default_grid(word.len()))
    } else {
        discriminant_zeros(word)
    }
}

/// Bound on the number of words enumerated by [`periodic_union_spectrum`].
pub const MAX_ENUMERATION: usize = 1_000_000;

/// Union of the periodic spectra over all words up to `max_period`.
///
/// This is a finite truncation of a union whose closure is the almost-sure
/// spectrum, hence an inner approximation of it; it grows with
/// `max_period`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicUnion<T> {
    pub spectrum: ArcSet<T>,
    pub max_period: usize,
    /// Words whose spectra were computed (one per necklace).
    pub words: usize,
}

/// Whether `w` is the lexicographically least of its rotations.
fn is_necklace(w: &[usize]) -> bool {
    (1..w.len()).all(|k| {
        let rot = w[k..].iter().chain(&w[..k]);
        w.iter().le(rot)
    })
}

pub fn periodic_union_spectrum<T: Real>(measure: &SingleSiteMeasure<T>, max_period: usize) -> Result<PeriodicUnion<T>> {
    let atoms = match measure.kind() {
        MeasureKind::Atoms(a) => a.iter().map(|(v, _)| *v).collect::<Vec<_>>(),
        MeasureKind::Uniform { .. } => {
            return Err(Error::UnsupportedMeasure(
                "periodic union needs an atomic measure".into(),
            ))
        }
    };
    let k = atoms.len();
    let total = k.checked_pow(max_period as u32).unwrap_or(usize::MAX);
    if total > MAX_ENUMERATION {
        return Err(Error::Size {
            what: "atoms^max_period",
            got: total,
            limit: MAX_ENUMERATION,
        });
    }
    let mut words = Vec::new();
    for p in 1..=max_period {
        let mut idx = vec![0usize; p];
        loop {
            if is_necklace(&idx) {
                words.push(idx.clone());
            }
            // odometer step; stop after the last word
            let mut j = p;
            let mut done = true;
            while j > 0 {
                j -= 1;
                idx[j] += 1;
                if idx[j] < k {
                    done = false;
                    break;
                }
                idx[j] = 0;
            }
            if done {
                break;
            }
        }
    }
    let arcs: Vec<Vec<Arc<T>>> = words
        .par_iter()
        .map(|w| {
            let word = VerblunskyWord::from_complex(w.iter().map(|&i| atoms[i]))?;
            Ok(band_structure(&word, 64 * w.len().max(4))?.bands)
        })
        .collect::<Result<_>>()?;
    Ok(PeriodicUnion {
        spectrum: ArcSet::from_arcs(arcs.into_iter().flatten()),
        max_period,
        words: words.len(),
    })
}

/// Where the window coefficients come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source<T> {
    /// i.i.d. draws; compared against the almost-sure spectrum.
    Random(SingleSiteMeasure<T>),
    /// The periodic extension of a word, site `n` holding letter `n mod p`;
    /// compared against the band spectrum of the word.
    Periodic(VerblunskyWord<T>),
}

impl<T: Real> Source<T> {
    pub fn window(&self, l: usize, r: usize, seed: u64) -> Result<SampledSequence<T>> {
        match self {
            Source::Random(m) => Ok(sample_window(m, l, r, seed)),
            Source::Periodic(w) => {
                let p = w.len() as i64;
                if p == 0 {
                    return Err(Error::Domain("empty periodic word".into()));
                }
                let values = (-(l as i64)..=r as i64)
                    .map(|n| w.coeffs()[n.rem_euclid(p) as usize])
                    .collect();
                Ok(SampledSequence { seed, l, r, values })
            }
        }
    }

    pub fn reference(&self) -> Result<ArcSet<T>> {
        match self {
            Source::Random(m) => almost_sure_spectrum_nonneg(m),
            Source::Periodic(w) => Ok(band_structure(w, 64 * w.len().max(4))?.spectrum),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRecord<T> {
    pub k: usize,
    pub l: usize,
    pub r: usize,
    pub distance: T,
    pub zero_count: usize,
}

/// Window `(l, r)` whose length `l + r + 1` is `n`, split as evenly as
/// possible.
pub fn centered_window(n: usize) -> (usize, usize) {
    let l = n.saturating_sub(1) / 2;
    (l, n.saturating_sub(1) - l)
}

/// `dist_H(zeros of window k, reference)` for each window of the schedule.
pub fn convergence_experiment<T: Real>(
    source: &Source<T>,
    schedule: &[(usize, usize)],
    seed: u64,
) -> Result<Vec<ConvergenceRecord<T>>> {
    if schedule.windows(2).any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1 || w[1] == w[0]) {
        return Err(Error::Domain("window schedule must be increasing".into()));
    }
    let reference = source.reference()?;
    schedule
        .iter()
        .enumerate()
        .map(|(k, &(l, r))| {
            let seq = source.window(l, r, seed)?;
            let zeros = window_zero_set(&seq)?;
            Ok(ConvergenceRecord {
                k,
                l,
                r,
                distance: hausdorff_distance(&zeros, &reference)?,
                zero_count: zeros.count(),
            })
        })
        .collect()
}
