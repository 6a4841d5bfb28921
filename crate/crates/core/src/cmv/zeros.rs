//! Zeros of the periodic discriminant.
//!
//! Two independent pipelines: roots of the coefficient polynomial
//! (companion matrix), and sign changes of the normalized discriminant on
//! the circle. For real words the sign-change pipeline also knows how many
//! zeros every gap-to-gap interval must contain, which makes it reliable
//! for windows of thousands of sites where the polynomial is hopeless.

use num_complex::Complex;
use rayon::prelude::*;

use crate::circle::{geodesic, ZeroSet};
use crate::cmv::discriminant::{complex_lifted, discriminant_poly, RealDiscriminant, Sample};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::verblunsky::VerblunskyWord;

/// Angles closer than this are merged into one entry of a [`ZeroSet`].
pub const ZERO_MERGE_TOL: f64 = 1e-12;
/// Tolerance for `||z| - 1|` of polynomial roots.
pub const UNIMODULAR_TOL: f64 = 1e-8;
/// Largest allowed disagreement between the two pipelines.
pub const CROSS_CHECK_TOL: f64 = 1e-7;

const MAX_REFINE: usize = 24;
const BISECT_TOL: f64 = 1e-13;

/// Default grid for the sign-change pipeline.
pub fn default_grid(p: usize) -> usize {
    4 * p + 64
}

/// Sign of the lifted normalized discriminant, either through the real
/// evaluator or the complex product.
enum Signer<'a, T> {
    Real(RealDiscriminant<T>),
    Complex(&'a VerblunskyWord<T>),
}

impl<T: Real> Signer<'_, T> {
    fn sample(&self, theta: T) -> Sample<T> {
        // the rotation count assumes |θ/2| ≤ π/2; reduce lifted angles
        if theta >= T::PI() {
            let p = match self {
                Signer::Real(r) => r.period(),
                Signer::Complex(w) => w.len(),
            };
            let mut s = shifted(&self.sample(theta - T::two_pi()), p);
            s.theta = theta;
            return s;
        }
        match self {
            Signer::Real(r) => r.sample(theta),
            Signer::Complex(w) => Sample {
                theta,
                positive: complex_lifted(w, theta).value > T::zero(),
                count: None,
                estimate: None,
            },
        }
    }

    fn value(&self, theta: T) -> T {
        match self {
            Signer::Real(r) => r.eval(theta).value(),
            Signer::Complex(w) => complex_lifted(w, theta).value,
        }
    }

    /// The sign change in `(lo, hi)`, located by the Illinois variant of
    /// regula falsi to within `BISECT_TOL`. A bisection step is forced
    /// whenever two secant steps fail to halve the bracket.
    fn bisect(&self, mut lo: T, mut hi: T, lo_positive: bool) -> T {
        let tol = T::tol(BISECT_TOL);
        let two = T::lit(2.0);
        let (mut flo, mut fhi) = (self.value(lo), self.value(hi));
        let mut side = 0i8;
        let mut slow = 0;
        for _ in 0..400 {
            let width = hi - lo;
            if width <= tol {
                break;
            }
            let mid = (lo + hi) / two;
            let mut x = hi - fhi * (hi - lo) / (fhi - flo);
            if slow >= 2 || !(x > lo && x < hi) {
                x = mid;
                slow = 0;
            }
            let fx = self.value(x);
            if fx == T::zero() {
                return x;
            }
            if (fx > T::zero()) == lo_positive {
                lo = x;
                flo = fx;
                if side == -1 {
                    fhi /= two;
                }
                side = -1;
            } else {
                hi = x;
                fhi = fx;
                if side == 1 {
                    flo /= two;
                }
                side = 1;
            }
            if hi - lo > width / two {
                slow += 1;
            } else {
                slow = 0;
            }
        }
        (lo + hi) / two
    }
}

/// Zeros of `D` from sign changes on a grid of `grid` points (half-step
/// offset, so the seam `θ = ±π` is never sampled), refined until the
/// number of zeros is accounted for.
///
/// Real words: consecutive gap samples bracket an exact zero count; any
/// interval whose sign changes fall short is subdivided. Complex words:
/// the grid is refined globally until `p` sign changes are seen.
pub fn grid_zeros<T: Real>(word: &VerblunskyWord<T>, grid: usize) -> Result<ZeroSet<T>> {
    let p = word.len();
    if p == 0 {
        return Err(Error::Domain("zeros of an empty word".into()));
    }
    let signer = match RealDiscriminant::new(word) {
        Some(r) => Signer::Real(r),
        None => Signer::Complex(word),
    };
    let mut g = grid.max(8);
    for _ in 0..MAX_REFINE {
        let h = T::two_pi() / T::count(g);
        let samples: Vec<Sample<T>> = (0..g)
            .into_par_iter()
            .map(|k| signer.sample(-T::PI() + (T::count(k) + T::lit(0.5)) * h))
            .collect();
        let zeros = if samples.iter().any(|s| s.count.is_some()) {
            anchored(&signer, samples, p)?
        } else {
            plain(&signer, &samples, p)
        };
        if let Some(z) = zeros {
            return Ok(ZeroSet::from_angles(z, T::lit(ZERO_MERGE_TOL)));
        }
        g *= 2;
    }
    Err(Error::NumericalFailure(format!(
        "sign-change pipeline did not resolve {p} zeros"
    )))
}

fn shifted<T: Real>(s: &Sample<T>, p: usize) -> Sample<T> {
    Sample {
        theta: s.theta + T::two_pi(),
        positive: if p % 2 == 0 { s.positive } else { !s.positive },
        count: s.count.map(|c| c + p as i64),
        estimate: s.estimate.map(|c| c + p as i64),
    }
}

fn sign_change_cells<T: Real>(seq: &[Sample<T>]) -> Vec<(Sample<T>, Sample<T>)> {
    seq.windows(2)
        .filter(|w| w[0].positive != w[1].positive)
        .map(|w| (w[0], w[1]))
        .collect()
}

/// Sign changes over the whole circle, without count information.
fn plain<T: Real>(signer: &Signer<'_, T>, samples: &[Sample<T>], p: usize) -> Option<Vec<T>> {
    let mut seq = samples.to_vec();
    seq.push(shifted(&samples[0], p));
    let cells = sign_change_cells(&seq);
    if cells.len() != p {
        return None;
    }
    Some(
        cells
            .par_iter()
            .map(|(a, b)| signer.bisect(a.theta, b.theta, a.positive))
            .collect(),
    )
}

/// Zeros between consecutive gap samples with known counts.
fn anchored<T: Real>(
    signer: &Signer<'_, T>,
    samples: Vec<Sample<T>>,
    p: usize,
) -> Result<Option<Vec<T>>> {
    let first = samples.iter().position(|s| s.count.is_some()).expect("has anchor");
    let mut seq: Vec<Sample<T>> = samples[first..].to_vec();
    seq.extend(samples[..first].iter().map(|s| shifted(s, p)));
    seq.push(shifted(&samples[first], p));
    let mut out = Vec::with_capacity(p);
    let mut start = 0;
    for i in 1..seq.len() {
        if seq[i].count.is_some() {
            if !resolve(signer, &seq[start..=i], 0, &mut out)? {
                return Ok(None);
            }
            start = i;
        }
    }
    if out.len() != p {
        return Err(Error::NumericalFailure(format!(
            "found {} zeros for a word of length {p}",
            out.len()
        )));
    }
    Ok(Some(out))
}

/// `seq` starts and ends with anchors and has none inside.
fn resolve<T: Real>(
    signer: &Signer<'_, T>,
    seq: &[Sample<T>],
    depth: usize,
    out: &mut Vec<T>,
) -> Result<bool> {
    let a = seq[0];
    let b = seq[seq.len() - 1];
    let k = b.count.unwrap() - a.count.unwrap();
    if k < 0 {
        return Err(Error::NumericalFailure(format!(
            "zero count decreases between {} and {}",
            a.theta, b.theta
        )));
    }
    if k == 0 {
        return Ok(true);
    }
    if k == 1 {
        out.push(signer.bisect(a.theta, b.theta, a.positive));
        return Ok(true);
    }
    let cells = sign_change_cells(seq);
    if cells.len() as i64 == k {
        let roots: Vec<T> = cells
            .par_iter()
            .map(|(l, r)| signer.bisect(l.theta, r.theta, l.positive))
            .collect();
        out.extend(roots);
        return Ok(true);
    }
    if depth >= MAX_REFINE || b.theta - a.theta < T::tol(1e-12) {
        return Ok(false);
    }
    // refine the cells where the rotation estimate expects more zeros than
    // the signs show; all cells when it gives no hint
    let suspicious = |w: &[Sample<T>]| match (w[0].estimate, w[1].estimate) {
        (Some(x), Some(y)) => y - x != i64::from(w[0].positive != w[1].positive),
        _ => true,
    };
    let mut flagged = seq.windows(2).filter(|w| suspicious(w)).count();
    let all = flagged == 0;
    if all {
        flagged = seq.len() - 1;
    }
    let per_cell = (8 / flagged).max(1);
    let mut finer = Vec::with_capacity(seq.len() + flagged * per_cell);
    for w in seq.windows(2) {
        finer.push(w[0]);
        if all || suspicious(w) {
            let step = (w[1].theta - w[0].theta) / T::count(per_cell + 1);
            for j in 1..=per_cell {
                finer.push(signer.sample(w[0].theta + step * T::count(j)));
            }
        }
    }
    finer.push(b);
    // new anchors split the interval
    let mut start = 0;
    for i in 1..finer.len() {
        if finer[i].count.is_some() {
            if !resolve(signer, &finer[start..=i], depth + 1, out)? {
                return Ok(false);
            }
            start = i;
        }
    }
    Ok(true)
}

/// All `p` zeros of the discriminant polynomial, as angles.
///
/// Roots come from the balanced companion matrix; each must be unimodular
/// within [`UNIMODULAR_TOL`], and the set must agree with the sign-change
/// pipeline within [`CROSS_CHECK_TOL`].
pub fn discriminant_zeros<T: Real>(word: &VerblunskyWord<T>) -> Result<ZeroSet<T>> {
    let p = word.len();
    let poly = discriminant_poly(word)?;
    let roots = poly.as_poly().roots()?;
    let angles = unimodular_angles(&roots, "discriminant")?;
    let primary = ZeroSet::from_angles(angles, T::lit(ZERO_MERGE_TOL));
    let check = grid_zeros(word, default_grid(p).max(256))?;
    cross_check(&primary, &check)?;
    Ok(primary)
}

/// Angles of roots that must lie on the unit circle.
pub fn unimodular_angles<T: Real>(roots: &[Complex<T>], what: &str) -> Result<Vec<T>> {
    roots
        .iter()
        .map(|r| {
            let dev = (r.norm() - T::one()).abs();
            if dev > T::lit(UNIMODULAR_TOL) {
                Err(Error::NumericalFailure(format!(
                    "{what} root {r} is off the unit circle by {dev}"
                )))
            } else {
                Ok(r.arg())
            }
        })
        .collect()
}

/// Same count and every zero of each set within [`CROSS_CHECK_TOL`] of the
/// other.
pub fn cross_check<T: Real>(a: &ZeroSet<T>, b: &ZeroSet<T>) -> Result<()> {
    if a.count() != b.count() {
        return Err(Error::NumericalFailure(format!(
            "pipelines disagree on the zero count: {} vs {}",
            a.count(),
            b.count()
        )));
    }
    let worst = max_matching_gap(a, b).max(max_matching_gap(b, a));
    if worst > T::lit(CROSS_CHECK_TOL) {
        return Err(Error::NumericalFailure(format!(
            "pipelines disagree by {worst} in angle"
        )));
    }
    Ok(())
}

fn max_matching_gap<T: Real>(a: &ZeroSet<T>, b: &ZeroSet<T>) -> T {
    let bs = b.angles();
    a.angles()
        .iter()
        .map(|&x| {
            bs.iter()
                .map(|&y| geodesic(x, y))
                .fold(T::infinity(), T::min)
        })
        .fold(T::zero(), T::max)
}
