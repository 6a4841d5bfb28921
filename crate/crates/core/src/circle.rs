//! Geometry on the unit circle: canonical angles, points, arc unions and
//! zero multisets, plus the Hausdorff distance in the geodesic metric.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// An angle with canonical representative in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Angle<T>(T);

impl<T: Real> Angle<T> {
    pub fn new(theta: T) -> Self {
        Angle(canonical(theta))
    }

    pub fn zero() -> Self {
        Angle(T::zero())
    }

    #[inline]
    pub fn radians(self) -> T {
        self.0
    }

    /// Geodesic distance `min(|a - b|, 2π - |a - b|)`.
    pub fn distance(self, other: Self) -> T {
        geodesic(self.0, other.0)
    }

    /// Counterclockwise offset from `self` to `other`, in `[0, 2π)`.
    pub fn ccw_to(self, other: Self) -> T {
        let d = other.0 - self.0;
        if d < T::zero() {
            d + T::two_pi()
        } else {
            d
        }
    }

    pub fn point(self) -> CirclePoint<T> {
        CirclePoint::from_angle(self.0)
    }
}

/// Reduces `theta` to `[-π, π)`.
pub fn canonical<T: Real>(theta: T) -> T {
    let tau = T::two_pi();
    let pi = T::PI();
    let mut r = theta - tau * ((theta + pi) / tau).floor();
    if r >= pi {
        r -= tau;
    }
    if r < -pi {
        r += tau;
    }
    r
}

/// Geodesic distance between two angles given in any representation.
pub fn geodesic<T: Real>(a: T, b: T) -> T {
    let tau = T::two_pi();
    let d = (a - b).abs() % tau;
    d.min(tau - d)
}

/// A point `e^{iθ}` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint<T> {
    value: Complex<T>,
    angle: Angle<T>,
}

impl<T: Real> CirclePoint<T> {
    pub fn from_angle(theta: T) -> Self {
        let angle = Angle::new(theta);
        CirclePoint {
            value: Complex::from_polar(T::one(), angle.radians()),
            angle,
        }
    }

    /// Accepts `z` with `||z| - 1| <= 1e-12`.
    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        let r = z.norm();
        if !((r - T::one()).abs() <= T::tol(1e-12)) {
            return Err(Error::Domain(format!("|z| = {r} is not unimodular")));
        }
        Ok(Self::from_angle(z.arg()))
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.value
    }

    #[inline]
    pub fn angle(&self) -> Angle<T> {
        self.angle
    }

    #[inline]
    pub fn theta(&self) -> T {
        self.angle.radians()
    }
}

/// A closed arc running counterclockwise from `start` through `len` radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc<T> {
    start: Angle<T>,
    len: T,
}

impl<T: Real> Arc<T> {
    /// Arc from `start` counterclockwise to `end`. `end` may be given in any
    /// lift; the length is the counterclockwise offset. Equal endpoints give a
    /// single point.
    pub fn new(start: T, end: T) -> Self {
        let s = Angle::new(start);
        let len = s.ccw_to(Angle::new(end));
        Arc { start: s, len }
    }

    /// Arc with explicit length, clamped to `[0, 2π]`.
    pub fn with_len(start: T, len: T) -> Self {
        Arc {
            start: Angle::new(start),
            len: len.max(T::zero()).min(T::two_pi()),
        }
    }

    pub fn point(theta: T) -> Self {
        Self::with_len(theta, T::zero())
    }

    pub fn full() -> Self {
        Arc {
            start: Angle::new(-T::PI()),
            len: T::two_pi(),
        }
    }

    #[inline]
    pub fn start(&self) -> Angle<T> {
        self.start
    }

    pub fn end(&self) -> Angle<T> {
        Angle::new(self.start.radians() + self.len)
    }

    /// End in the lift starting at `start` (may exceed π).
    pub fn end_lifted(&self) -> T {
        self.start.radians() + self.len
    }

    #[inline]
    pub fn len(&self) -> T {
        self.len
    }

    pub fn is_full(&self) -> bool {
        self.len >= T::two_pi()
    }

    pub fn midpoint(&self) -> Angle<T> {
        Angle::new(self.start.radians() + self.len / T::lit(2.0))
    }

    pub fn contains(&self, theta: T, tol: T) -> bool {
        if self.is_full() {
            return true;
        }
        let off = self.start.ccw_to(Angle::new(theta));
        off <= self.len + tol || off >= T::two_pi() - tol
    }

    /// Strict interior membership.
    pub fn contains_interior(&self, theta: T) -> bool {
        if self.is_full() {
            return true;
        }
        let off = self.start.ccw_to(Angle::new(theta));
        off > T::zero() && off < self.len
    }

    pub fn distance_to(&self, theta: T) -> T {
        if self.contains(theta, T::zero()) {
            return T::zero();
        }
        geodesic(theta, self.start.radians()).min(geodesic(theta, self.end_lifted()))
    }
}

/// A finite union of closed arcs, kept sorted by start and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSet<T> {
    arcs: Vec<Arc<T>>,
}

impl<T: Real> Default for ArcSet<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Real> ArcSet<T> {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![Arc::full()],
        }
    }

    /// Normalizes an arbitrary collection: merges overlapping and touching
    /// arcs (gaps up to 1e-12 are closed) and sorts by start.
    pub fn from_arcs(arcs: impl IntoIterator<Item = Arc<T>>) -> Self {
        Self::from_arcs_with_tol(arcs, T::tol(1e-12))
    }

    pub fn from_arcs_with_tol(arcs: impl IntoIterator<Item = Arc<T>>, merge_tol: T) -> Self {
        let mut iv: Vec<(T, T)> = Vec::new();
        for a in arcs {
            if a.is_full() {
                return Self::full();
            }
            iv.push((a.start.radians(), a.end_lifted()));
        }
        if iv.is_empty() {
            return Self::empty();
        }
        iv.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite arc endpoints"));
        let mut merged: Vec<(T, T)> = Vec::with_capacity(iv.len());
        for (s, e) in iv {
            match merged.last_mut() {
                Some(last) if s <= last.1 + merge_tol => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }
        // wraparound: the last interval may run past π into the first ones
        let tau = T::two_pi();
        while merged.len() > 1 {
            let first = merged[0];
            let last = merged.len() - 1;
            if merged[last].1 + merge_tol >= first.0 + tau {
                merged[last].1 = merged[last].1.max(first.1 + tau);
                merged.remove(0);
            } else {
                break;
            }
        }
        if merged.len() == 1 && merged[0].1 - merged[0].0 + merge_tol >= tau {
            return Self::full();
        }
        let mut arcs: Vec<Arc<T>> = merged
            .into_iter()
            .map(|(s, e)| Arc::with_len(s, e - s))
            .collect();
        arcs.sort_by(|a, b| {
            a.start
                .radians()
                .partial_cmp(&b.start.radians())
                .expect("finite")
        });
        ArcSet { arcs }
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    pub fn measure(&self) -> T {
        self.arcs.iter().map(|a| a.len).sum()
    }

    pub fn contains(&self, theta: T) -> bool {
        self.contains_with_tol(theta, T::zero())
    }

    pub fn contains_with_tol(&self, theta: T, tol: T) -> bool {
        self.arcs.iter().any(|a| a.contains(theta, tol))
    }

    /// Membership in the interior, used where the set stands for an open gap.
    pub fn contains_interior(&self, theta: T) -> bool {
        self.arcs.iter().any(|a| a.contains_interior(theta))
    }

    /// Open gaps between consecutive arcs, as raw arcs (not normalized). A
    /// single point leaves one gap of length 2π.
    pub fn gaps(&self) -> Vec<Arc<T>> {
        if self.arcs.is_empty() || self.is_full() {
            return Vec::new();
        }
        let n = self.arcs.len();
        (0..n)
            .filter_map(|i| {
                let a = self.arcs[i];
                let b = self.arcs[(i + 1) % n];
                let len = if n == 1 {
                    T::two_pi() - a.len
                } else {
                    a.end().ccw_to(b.start)
                };
                (len > T::zero()).then(|| Arc::with_len(a.end().radians(), len))
            })
            .collect()
    }

    /// Closure of the complement.
    pub fn complement(&self) -> Self {
        if self.arcs.is_empty() {
            return Self::full();
        }
        ArcSet::from_arcs_with_tol(self.gaps(), T::zero())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_arcs(self.arcs.iter().chain(other.arcs.iter()).copied())
    }

    pub fn rotate(&self, by: T) -> Self {
        Self::from_arcs(
            self.arcs
                .iter()
                .map(|a| Arc::with_len(a.start.radians() + by, a.len)),
        )
    }

    /// Grows every arc by `eps` on both sides.
    pub fn dilate(&self, eps: T) -> Self {
        Self::from_arcs(
            self.arcs
                .iter()
                .map(|a| Arc::with_len(a.start.radians() - eps, a.len + eps * T::lit(2.0))),
        )
    }

    /// Geodesic distance from `theta` to the set; infinite when empty.
    pub fn distance_to(&self, theta: T) -> T {
        let n = self.arcs.len();
        if n == 0 {
            return T::infinity();
        }
        let t = canonical(theta);
        let idx = self.arcs.partition_point(|a| a.start.radians() <= t);
        let prev = if idx == 0 { n - 1 } else { idx - 1 };
        let next = if idx == n { 0 } else { idx };
        self.arcs[prev]
            .distance_to(t)
            .min(self.arcs[next].distance_to(t))
    }
}

/// A sorted multiset of angles with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet<T> {
    zeros: Vec<(Angle<T>, usize)>,
}

impl<T: Real> ZeroSet<T> {
    pub fn empty() -> Self {
        ZeroSet { zeros: Vec::new() }
    }

    /// Builds a zero set, merging angles closer than `merge_tol` into a
    /// single entry with multiplicity.
    pub fn from_angles(angles: impl IntoIterator<Item = T>, merge_tol: T) -> Self {
        let mut a: Vec<T> = angles.into_iter().map(canonical).collect();
        a.sort_by(|x, y| x.partial_cmp(y).expect("finite angle"));
        let mut zeros: Vec<(Angle<T>, usize)> = Vec::with_capacity(a.len());
        for t in a {
            match zeros.last_mut() {
                Some((last, m)) if t - last.radians() <= merge_tol => *m += 1,
                _ => zeros.push((Angle(t), 1)),
            }
        }
        if zeros.len() > 1 {
            let last = zeros.len() - 1;
            if zeros[0].0.distance(zeros[last].0) <= merge_tol {
                let m = zeros[last].1;
                zeros.pop();
                zeros[0].1 += m;
            }
        }
        ZeroSet { zeros }
    }

    pub fn entries(&self) -> &[(Angle<T>, usize)] {
        &self.zeros
    }

    /// Angles of distinct zeros in increasing order.
    pub fn angles(&self) -> Vec<T> {
        self.zeros.iter().map(|(a, _)| a.radians()).collect()
    }

    /// Number of zeros counted with multiplicity.
    pub fn count(&self) -> usize {
        self.zeros.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn to_arc_set(&self) -> ArcSet<T> {
        ArcSet {
            arcs: self
                .zeros
                .iter()
                .map(|(a, _)| Arc::point(a.radians()))
                .collect(),
        }
    }

    /// Smallest `|θ|` over the zeros.
    pub fn min_abs_angle(&self) -> Option<T> {
        self.zeros
            .iter()
            .map(|(a, _)| a.radians().abs())
            .reduce(T::min)
    }
}

/// Anything that is a compact subset of the circle made of arcs and points.
pub trait CircleSet<T: Real> {
    fn to_arcs(&self) -> ArcSet<T>;
}

impl<T: Real> CircleSet<T> for ArcSet<T> {
    fn to_arcs(&self) -> ArcSet<T> {
        self.clone()
    }
}

impl<T: Real> CircleSet<T> for ZeroSet<T> {
    fn to_arcs(&self) -> ArcSet<T> {
        self.to_arc_set()
    }
}

/// `sup_{x ∈ X} d(x, Y)` in the geodesic metric.
///
/// The function `x ↦ d(x, Y)` is piecewise linear, so its supremum over an
/// arc of `X` is attained at an endpoint of that arc or at the midpoint of a
/// gap of `Y` lying inside it.
pub fn directed_distance<T: Real>(x: &impl CircleSet<T>, y: &impl CircleSet<T>) -> Result<T> {
    let xs = x.to_arcs();
    let ys = y.to_arcs();
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    if ys.is_full() {
        return Ok(T::zero());
    }
    let mut best = T::zero();
    for a in xs.arcs() {
        best = best.max(ys.distance_to(a.start.radians()));
        best = best.max(ys.distance_to(a.end_lifted()));
    }
    for g in ys.gaps() {
        let mid = g.midpoint().radians();
        if xs.contains(mid) {
            best = best.max(ys.distance_to(mid));
        }
    }
    Ok(best)
}

/// Hausdorff distance on the circle with the geodesic angle metric.
pub fn hausdorff_distance<T: Real>(x: &impl CircleSet<T>, y: &impl CircleSet<T>) -> Result<T> {
    Ok(directed_distance(x, y)?.max(directed_distance(y, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_range() {
        assert_eq!(canonical(PI), -PI);
        assert_eq!(canonical(-PI), -PI);
        assert!((canonical(3.0 * PI + 0.25) - (-PI + 0.25)).abs() < 1e-12);
        assert!((canonical(-0.5f64) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_from_complex_rejects_off_circle() {
        assert!(CirclePoint::from_complex(Complex::new(1.0, 1e-3)).is_err());
        let p = CirclePoint::from_complex(Complex::new(0.0f64, 1.0)).unwrap();
        assert!((p.theta() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wraparound_merge_and_complement() {
        let s = ArcSet::from_arcs([Arc::new(2.5, -2.5), Arc::new(-2.6, -2.0)]);
        assert_eq!(s.arcs().len(), 1);
        assert!((s.measure() - (2.0 * PI - 4.5)).abs() < 1e-12);
        assert!(s.contains(PI - 0.1));
        assert!(!s.contains(0.0));
        let c = s.complement();
        assert_eq!(c.arcs().len(), 1);
        assert!((c.measure() - 4.5).abs() < 1e-12);
        assert!(s.union(&c).is_full());
    }

    #[test]
    fn hausdorff_examples() {
        let a = ZeroSet::from_angles([0.0], 0.0);
        let b = ZeroSet::from_angles([PI], 0.0);
        assert!((hausdorff_distance(&a, &b).unwrap() - PI).abs() < 1e-15);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);

        let p = ZeroSet::from_angles([0.1f64], 0.0);
        let arc = ArcSet::from_arcs([Arc::new(0.2, 0.5)]);
        // the point is 0.1 from the arc, but the arc's far end is 0.4 away
        assert!((directed_distance(&p, &arc).unwrap() - 0.1).abs() < 1e-12);
        assert!((hausdorff_distance(&p, &arc).unwrap() - 0.4).abs() < 1e-12);

        let e: ArcSet<f64> = ArcSet::empty();
        assert!(hausdorff_distance(&e, &arc).is_err());
    }

    #[test]
    fn gap_midpoint_is_found() {
        // arc covering the whole circle except a small gap near 0; a point
        // set sitting at both gap edges is close, but the gap midpoint of a
        // sparse set is not
        let x = ArcSet::from_arcs([Arc::new(0.1, -0.1)]);
        let y = ZeroSet::from_angles([0.1, -0.1], 0.0);
        let d = hausdorff_distance(&x, &y).unwrap();
        assert!((d - (PI - 0.1)).abs() < 1e-12, "{d}");
    }

    #[test]
    fn zero_set_merges_multiplicities() {
        let z = ZeroSet::from_angles([0.3, 0.3 + 1e-12, -PI, PI - 1e-13, 1.0], 1e-10);
        assert_eq!(z.distinct(), 3);
        assert_eq!(z.count(), 5);
    }

    fn brute_hausdorff(x: &[f64], y: &[f64]) -> f64 {
        let d = |p: f64, s: &[f64]| s.iter().map(|&q| geodesic(p, q)).fold(f64::MAX, f64::min);
        let a = x.iter().map(|&p| d(p, y)).fold(0.0, f64::max);
        let b = y.iter().map(|&p| d(p, x)).fold(0.0, f64::max);
        a.max(b)
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(
            x in prop::collection::vec(-PI..PI, 1..12),
            y in prop::collection::vec(-PI..PI, 1..12),
            z in prop::collection::vec(-PI..PI, 1..12),
        ) {
            let (zx, zy, zz) = (
                ZeroSet::from_angles(x.clone(), 0.0),
                ZeroSet::from_angles(y.clone(), 0.0),
                ZeroSet::from_angles(z, 0.0),
            );
            let dxy = hausdorff_distance(&zx, &zy).unwrap();
            let dyx = hausdorff_distance(&zy, &zx).unwrap();
            let dxz = hausdorff_distance(&zx, &zz).unwrap();
            let dzy = hausdorff_distance(&zz, &zy).unwrap();
            prop_assert!((dxy - dyx).abs() < 1e-12);
            prop_assert!(dxy <= dxz + dzy + 1e-12);
            prop_assert_eq!(hausdorff_distance(&zx, &zx).unwrap(), 0.0);
            prop_assert!((dxy - brute_hausdorff(&x, &y)).abs() < 1e-12);
        }

        #[test]
        fn arc_distance_matches_dense_sampling(
            s in -PI..PI, len in 0.0..6.0f64, t in -PI..PI,
        ) {
            let arcs = ArcSet::from_arcs([Arc::with_len(s, len)]);
            let pts: Vec<f64> = (0..=4000).map(|k| s + len * k as f64 / 4000.0).collect();
            let brute = pts.iter().map(|&p| geodesic(p, t)).fold(f64::MAX, f64::min);
            prop_assert!((arcs.distance_to(t) - brute).abs() < 2e-3);
        }

        #[test]
        fn complement_partitions_circle(
            arcs in prop::collection::vec((-PI..PI, 0.0..2.0f64), 1..6),
        ) {
            let set = ArcSet::from_arcs(arcs.into_iter().map(|(s, l)| Arc::with_len(s, l)));
            let c = set.complement();
            prop_assert!((set.measure() + c.measure() - 2.0 * PI).abs() < 1e-9);
            prop_assert!(set.union(&c).is_full());
        }
    }
}
