//! Dense complex eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form and the shifted QR iteration with Givens rotations.
//!
//! Only eigenvalues are computed; no Schur vectors are accumulated.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "row {i} has wrong length");
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Largest entrywise deviation from the identity.
    pub fn identity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((self[(i, j)] - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }

    /// Diagonal similarity scaling by powers of two so that row and column
    /// norms are comparable.
    pub fn balance(&mut self) {
        let n = self.n;
        let radix = T::lit(2.0);
        let sq = radix * radix;
        let l1 = |z: Complex<T>| z.re.abs() + z.im.abs();
        let mut done = false;
        while !done {
            done = true;
            for i in 0..n {
                let mut c = T::zero();
                let mut r = T::zero();
                for j in 0..n {
                    if j != i {
                        c += l1(self[(j, i)]);
                        r += l1(self[(i, j)]);
                    }
                }
                if c == T::zero() || r == T::zero() {
                    continue;
                }
                let s = c + r;
                let mut f = T::one();
                let mut g = r / radix;
                while c < g {
                    f *= radix;
                    c *= sq;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sq;
                }
                if (c + r) / f < T::lit(0.95) * s {
                    done = false;
                    let inv = T::one() / f;
                    for j in 0..n {
                        self[(i, j)] = self[(i, j)] * inv;
                        self[(j, i)] = self[(j, i)] * f;
                    }
                }
            }
        }
    }

    /// Reduces to upper Hessenberg form by unitary similarity.
    pub fn to_hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        for k in 0..n - 2 {
            let norm: T = (k + 1..n)
                .map(|i| self[(i, k)].norm_sqr())
                .sum::<T>()
                .sqrt();
            if norm == T::zero() {
                continue;
            }
            let x0 = self[(k + 1, k)];
            let phase = if x0.norm() == T::zero() {
                Complex::new(T::one(), T::zero())
            } else {
                x0 / x0.norm()
            };
            let alpha = -phase * norm;
            let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| self[(i, k)]).collect();
            v[0] -= alpha;
            let vn: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if vn == T::zero() {
                continue;
            }
            for z in v.iter_mut() {
                *z = *z / vn;
            }
            let two = T::lit(2.0);
            // left: rows k+1.., all columns from k
            for j in k..n {
                let mut dot = Complex::new(T::zero(), T::zero());
                for (t, i) in (k + 1..n).enumerate() {
                    dot += v[t].conj() * self[(i, j)];
                }
                for (t, i) in (k + 1..n).enumerate() {
                    let u = v[t] * dot * two;
                    self[(i, j)] -= u;
                }
            }
            // right: columns k+1.., all rows
            for i in 0..n {
                let mut dot = Complex::new(T::zero(), T::zero());
                for (t, j) in (k + 1..n).enumerate() {
                    dot += self[(i, j)] * v[t];
                }
                for (t, j) in (k + 1..n).enumerate() {
                    let u = dot * v[t].conj() * two;
                    self[(i, j)] -= u;
                }
            }
            for i in k + 2..n {
                self[(i, k)] = Complex::new(T::zero(), T::zero());
            }
        }
    }

    /// All eigenvalues of a general matrix.
    pub fn eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        let mut h = self.clone();
        h.balance();
        h.to_hessenberg();
        hessenberg_eigenvalues(h)
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Rotation `[[c, s], [-s̄, c]]` with real `c` that zeroes `y` in `(x, y)`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    let ax = x.norm();
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let norm = ax.hypot(ay);
    let c = ax / norm;
    let s = (x / ax) * y.conj() / norm;
    (c, s)
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift QR.
pub fn hessenberg_eigenvalues<T: Real>(mut h: CMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = h.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let mut eig = vec![zero; n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = T::epsilon();
    let half = T::lit(0.5);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 60;
    while hi > 0 {
        // locate the active unreduced block [lo..=hi]
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == T::zero() { T::one() } else { s };
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NumericalFailure(format!(
                "QR iteration did not converge at index {hi}"
            )));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift
            h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * T::lit(0.75), T::zero())
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let m = (a - d) * half;
            let disc = (m * m + b * c).sqrt();
            let mean = (a + d) * half;
            let l1 = mean + disc;
            let l2 = mean - disc;
            if (l1 - d).norm() < (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = u * c + s * v;
                h[(k + 1, j)] = -s.conj() * u + v * c;
            }
            h[(k + 1, k)] = zero;
            rots.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rots[idx];
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + v * s.conj();
                h[(i, k + 1)] = -u * s + v * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    eig[0] = h[(0, 0)];
    Ok(eig)
}
