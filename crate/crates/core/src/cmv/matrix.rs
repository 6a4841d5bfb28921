//! Finite sections of CMV matrices, assembled from the `L M` factorization.

use std::ops::Range;

use num_complex::Complex;

use crate::circle::ZeroSet;
use crate::cmv::zeros::{unimodular_angles, ZERO_MERGE_TOL};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::verblunsky::VerblunskyWord;

/// Nonzero entries `(column, value)` of one row.
#[derive(Debug, Clone, PartialEq)]
pub struct CmvRow<T> {
    pub row: usize,
    pub entries: Vec<(usize, Complex<T>)>,
}

impl<T: Real> CmvRow<T> {
    /// Entry at `col`, zero when absent.
    pub fn get(&self, col: usize) -> Complex<T> {
        self.entries
            .iter()
            .find(|(c, _)| *c == col)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }
}

/// `(α_j, ρ_j)` for `j < n`; indices at or past `n` do not exist.
struct Coeffs<T> {
    a: Vec<Complex<T>>,
    r: Vec<T>,
}

impl<T: Real> Coeffs<T> {
    fn n(&self) -> usize {
        self.a.len()
    }

    /// Row `i` of `L = Θ_0 ⊕ Θ_2 ⊕ ⋯`, `Θ_j = [[ᾱ_j, ρ_j], [ρ_j, -α_j]]`.
    fn l_row(&self, i: usize) -> Vec<(usize, Complex<T>)> {
        let c = |x: T| Complex::new(x, T::zero());
        if i % 2 == 0 {
            vec![(i, self.a[i].conj()), (i + 1, c(self.r[i]))]
        } else {
            vec![(i - 1, c(self.r[i - 1])), (i, -self.a[i - 1])]
        }
    }

    /// Row `k` of `M = 1 ⊕ Θ_1 ⊕ Θ_3 ⊕ ⋯`.
    fn m_row(&self, k: usize) -> Vec<(usize, Complex<T>)> {
        let c = |x: T| Complex::new(x, T::zero());
        if k == 0 {
            vec![(0, c(T::one()))]
        } else if k % 2 == 1 {
            vec![(k, self.a[k].conj()), (k + 1, c(self.r[k]))]
        } else {
            vec![(k - 1, c(self.r[k - 1])), (k, -self.a[k - 1])]
        }
    }

    fn row(&self, i: usize) -> CmvRow<T> {
        let n = self.n();
        let mut entries: Vec<(usize, Complex<T>)> = Vec::with_capacity(5);
        for (k, lv) in self.l_row(i) {
            if k >= n {
                continue;
            }
            for (j, mv) in self.m_row(k) {
                if j >= n {
                    continue;
                }
                match entries.iter_mut().find(|(c, _)| *c == j) {
                    Some((_, v)) => *v += lv * mv,
                    None => entries.push((j, lv * mv)),
                }
            }
        }
        entries.sort_by_key(|(c, _)| *c);
        CmvRow { row: i, entries }
    }
}

/// Rows `rows` of the CMV matrix built from the first `n = word.len()`
/// coefficients, with every index `≥ n` cut off. Rows whose entries reach
/// past `n` are therefore the rows of the `n × n` section, not of the
/// half-line matrix.
pub fn assemble_cmv_rows<T: Real>(word: &VerblunskyWord<T>, rows: Range<usize>) -> Result<Vec<CmvRow<T>>> {
    let n = word.len();
    if rows.end > n {
        return Err(Error::Domain(format!(
            "rows {}..{} exceed the word length {n}",
            rows.start, rows.end
        )));
    }
    let c = Coeffs {
        a: word.coeffs().iter().map(|v| v.alpha()).collect(),
        r: word.coeffs().iter().map(|v| v.rho()).collect(),
    };
    Ok(rows.map(|i| c.row(i)).collect())
}

/// The `N × N` section with `α_{N-1}` replaced by a unimodular `boundary`;
/// this matrix is unitary.
pub fn finite_cmv_matrix<T: Real>(word: &VerblunskyWord<T>, boundary: Complex<T>) -> Result<CMatrix<T>> {
    let n = word.len();
    if n == 0 {
        return Err(Error::Domain("CMV section of an empty word".into()));
    }
    if (boundary.norm() - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::Domain(format!("boundary {boundary} is not unimodular")));
    }
    let mut a: Vec<Complex<T>> = word.coeffs().iter().map(|v| v.alpha()).collect();
    let mut r: Vec<T> = word.coeffs().iter().map(|v| v.rho()).collect();
    a[n - 1] = boundary;
    r[n - 1] = T::zero();
    let c = Coeffs { a, r };
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for (j, v) in c.row(i).entries {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

/// Eigenvalue angles of [`finite_cmv_matrix`].
pub fn finite_cmv_eigenvalues<T: Real>(word: &VerblunskyWord<T>, boundary: Complex<T>) -> Result<ZeroSet<T>> {
    let m = finite_cmv_matrix(word, boundary)?;
    let ev = m.eigenvalues()?;
    let angles = unimodular_angles(&ev, "CMV eigenvalue")?;
    Ok(ZeroSet::from_angles(angles, T::lit(ZERO_MERGE_TOL)))
}
