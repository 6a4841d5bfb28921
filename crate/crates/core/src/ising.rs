//! The periodic one-dimensional Ising chain: energies, partition functions,
//! Lee-Yang zeros and their CMV description.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{hausdorff_distance, ArcSet, ZeroSet};
use crate::cmv::{unimodular_angles, ZERO_MERGE_TOL};
use crate::ensemble::word_zero_set;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rng::IndexedStream;
use crate::scalar::Real;
use crate::transfer::gap_arc;
use crate::verblunsky::{Verblunsky, VerblunskyWord};

/// Largest chain enumerated by [`partition_bruteforce`].
pub const MAX_BRUTEFORCE: usize = 24;

/// Ferromagnetic chain with periodic boundary conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsingChain<T> {
    couplings: Vec<T>,
    tau: T,
    k_b: T,
}

impl<T: Real> IsingChain<T> {
    /// Chain with `k_B = 1`.
    pub fn new(couplings: Vec<T>, tau: T) -> Result<Self> {
        Self::with_boltzmann(couplings, tau, T::one())
    }

    pub fn with_boltzmann(couplings: Vec<T>, tau: T, k_b: T) -> Result<Self> {
        if couplings.is_empty() {
            return Err(Error::Domain("chain needs at least one coupling".into()));
        }
        if let Some(j) = couplings.iter().find(|j| !(**j > T::zero() && j.is_finite())) {
            return Err(Error::Domain(format!("coupling {j} is not positive")));
        }
        if !(tau > T::zero() && k_b > T::zero()) {
            return Err(Error::Domain(format!(
                "temperature and k_B must be positive (tau = {tau}, k_B = {k_b})"
            )));
        }
        Ok(IsingChain { couplings, tau, k_b })
    }

    pub fn couplings(&self) -> &[T] {
        &self.couplings
    }

    pub fn len(&self) -> usize {
        self.couplings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.couplings.is_empty()
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn k_b(&self) -> T {
        self.k_b
    }

    /// `k_B τ`.
    pub fn thermal(&self) -> T {
        self.k_b * self.tau
    }

    /// `K_j = J_j / (k_B τ)`.
    fn reduced(&self) -> impl Iterator<Item = T> + '_ {
        let t = self.thermal();
        self.couplings.iter().map(move |&j| j / t)
    }
}

/// A spin configuration `σ ∈ {±1}^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfig {
    sigma: Vec<i8>,
}

impl SpinConfig {
    pub fn new(sigma: Vec<i8>) -> Result<Self> {
        if sigma.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain("spins must be +1 or -1".into()));
        }
        Ok(SpinConfig { sigma })
    }

    /// Configuration whose spin `j` is `+1` iff bit `j` of `bits` is set.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        SpinConfig {
            sigma: (0..n).map(|j| if bits >> j & 1 == 1 { 1 } else { -1 }).collect(),
        }
    }

    pub fn spins(&self) -> &[i8] {
        &self.sigma
    }
}

/// `E(σ) = -(1/k_B τ) Σ_j (J_j σ_j σ_{j+1} + H σ_j)` with `σ_{N+1} = σ_1`.
pub fn energy<T: Real>(config: &SpinConfig, chain: &IsingChain<T>, field: T) -> Result<T> {
    let s = config.spins();
    let n = chain.len();
    if s.len() != n {
        return Err(Error::Domain(format!(
            "configuration has {} spins for a chain of {n}",
            s.len()
        )));
    }
    let sum: T = (0..n)
        .map(|j| {
            let a = T::lit(f64::from(s[j]));
            let b = T::lit(f64::from(s[(j + 1) % n]));
            chain.couplings[j] * a * b + field * a
        })
        .sum();
    Ok(-sum / chain.thermal())
}

/// `Z(h) = Σ_σ e^{-E(σ)}` with `H = (k_B τ / 2) log h`, principal branch.
///
/// Each term is `exp(Σ K_j σ_j σ_{j+1}) · h^{m/2}` with `m = Σ σ_j`.
/// Configurations are split into fixed blocks summed in parallel and then
/// added in block order, so the result does not depend on scheduling.
pub fn partition_bruteforce<T: Real>(chain: &IsingChain<T>, h: Complex<T>) -> Result<Complex<T>> {
    let n = chain.len();
    if n > MAX_BRUTEFORCE {
        return Err(Error::Size {
            what: "chain length for enumeration",
            got: n,
            limit: MAX_BRUTEFORCE,
        });
    }
    if h.norm() == T::zero() {
        return Err(Error::Domain("h = 0".into()));
    }
    let k: Vec<T> = chain.reduced().collect();
    let log_h = h.ln();
    let total: u64 = 1 << n;
    let blocks = total.min(1024);
    let per = total / blocks;
    let parts: Vec<Complex<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for bits in b * per..(b + 1) * per {
                let mut bond = T::zero();
                let mut m: i64 = 0;
                for j in 0..n {
                    let s = (bits >> j) & 1;
                    let t = (bits >> ((j + 1) % n)) & 1;
                    bond += if s == t { k[j] } else { -k[j] };
                    m += if s == 1 { 1 } else { -1 };
                }
                let e = log_h * T::lit(m as f64 / 2.0) + Complex::new(bond, T::zero());
                acc += e.exp();
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b))
}

/// `P(h) = h^{N/2} Z(h)` as `exp(log_scale) · Σ c_m h^m`, `m` the number
/// of up spins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionPoly<T> {
    coeffs: Vec<T>,
    log_scale: T,
}

impl<T: Real> PartitionPoly<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scaled_coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    /// Unscaled coefficients; may overflow for long chains.
    pub fn coeffs(&self) -> Vec<T> {
        let s = self.log_scale.exp();
        self.coeffs.iter().map(|&c| c * s).collect()
    }

    pub fn eval(&self, h: Complex<T>) -> Complex<T> {
        Poly::from_real(&self.coeffs).eval(h) * self.log_scale.exp()
    }
}

/// Spin-transfer recursion, `O(N²)`.
///
/// With `e^{K σσ'} = e^K · w`, `w = 1` for equal spins and `α = e^{-2K}`
/// otherwise, `P = e^{Σ K_j} Σ_{σ_1} Σ ∏ w_j h^{#up}`. For each value of
/// `σ_1` the sum over the remaining spins is a pair of polynomials indexed
/// by the current spin; the last bond closes the ring back to `σ_1`.
pub fn partition_polynomial<T: Real>(chain: &IsingChain<T>) -> PartitionPoly<T> {
    let n = chain.len();
    let k: Vec<T> = chain.reduced().collect();
    let w: Vec<T> = k.iter().map(|&x| (-T::lit(2.0) * x).exp()).collect();
    let mut log_scale: T = k.iter().copied().sum();
    let mut total = vec![T::zero(); n + 1];
    // both boundary spins share one scale so their sum is consistent
    let mut runs: [(Vec<T>, Vec<T>); 2] = [
        (vec![T::zero(); n + 1], vec![T::zero(); n + 1]),
        (vec![T::zero(); n + 1], vec![T::zero(); n + 1]),
    ];
    // runs[s].0: current spin down, .1: current spin up; s = first spin up?
    runs[0].0[0] = T::one();
    runs[1].1[1] = T::one();
    for j in 0..n - 1 {
        let a = w[j];
        let mut mx = T::zero();
        for run in runs.iter_mut() {
            let (down, up) = run;
            let mut nd = vec![T::zero(); n + 1];
            let mut nu = vec![T::zero(); n + 1];
            for m in 0..=n {
                nd[m] = down[m] + a * up[m];
                if m > 0 {
                    nu[m] = a * down[m - 1] + up[m - 1];
                }
            }
            mx = nd.iter().chain(nu.iter()).copied().fold(mx, T::max);
            *down = nd;
            *up = nu;
        }
        let inv = mx.recip();
        for run in runs.iter_mut() {
            run.0.iter_mut().chain(run.1.iter_mut()).for_each(|x| *x *= inv);
        }
        log_scale += mx.ln();
    }
    let a = w[n - 1];
    for m in 0..=n {
        // first spin down: close with weight 1 from down, α from up
        total[m] += runs[0].0[m] + a * runs[0].1[m];
        total[m] += a * runs[1].0[m] + runs[1].1[m];
    }
    let mx = total.iter().copied().fold(T::zero(), T::max);
    for c in total.iter_mut() {
        *c /= mx;
    }
    PartitionPoly {
        coeffs: total,
        log_scale: log_scale + mx.ln(),
    }
}

/// Zeros of `P` from the companion matrix; each must be unimodular within
/// `1e-8`.
pub fn leeyang_zeros<T: Real>(chain: &IsingChain<T>) -> Result<ZeroSet<T>> {
    let p = partition_polynomial(chain);
    let roots = Poly::from_real(&p.coeffs).roots()?;
    let angles = unimodular_angles(&roots, "partition polynomial")?;
    Ok(ZeroSet::from_angles(angles, T::lit(ZERO_MERGE_TOL)))
}

/// Zeros through the discriminant of the mapped word, using the
/// sign-change pipeline; suitable for long chains.
pub fn leeyang_zeros_grid<T: Real>(chain: &IsingChain<T>) -> Result<ZeroSet<T>> {
    word_zero_set(&couplings_to_verblunsky(chain)?)
}

/// `α_j = exp(-2 J_j / (k_B τ))`.
pub fn couplings_to_verblunsky<T: Real>(chain: &IsingChain<T>) -> Result<VerblunskyWord<T>> {
    chain
        .reduced()
        .map(|k| Verblunsky::real((-T::lit(2.0) * k).exp()))
        .collect::<Result<Vec<_>>>()
        .map(VerblunskyWord::new)
}

/// `R_{α_inf}` with `α_inf = exp(-2 sup J / (k_B τ))`: no Lee-Yang zero of
/// any chain with couplings at most `sup_j` lies in it.
pub fn zero_free_arc<T: Real>(sup_j: T, tau: T, k_b: T) -> Result<ArcSet<T>> {
    if !(sup_j > T::zero() && tau > T::zero() && k_b > T::zero()) {
        return Err(Error::Domain("sup J, tau and k_B must be positive".into()));
    }
    gap_arc((-T::lit(2.0) * sup_j / (k_b * tau)).exp())
}

impl<T: Real> IsingChain<T> {
    pub fn zero_free_arc(&self) -> Result<ArcSet<T>> {
        let sup = self.couplings.iter().copied().fold(T::zero(), T::max);
        zero_free_arc(sup, self.tau, self.k_b)
    }

    /// `α_inf = exp(-2 sup J / (k_B τ))`.
    pub fn alpha_inf(&self) -> T {
        let sup = self.couplings.iter().copied().fold(T::zero(), T::max);
        (-T::lit(2.0) * sup / self.thermal()).exp()
    }
}

/// Distribution of a single coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CouplingMeasure<T> {
    /// `(J, weight)` pairs, weights summing to one.
    Atoms(Vec<(T, T)>),
    /// Uniform on `[a, b)`, `0 < a < b`.
    Uniform { a: T, b: T },
}

impl<T: Real> CouplingMeasure<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            CouplingMeasure::Atoms(a) => {
                !a.is_empty()
                    && a.iter().all(|(j, w)| *j > T::zero() && *w > T::zero())
                    && (a.iter().map(|(_, w)| *w).sum::<T>() - T::one()).abs() <= T::tol(1e-12)
            }
            CouplingMeasure::Uniform { a, b } => T::zero() < *a && a < b && b.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain("invalid coupling measure".into()))
        }
    }

    pub fn sample(&self, u: f64) -> T {
        match self {
            CouplingMeasure::Uniform { a, b } => {
                let x = *a + (*b - *a) * T::lit(u);
                if x < *b {
                    x
                } else {
                    *a
                }
            }
            CouplingMeasure::Atoms(atoms) => {
                let u = T::lit(u);
                let mut acc = T::zero();
                for (j, w) in atoms {
                    acc += *w;
                    if u < acc {
                        return *j;
                    }
                }
                atoms[atoms.len() - 1].0
            }
        }
    }

    /// Supremum of the support.
    pub fn sup(&self) -> T {
        match self {
            CouplingMeasure::Uniform { b, .. } => *b,
            CouplingMeasure::Atoms(a) => a.iter().map(|(j, _)| *j).fold(T::zero(), T::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord<T> {
    pub k: usize,
    pub n: usize,
    pub zeros: ZeroSet<T>,
    /// Hausdorff distance to the limit set.
    pub distance: T,
    pub min_abs_angle: T,
}

/// Lee-Yang zeros of chains of growing length `N_k`, couplings drawn
/// i.i.d. (coupling `j` is draw `j` of stream 0, so chains are nested), each
/// compared with `∂D ∖ R_{α_inf}` for `α_inf = exp(-2 sup J / (k_B τ))`,
/// the almost-sure spectrum of the induced coefficients.
pub fn thermodynamic_scan<T: Real>(
    measure: &CouplingMeasure<T>,
    tau: T,
    k_b: T,
    schedule: &[usize],
    seed: u64,
) -> Result<Vec<ScanRecord<T>>> {
    measure.validate()?;
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("schedule must be positive and increasing".into()));
    }
    let limit = zero_free_arc(measure.sup(), tau, k_b)?.complement();
    let stream = IndexedStream::new(seed, 0);
    schedule
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let j = (0..n as i64).map(|i| measure.sample(stream.uniform(i))).collect();
            let chain = IsingChain::with_boltzmann(j, tau, k_b)?;
            let zeros = leeyang_zeros_grid(&chain)?;
            Ok(ScanRecord {
                k,
                n,
                distance: hausdorff_distance(&zeros, &limit)?,
                min_abs_angle: zeros.min_abs_angle().unwrap_or_else(T::zero),
                zeros,
            })
        })
        .collect()
}
