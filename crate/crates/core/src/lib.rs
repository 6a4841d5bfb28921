//! Szegő transfer-matrix cocycles and their applications.
//!
//! The crate covers four layers:
//!
//! * [`transfer`] and [`cocycle`]: one-step transfer matrices `A(α, z)`,
//!   their products, the cone criterion that certifies uniform exponential
//!   growth for positive coefficients, Lyapunov exponents and invariant
//!   splittings.
//! * [`cmv`]: CMV matrices, periodic discriminants, band structure and
//!   discriminant zeros.
//! * [`ensemble`]: random and periodic coefficient sequences, almost-sure
//!   spectra and window zero sets compared in the Hausdorff metric.
//! * [`ising`] and [`dos`]: the one-dimensional Ising chain, its Lee-Yang
//!   zeros and their relation to CMV spectra, density of states and gap
//!   labels.
//!
//! Everything is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix `f64`, which is what the
//! tolerances are calibrated for.

pub mod circle;
pub mod cmv;
pub mod cocycle;
pub mod dos;
pub mod ensemble;
pub mod error;
pub mod ising;
pub mod linalg;
pub mod mat2;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod transfer;
pub mod verblunsky;

pub use circle::{directed_distance, hausdorff_distance, Angle, Arc, ArcSet, CirclePoint, CircleSet, ZeroSet};
pub use error::{Error, Result};
pub use mat2::Mat2;
pub use scalar::Real;
pub use transfer::{
    conjugated_matrix, cone_constants, gap_arc, principal_root, transfer_matrix, ConeConstants,
};
pub use verblunsky::{Verblunsky, VerblunskyWord};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type Mat2C = Mat2<f64>;
pub type Angle64 = Angle<f64>;
pub type CirclePoint64 = CirclePoint<f64>;
pub type ArcSet64 = ArcSet<f64>;
pub type ZeroSet64 = ZeroSet<f64>;
pub type Verblunsky64 = Verblunsky<f64>;
pub type Word64 = VerblunskyWord<f64>;
pub type ConeConstants64 = ConeConstants<f64>;
pub type BandStructure64 = cmv::BandStructure<f64>;
pub type DiscriminantPoly64 = cmv::DiscriminantPoly<f64>;
pub type SingleSiteMeasure64 = ensemble::SingleSiteMeasure<f64>;
pub type IsingChain64 = ising::IsingChain<f64>;
pub type PartitionPoly64 = ising::PartitionPoly<f64>;
pub type DensityOfStates64 = dos::DensityOfStates<f64>;
pub type GapLabelReport64 = dos::GapLabelReport<f64>;
