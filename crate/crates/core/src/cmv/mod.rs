//! CMV matrices and the periodic discriminant: coefficients, normalized
//! values, zeros, band structure and finite sections.

mod bands;
mod discriminant;
mod matrix;
mod zeros;

pub use bands::{
    band_structure, constant_spectrum, spectrum_membership, BandStructure, Gap, CLOSED_GAP_TOL,
    MEMBERSHIP_TOL,
};
pub use discriminant::{
    discriminant_poly, normalized_discriminant, DiscriminantPoly, NormalizedDiscriminant,
    RealDiscriminant, Sample, ScaledReal, MAX_POLY_PERIOD,
};
pub use matrix::{assemble_cmv_rows, finite_cmv_eigenvalues, finite_cmv_matrix, CmvRow};
pub use zeros::{
    cross_check, default_grid, discriminant_zeros, grid_zeros, unimodular_angles,
    CROSS_CHECK_TOL, UNIMODULAR_TOL, ZERO_MERGE_TOL,
};
