//! Dense complex linear algebra: matrices, the Hermitian Jacobi eigensolver,
//! Schatten norms, spectral data of unitaries and seeded random operators.

mod eigen;
mod matrix;
mod norms;
pub mod random;
mod spectral;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use matrix::CMatrix;
pub use norms::{
    check_exponent, conjugate_exponent, dual_maximizer, operator_norm, schatten_from_singular, schatten_norm,
    singular_values, singular_values_2x2, svd, Svd,
};
pub use random::{random_contraction_pair, random_unitary, BasePoint, PairOptions};
pub use spectral::{
    discretize_unitary, grid_point, grid_slot, ContractionPair, SpectralGroup, SpectralUnitary, CONTRACTION_TOL,
    PROJECTION_TOL, UNIMODULAR_TOL,
};
