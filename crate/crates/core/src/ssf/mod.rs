//! Higher order spectral shift functions for pairs of contractions.
//!
//! For a contraction pair `(U_0, V)` and order `n` the series `eta_n` is
//! determined by `tr R_n(f, U_0, V) = int_T f^(n)(z) eta_n(z) dz` with
//! `dz = i e^{i theta} d theta`. Polynomial test functions only see the
//! negative Fourier modes of `eta_n`, so those are what is reconstructed.

mod series;
mod trace;

pub use series::{l1_estimate, pairing, pairing_quadrature, SsfSeries, PAIRING_QUADRATURE_POINTS, PAIRING_TOL};
pub use trace::{
    averaged_functional, check_truncation, moment_round_trip, reconstruct_ssf, reconstruct_with_moments,
    remainder_moment, trace_formula_residual, verify_trace_formula, Reconstruction, SsfReport, L1_GRID_POINTS,
};
