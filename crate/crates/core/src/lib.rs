//! Numerical laboratory for operator derivatives along paths of contractions.
//!
//! The crate works on finite-dimensional complex Hilbert spaces and provides
//!
//! - dense complex linear algebra with Schatten norms and seeded random
//!   unitaries and contractions ([`numlin`]),
//! - polynomials, divided differences and exact simplex integration of the
//!   symbols `phi_{n,h,m,k}` ([`poly`]),
//! - multiple operator integrals over discrete spectral measures, region
//!   restriction, triangular truncation and the phase/modulus transforms
//!   ([`moi`]),
//! - Gateaux derivatives of `f(U_0 + tV)` by several independent routes and
//!   Taylor remainders ([`deriv`]),
//! - reconstruction of the higher order spectral shift function from
//!   remainder traces ([`ssf`]),
//! - a reproducible experiment runner behind the `ssflab` binary ([`cli`]).

pub mod cli;
pub mod deriv;
mod error;
pub mod moi;
pub mod numlin;
pub mod poly;
pub mod ssf;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numlin::{CMatrix, ContractionPair, SpectralUnitary};
pub use poly::Polynomial;
