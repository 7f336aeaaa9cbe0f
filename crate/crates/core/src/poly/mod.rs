//! Polynomials, divided differences, simplex integration and the symbol families.

mod divided;
mod identities;
mod multipoly;
mod polynomial;
mod symbols;

pub use divided::{
    complete_homogeneous, divided_difference, divided_difference_by_monomials, divided_difference_monomial,
    COINCIDENCE_TOL,
};
pub use identities::{check_base_decomp, check_diagonal, check_green_identities, check_tmkh, GreenKind, TmkhPart};
pub use multipoly::{integrate_simplex, MultiPoly};
pub use polynomial::{factorial, falling_factorial, Polynomial};
pub use symbols::{binomial, diagonal_constant, eval_phi, phi_hm, simplex_moment, SymbolPhi};
