//! Multiple operator integrals over discrete spectral measures.

mod algebra;
mod engine;
mod estimate;
mod grammar;
mod region;
mod symbol;
mod transforms;

pub use algebra::{
    adjoint_identity_check, composition_identity_check, duality_identity_check, product_identity_check,
    region_additivity_check,
};
pub use engine::{
    check_budget, moi_apply, MoiOperator, MoiPlan, GROUP_CAP_LOW_ORDER, GROUP_CAP_ORDER_FOUR, TABLE_CAP, TUPLE_CAP,
};
pub use estimate::{
    estimate_multilinear_norm, output_exponent, EstimateOptions, FnTransform, Multilinear, NormEstimate,
};
pub use grammar::{parse_region, parse_symbol};
pub use region::{arc_index, Constraint, Region, Rel};
pub use symbol::{MoiSymbol, POINT_TOL};
pub use transforms::{
    diagonal_compression, diagonal_compression_product, diagonal_moi, discrete_unitary_average, triangular_truncation,
    upsilon_gamma_transform, PhaseKind, TruncationMode, AVERAGE_TERM_CAP,
};
