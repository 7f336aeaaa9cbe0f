//! Gateaux derivatives of `f(U_0 + tV)` for polynomial `f`, Taylor remainders
//! and the ratio experiments for their Schatten and trace bounds.

mod experiment;
mod path;

pub use experiment::{
    main_estimate_experiment, path_ratios, DimMax, DimQuantile, ExperimentParams, RatioCell, RatioKind, RatioReport,
    RatioSummary, REPORTED_QUANTILES,
};
pub(crate) use path::unit_interval_rule;
pub use path::{
    derivative_moi, derivative_poly_path, remainder_via_integral, taylor_remainder, trace_identity_check, PathExpansion,
};
