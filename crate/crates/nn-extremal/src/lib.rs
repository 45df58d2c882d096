//! Sum of squared nearest-neighbor distances between points in a rectangle.
//!
//! For n >= 2 distinct points in an a x b rectangle, each point contributes
//! the square of its distance to its nearest neighbor; the sum is bounded by
//! 2a^2 + 2b^2, attained by a diagonal pair and by the corners of a square.
//! This crate evaluates the objective exactly ([`geom`]), searches for
//! maximizing configurations of the non-smooth non-convex objective
//! ([`optimize`]), evaluates the exact piecewise three-point bound
//! ([`closed_form`]), replays the bounding inequalities as machine-checkable
//! residuals ([`certify`]), and samples one-dimensional slices of the
//! landscape ([`landscape`]).
//!
//! With the default `parallel` feature, batch operations (restarts, residual
//! sampling, lattice enumeration, slice sampling) fan out on rayon; without
//! it they run sequentially. Results are bit-identical either way.

pub mod certify;
pub mod closed_form;
mod exec;
pub mod geom;
pub mod landscape;
pub mod optimize;
pub mod rng;

pub use certify::{
    case1_superadditivity, case4_chain, case6_identity, case71_residuals, case721_identity,
    case722_identity, lemma1_residual, run_all_suites, run_suite, CertifyError, Family,
    ResidualReport, SuiteParams, DEFAULT_IDENTITY_TOL,
};
pub use closed_form::{s3, s3_breakpoints, s3_ratio, S3Value, S3_RATIO_SUP};
pub use geom::{
    check_theorem_bound, equality_config, nn_summary_of, sigma_of, BoundViolation, Configuration,
    ConfigurationData, EqualityCase, GeomError, NnSummary, Point, Quadrisection, Rect,
    BOUND_SLACK, DEFAULT_CONTAIN_TOL, DEFAULT_DISTINCT_TOL,
};
pub use landscape::{base_points, slice, LandscapeError, SliceSample, SliceSpec};
pub use optimize::{
    brute_force_grid, local_search, multistart, multistart_with_starts, sweep_vs_s3, OptError,
    OptReport, SearchParams, SweepRow,
};
pub use rng::SplitMix64;
