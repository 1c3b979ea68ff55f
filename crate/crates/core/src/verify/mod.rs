//! Operator-norm estimation and the numerical check suites.

mod estimate;
mod family;
mod report;
mod suites;

pub use estimate::{
    estimate_operator_norm, estimate_operator_norm_with, replay_ratio, EstimateConfig, EstimateMethod, NormEstimate,
    StageBound,
};
pub use family::ExponentFamily;
pub(crate) use report::csv_error;
pub use report::{digest, Check, Environment, Relation, Report};
pub use suites::{run_suite, Suite, SuiteConfig};
