//! Finite-`M` machinery behind the converse: clustering sets of output
//! strings, Chernoff events, the `f(x)` monotonicity analysis and an
//! exhaustive entropy oracle for tiny instances.

mod analysis;
mod cluster;
mod oracle;

pub use analysis::{chernoff_error_prob, ChernoffBound, FCurve};
pub use cluster::{cluster_set, partition_a_sets, separation_threshold, ClusterMode, ClusterSet, MAX_EXACT_M};
pub use oracle::{
    check_bounds, oracle_entropies, verify_bounds, BoundReport, OracleEntropies, TinyInstance, VerifyConfig,
    VerifyReport, ENUMERATION_LIMIT, SLACK_TOLERANCE,
};
