//! Reactive sample-size comparisons for simulation-based optimization.
//!
//! The crate pairs a random local search with pluggable comparison policies
//! (reactive paired t-test with indifference zone, fixed sample size, and a
//! fully sequential baseline) over noisy benchmark objectives evaluated
//! through a common-random-numbers oracle with memory.

pub mod benchmarks;
pub mod harness;
pub mod oracle;
pub mod policy;
pub mod search;
pub mod stats;
pub mod synthetic;
