//! Randomized verification of the inequality chains.
//!
//! [`gen_instance`] turns a seed into a reproducible `(A, B, X)`, the
//! functions in [`checks`] evaluate one chain on one instance, and
//! [`run_suite`] drives many seeded trials and aggregates a [`Report`].

pub mod checks;
mod instance;
mod report;
mod suite;

pub use checks::{
    CheckConfig, CheckFamily, CheckId, CheckResult, Link, Observation, Tolerances, Variant,
};
pub use instance::{
    gen_instance, instance_dim, log_uniform, random_unitary, splitmix64, trial_seed, InstanceSpec,
    XKind, MAX_DIM,
};
pub use report::{CheckSummary, FailureRecord, LinkSummary, Report, ReportMeta};
pub use suite::{lemma_grid, run_suite, run_trial, LemmaGridSummary};
