//! Two-sample multivariate signal detection under a shared permutation
//! engine.
//!
//! The crate provides two families of test statistics for the question "is
//! `x | y = 1` distributed like `x | y = 0`":
//!
//! * location statistics — quadratic forms in the group-mean difference
//!   with pluggable precision weighting ([`location`]);
//! * accuracy statistics — a linear classifier's estimated prediction
//!   accuracy under resubstitution, V-fold cross validation, or the
//!   leave-one-out bootstrap ([`classifier`], [`accuracy`]);
//!
//! calibrated by label-permutation ([`perm`]), plus generative scenarios and
//! a Monte Carlo harness that estimates each statistic's power ([`simgen`],
//! [`harness`]).
//!
//! Everything is deterministic: randomness flows through [`rng::RngStream`]
//! derivation paths, so a power table is a pure function of its
//! configuration and master seed, independent of thread count.

pub mod accuracy;
pub mod classifier;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod location;
pub mod perm;
pub mod rng;
pub mod selftest;
pub mod simgen;
pub mod statistic;
pub mod stats;
pub(crate) mod svm;

pub use dataset::{validate_dataset, LabeledDataset};
pub use error::{Error, Result};
pub use harness::{compare_powers, run_scenario, PowerReport, PowerRow};
pub use perm::{decide, permutation_test, PermutationReport, PvalueMode, RefoldPolicy, TestDecision};
pub use rng::{derive_stream, RngStream};
pub use simgen::ScenarioConfig;
pub use statistic::{FoldingConfig, StatisticSpec};
