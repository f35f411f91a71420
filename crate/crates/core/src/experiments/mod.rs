//! Statistical experiments around the linear filter.
//!
//! [`probability`] has the closed forms: the rank distribution of uniform
//! GF(2) matrices, the left-consistency probability derived from it, and the
//! expected maximum of Poisson draws. [`filtering`] runs the solver's filter
//! on seeded random systems and summarizes how many branches survive.

pub mod filtering;
pub mod probability;

pub use filtering::{
    certificate_degree, filtering_experiment, k_for_d0_2, predicted_consistency,
    strong_semiregular_check, FilterParams, FilterStats, StrongSemiRegular, TrialRecord,
    MAX_EXPERIMENT_VARS,
};
pub use probability::{
    left_consistency_probability, poisson_max_expectation, rank_probability, to_f64,
};
