//! Verification, scaling experiments, fixtures and acceptance checks.

pub mod acceptance;
pub mod fixtures;
pub mod scaling;
pub mod verify;

use thiserror::Error;

use crate::schemes::SchemeError;

pub use acceptance::{run_acceptance, CriterionResult, CRITERIA};
pub use fixtures::{run_fixtures, FixtureCheck};
pub use scaling::{fit_loglog, scaling_experiment, write_scaling_csv, LogLogFit, ScalingResult, ScalingRow};
pub use verify::{verify_exhaustive, verify_or_sample, VerificationReport, VerifyMode};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("exhaustive run needs {cost} (set, query) pairs, over the budget of {budget}; use a sampled run or raise BITPROBE_BUDGET")]
    BudgetExceeded { cost: u128, budget: u128 },
    #[error(transparent)]
    Scheme(SchemeError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
