//! The experiment runner behind the `flask` binary.
//!
//! An experiment is one JSON document ([`ExperimentConfig`]). `run` emits
//! either an exact one-step distribution or JSON-lines trajectory metrics;
//! `check` tests a registered homomorphism and its naturality square;
//! `lambda` reduces a single term.

mod check;
mod codec;
mod config;
mod run;

pub use check::{run_check, CheckOptions, REGISTERED_HOMS};
pub use codec::{decode_state, encode_distribution, encode_state, JsonCarrier};
pub use config::{AlgebraSpec, CheckSpec, ExperimentConfig, Mode, StateEntry, TableEntry};
pub use run::{entropy, lambda_command, run_experiment, RunOptions, StepMetrics};

use thiserror::Error;

use crate::chem::SyntaxError;
use crate::flask::FlaskError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Budget(FlaskError),
    #[error("unknown homomorphism `{0}` (registered: {list})", list = REGISTERED_HOMS.join(", "))]
    UnknownHom(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl std::fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }

    /// Process exit status for this error class. 1 is reserved for a
    /// failed `check`.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::UnknownHom(_) => 4,
            CliError::Syntax(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

impl From<FlaskError> for CliError {
    fn from(e: FlaskError) -> Self {
        match e {
            FlaskError::BudgetExceeded { .. } => CliError::Budget(e),
            other => CliError::config(other),
        }
    }
}
