use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::chem::lambda::DEFAULT_MAX_SIZE;
use crate::flask::DEFAULT_EXACT_BUDGET;
use crate::signature::{Protocol, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ExactStep,
    Sample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub element: Value,
    pub count: u64,
}

/// `interact(row, col) = out`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub row: String,
    pub col: String,
    pub out: String,
}

/// A builtin algebra with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Lambda {
        #[serde(default = "default_max_steps")]
        max_steps: usize,
        /// Node bound on reduced terms; `null` removes it.
        #[serde(default = "default_max_size")]
        max_size: Option<usize>,
    },
    Division,
    /// The librarian / noisy / quiet table, optionally with entries replaced.
    Library {
        #[serde(default)]
        overrides: Vec<TableEntry>,
    },
    LibraryCoarse,
    Modular {
        modulus: u64,
    },
    String {
        alphabet: String,
    },
}

fn default_max_steps() -> usize {
    1000
}

fn default_max_size() -> Option<usize> {
    Some(DEFAULT_MAX_SIZE)
}

/// Parameters for the `check` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    /// Explicit states to test, in addition to generated ones.
    #[serde(default)]
    pub states: Vec<Vec<StateEntry>>,
    /// Labels generated states and sampled arguments are drawn from.
    /// Defaults to the whole carrier for finite algebras, else the support
    /// of `initial_state`.
    #[serde(default)]
    pub pool: Option<Vec<Value>>,
    #[serde(default = "default_random_states")]
    pub random_states: usize,
    #[serde(default = "default_max_total")]
    pub max_total: u64,
    #[serde(default = "default_hom_samples")]
    pub hom_samples: usize,
    /// Target modulus for `reduce-mod`.
    #[serde(default)]
    pub target_modulus: Option<u64>,
    /// Letters kept by `alphabet-projection`.
    #[serde(default)]
    pub keep: Option<String>,
}

impl Default for CheckSpec {
    fn default() -> Self {
        Self {
            states: Vec::new(),
            pool: None,
            random_states: default_random_states(),
            max_total: default_max_total(),
            hom_samples: default_hom_samples(),
            target_modulus: None,
            keep: None,
        }
    }
}

fn default_random_states() -> usize {
    20
}

fn default_max_total() -> u64 {
    4
}

fn default_hom_samples() -> usize {
    100
}

fn default_budget() -> u64 {
    DEFAULT_EXACT_BUDGET
}

fn default_record_every() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub signature: Signature,
    pub algebra: AlgebraSpec,
    pub protocols: Vec<Protocol>,
    pub initial_state: Vec<StateEntry>,
    pub mode: Mode,
    #[serde(default)]
    pub steps: usize,
    #[serde(default)]
    pub trajectories: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub exact_budget: u64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub record_states: bool,
    #[serde(default)]
    pub check: CheckSpec,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(CliError::config)?;
        cfg.validate_fields()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, CliError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks that do not depend on the algebra.
    fn validate_fields(&self) -> Result<(), CliError> {
        if self.record_every == 0 {
            return Err(CliError::config("record_every must be at least 1"));
        }
        if self.mode == Mode::ExactStep && self.trajectories != 0 {
            return Err(CliError::config(
                "exact-step mode computes one distribution; set trajectories to 0",
            ));
        }
        if self.protocols.is_empty() {
            return Err(CliError::config("at least one protocol is required"));
        }
        for (i, p) in self.protocols.iter().enumerate() {
            p.validate(&self.signature)
                .map_err(|e| CliError::config(format!("protocol {i}: {e}")))?;
        }
        Ok(())
    }
}
