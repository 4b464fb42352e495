use std::io::Write;

use num_traits::One;
use serde::Serialize;
use serde_json::Value;

use super::codec::{decode_state, encode_distribution, encode_state, JsonCarrier};
use super::config::{AlgebraSpec, ExperimentConfig, Mode};
use super::CliError;
use crate::algebra::Algebra;
use crate::chem::{
    division_algebra, lambda_algebra, library_coarse, library_fine, parse_lambda, reduce, string_monoid_algebra,
    ModularGroup, ReducerConfig,
};
use crate::flask::{run_ensemble, FlaskProcess};
use crate::multiset::Multiset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Run trajectories on the rayon pool. Output bytes do not depend on it.
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { parallel: true }
    }
}

/// One JSON-lines record of sample mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepMetrics {
    pub trajectory: usize,
    pub step: usize,
    pub total: u64,
    pub species: usize,
    /// Shannon entropy (natural log) of label frequencies. Floating point,
    /// unlike everything else in the output.
    pub entropy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<Value>,
}

/// `Σ p ln(1/p)` over label frequencies; 0 for the empty state.
pub fn entropy<E: Ord>(state: &Multiset<E>) -> f64 {
    let total = state.total();
    if total == 0 {
        return 0.0;
    }
    let ln_total = (total as f64).ln();
    state
        .iter()
        .map(|(_, n)| (n as f64 / total as f64) * (ln_total - (n as f64).ln()))
        .sum::<f64>()
        .max(0.0)
}

/// Receives the algebra built from an [`AlgebraSpec`].
pub(crate) trait AlgebraVisitor {
    type Output;
    fn visit<A>(self, alg: A) -> Self::Output
    where
        A: JsonCarrier + Clone + Send + Sync + 'static;
}

pub(crate) fn dispatch<V: AlgebraVisitor<Output = Result<T, CliError>>, T>(
    spec: &AlgebraSpec,
    visitor: V,
) -> Result<T, CliError> {
    match spec {
        AlgebraSpec::Lambda { max_steps, max_size } => visitor.visit(lambda_algebra(ReducerConfig {
            max_steps: *max_steps,
            max_size: *max_size,
        })),
        AlgebraSpec::Division => visitor.visit(division_algebra()),
        AlgebraSpec::Library { overrides } => {
            let mut alg = library_fine();
            for e in overrides {
                alg = alg.with_entry(&e.row, &e.col, &e.out).map_err(CliError::config)?;
            }
            visitor.visit(alg)
        }
        AlgebraSpec::LibraryCoarse => visitor.visit(library_coarse()),
        AlgebraSpec::Modular { modulus } => visitor.visit(ModularGroup::new(*modulus).map_err(CliError::config)?),
        AlgebraSpec::String { alphabet } => visitor.visit(string_monoid_algebra(alphabet.chars())),
    }
}

/// Builds the process described by `cfg` over `alg`.
pub(crate) fn build_process<A: Algebra>(alg: A, cfg: &ExperimentConfig) -> Result<FlaskProcess<A>, CliError> {
    if alg.signature() != &cfg.signature {
        return Err(CliError::config(format!(
            "signature {} does not match the algebra's {}",
            serde_json::to_string(&cfg.signature).unwrap_or_default(),
            serde_json::to_string(alg.signature()).unwrap_or_default(),
        )));
    }
    Ok(FlaskProcess::new(alg, cfg.protocols.clone())?.with_exact_budget(cfg.exact_budget))
}

struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    opts: RunOptions,
    out: &'a mut dyn Write,
}

impl AlgebraVisitor for Runner<'_> {
    type Output = Result<(), CliError>;

    fn visit<A>(self, alg: A) -> Self::Output
    where
        A: JsonCarrier + Clone + Send + Sync + 'static,
    {
        let Runner { cfg, opts, out } = self;
        let proc = build_process(alg, cfg)?;
        let alg = proc.algebra();
        let initial = decode_state(alg, &cfg.initial_state)?;
        match cfg.mode {
            Mode::ExactStep => {
                let d = proc.step_exact(&initial)?;
                assert!(d.total_weight().is_one(), "exact step weights must sum to 1");
                writeln!(out, "{}", encode_distribution(alg, &d))?;
            }
            Mode::Sample => {
                let blocks = run_ensemble(cfg.seed, cfg.trajectories, opts.parallel, |i, rng| {
                    let mut block = String::new();
                    proc.walk(&initial, cfg.steps, rng, |t, state| {
                        if t % cfg.record_every != 0 {
                            return;
                        }
                        let metrics = StepMetrics {
                            trajectory: i,
                            step: t,
                            total: state.total(),
                            species: state.species(),
                            entropy: entropy(state),
                            state: cfg.record_states.then(|| encode_state(alg, state)),
                        };
                        block.push_str(&serde_json::to_string(&metrics).expect("metrics serialize"));
                        block.push('\n');
                    });
                    block
                });
                for block in blocks {
                    out.write_all(block.as_bytes())?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Runs `cfg` and writes its output to `out`.
pub fn run_experiment(cfg: &ExperimentConfig, opts: RunOptions, out: &mut dyn Write) -> Result<(), CliError> {
    dispatch(&cfg.algebra, Runner { cfg, opts, out })
}

/// Reduces one term and prints its canonical form and step count.
pub fn lambda_command(expr: &str, cfg: ReducerConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let term = parse_lambda(expr)?;
    let r = reduce(&term, cfg);
    writeln!(out, "{}", r.term)?;
    writeln!(
        out,
        "{} step{}, limit {}",
        r.steps,
        if r.steps == 1 { "" } else { "s" },
        if r.hit_limit { "hit" } else { "not hit" }
    )?;
    Ok(())
}
