use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flask_core::chem::ReducerConfig;
use flask_core::cli::{
    lambda_command, run_check, run_experiment, CheckOptions, CliError, ExperimentConfig, RunOptions,
};

#[derive(Parser)]
#[command(name = "flask", version, about = "Run and check stochastic multiset chemistries")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment: one exact step, or a seeded trajectory ensemble.
    Run {
        config: PathBuf,
        /// Simulate trajectories on one thread. Output is identical either way.
        #[arg(long)]
        sequential: bool,
    },
    /// Test a homomorphism and the naturality of the induced state map.
    Check {
        config: PathBuf,
        #[arg(long)]
        hom: String,
        /// Enumerate all argument tuples and states over the pool.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Reduce a lambda term in normal order.
    Lambda {
        expr: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        /// Stop once the term has more than this many nodes.
        #[arg(long)]
        max_size: Option<usize>,
    },
}

fn execute(command: Command, out: &mut dyn Write) -> Result<bool, CliError> {
    match command {
        Command::Run { config, sequential } => {
            let cfg = ExperimentConfig::from_path(config)?;
            run_experiment(&cfg, RunOptions { parallel: !sequential }, out)?;
            Ok(true)
        }
        Command::Check {
            config,
            hom,
            exhaustive,
        } => {
            let cfg = ExperimentConfig::from_path(config)?;
            run_check(&cfg, &CheckOptions { hom, exhaustive }, out)
        }
        Command::Lambda {
            expr,
            max_steps,
            max_size,
        } => {
            lambda_command(&expr, ReducerConfig { max_steps, max_size }, out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = execute(args.command, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => {
            eprintln!("flask: check failed");
            ExitCode::from(1)
        }
        (Ok(_), Err(e)) => report(&CliError::Io(e)),
        (Err(e), _) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("flask: {e}");
    ExitCode::from(e.exit_code())
}
