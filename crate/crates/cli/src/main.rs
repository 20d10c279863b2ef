//! `levelcs` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a run completes but a verified claim or
//! configured expectation fails, 2 on configuration, usage or runtime errors.

mod commands;
mod config;
mod ingest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use levelcs::counterexamples::SharpnessVariant;

use commands::{Common, CounterexampleArgs, Status};

#[derive(Parser)]
#[command(name = "levelcs", version, about = "Sparsity-in-levels compressed sensing experiments")]
struct Cli {
    /// JSON experiment config (version 1).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Overrides the config's top-level seed.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// RIP-in-levels, nullspace and error-bound certificates for an operator.
    Certify,
    /// Flip test, level-preserving permutation sweep or generalized flip test.
    Fliptest,
    /// Construct and verify a counterexample instance.
    Counterexample(CeArgs),
    /// Basis pursuit (denoising) or weighted l1 recovery.
    Recover,
    /// Relative sparsity s(eps) and s_k(eps) of a coefficient vector.
    Skeps,
    /// Properties of a sparsity pattern.
    Pattern,
}

#[derive(Args)]
struct CeArgs {
    /// covering-eta, covering-infinite-ratio, covering-short-pattern,
    /// eta-dependence, l-dependence, l2-sharp, l2-sharp-eta, l2-sharp-levels
    name: Option<String>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long = "C", value_name = "C")]
    c: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// eta or levels
    #[arg(long)]
    variant: Option<String>,
    #[arg(long, value_name = "N")]
    nsp_trials: Option<usize>,
    #[arg(long, value_name = "N")]
    halved_trials: Option<usize>,
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(anyhow!("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let common = Common {
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
    };
    match cli.command {
        Command::Certify => commands::certify(&common),
        Command::Fliptest => commands::fliptest(&common),
        Command::Recover => commands::recover(&common),
        Command::Skeps => commands::skeps(&common),
        Command::Pattern => commands::pattern(&common),
        Command::Counterexample(a) => {
            let variant = a
                .variant
                .map(|v| serde_json::from_value::<SharpnessVariant>(serde_json::Value::String(v.clone())))
                .transpose()
                .map_err(|_| anyhow!("unknown variant (expected eta or levels)"))?;
            let args = CounterexampleArgs {
                name: a.name,
                a: a.a,
                c: a.c,
                rho: a.rho,
                tau: a.tau,
                variant,
                nsp_trials: a.nsp_trials,
                halved_trials: a.halved_trials,
            };
            commands::counterexample(&common, &args)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Passed) => ExitCode::SUCCESS,
        Ok(Status::ClaimFailed(failures)) => {
            for f in failures {
                eprintln!("claim failed: {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
