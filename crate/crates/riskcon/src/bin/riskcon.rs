//! Config-driven experiment runner for empirical risk estimation.
//!
//! One experiment per invocation: the subcommand selects the experiment
//! kind, `--config` points at a TOML file whose `kind` must match, and the
//! CSV result goes to `--out` or stdout. Output is a pure function of the
//! config (plus `--seed-override`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use riskcon::experiment::{self, ExperimentConfig, Kind};
use riskcon::Error;

#[derive(Parser)]
#[command(name = "riskcon", about = "Risk-measure estimation experiments", version)]
struct Cli {
    #[command(subcommand)]
    kind: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point estimates and error summaries against the ground-truth risk.
    Estimate(CommonArgs),
    /// Empirical tail probabilities against concentration bounds.
    Concentration(CommonArgs),
    /// Continuity-inequality audit over randomized EDF pairs.
    Continuity(CommonArgs),
    /// Risk-sensitive bandit runs with regret accounting.
    Bandit(CommonArgs),
    /// Brute-force oracle self-checks.
    Selftest(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Replace the config's top-level seed.
    #[arg(long)]
    seed_override: Option<u64>,
}

impl Command {
    fn kind(&self) -> Kind {
        match self {
            Command::Estimate(_) => Kind::Estimate,
            Command::Concentration(_) => Kind::Concentration,
            Command::Continuity(_) => Kind::Continuity,
            Command::Bandit(_) => Kind::Bandit,
            Command::Selftest(_) => Kind::Selftest,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Estimate(a)
            | Command::Concentration(a)
            | Command::Continuity(a)
            | Command::Bandit(a)
            | Command::Selftest(a) => a,
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BoundNotApplicable(_) | Error::Unsupported(_) => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<(), (u8, String)> {
    let kind = cli.kind.kind();
    let args = cli.kind.args();

    if let Some(k) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| (2u8, format!("threads: {e}")))?;
    }

    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| (2, format!("config {}: {e}", args.config.display())))?;
    let mut cfg: ExperimentConfig =
        toml::from_str(&text).map_err(|e| (2, format!("config parse: {e}")))?;
    if cfg.kind != kind {
        return Err((
            2,
            format!("config kind {} does not match subcommand {}", cfg.kind.name(), kind.name()),
        ));
    }
    if let Some(seed) = args.seed_override {
        cfg.seed = seed;
    }

    let csv = experiment::run(&cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| (1u8, format!("write: {e}")))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
