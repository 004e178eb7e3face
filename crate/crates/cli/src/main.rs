use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ergodyn_cli::config::load_config;
use ergodyn_cli::pipeline::{run_pipeline, Command};
use ergodyn_cli::CliError;

/// Inverse-limit dynamics, pressure and equilibrium measures for backward
/// economic models.
#[derive(Debug, Parser)]
#[command(name = "ergodyn", version)]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `compute.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(args: &Args) -> Result<bool, CliError> {
    let (mut cfg, source) = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.compute.seed = seed;
    }
    let dir = args.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let outcome = run_pipeline(&cfg, &source, args.command, &dir)?;
    for f in &outcome.files {
        println!("{}", f.display());
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ergodyn: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("ergodyn: {e}");
            ExitCode::from(2)
        }
    }
}
