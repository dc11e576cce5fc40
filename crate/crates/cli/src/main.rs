//! Batch front-end for the open-system qubit simulator: a JSON config
//! in, machine-readable results out.
//!
//! Exit codes: 0 success; 1 configuration or usage error; 2 numerical
//! failure inside the library, with the failing operation named on
//! stderr.

mod commands;
mod config;
mod emit;
mod error;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::OutputFormat;
use config::FileConfig;
use error::{CliError, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "frqme", version, about = "Single-qubit gate simulation on a dissipative spin")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a state through a gate or shaped pulse
    Simulate(CommonArgs),
    /// Chart the closed-form fidelity landscape over (beta, x)
    FidelityScan(CommonArgs),
    /// Find the fidelity-maximizing drive amplitude
    Optimize(CommonArgs),
    /// Compare the rotary flip block against its closed-form decay
    R3Verify(CommonArgs),
    /// Check the optimal drive against a coupling ceiling
    Feasibility(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (csv is only meaningful for fidelity-scan)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for the landscape scan (falls back to
    /// FRQME_THREADS, then to one thread per core)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let (args, is_scan) = match &cli.command {
        Command::Simulate(a) => (a, false),
        Command::FidelityScan(a) => (a, true),
        Command::Optimize(a) => (a, false),
        Command::R3Verify(a) => (a, false),
        Command::Feasibility(a) => (a, false),
    };

    let format = match (args.format, is_scan) {
        (Some(FormatArg::Csv), false) => {
            return Err(CliError::Config(
                "--format csv is only available for fidelity-scan".into(),
            ));
        }
        (Some(FormatArg::Csv), true) => OutputFormat::Csv,
        (Some(FormatArg::Json), _) => OutputFormat::Json,
        (None, true) => OutputFormat::Csv,
        (None, false) => OutputFormat::Json,
    };

    let config = FileConfig::load(&args.config)?;
    let threads = effective_threads(args.threads)?;

    let dispatch = || -> Result<String> {
        match &cli.command {
            Command::Simulate(_) => commands::simulate(&config),
            Command::FidelityScan(_) => commands::fidelity_scan(&config, format),
            Command::Optimize(_) => commands::optimize(&config),
            Command::R3Verify(_) => commands::r3_verify(&config),
            Command::Feasibility(_) => commands::feasibility(&config),
        }
    };

    let output = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(dispatch)?
        }
        None => dispatch()?,
    };

    match &args.out {
        Some(path) => std::fs::write(path, output).map_err(|e| {
            CliError::Config(format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{output}"),
    }
    Ok(())
}

/// --threads wins, then FRQME_THREADS; absent both, the library's
/// default pool (one thread per core) is used as-is.
fn effective_threads(flag: Option<usize>) -> Result<Option<usize>> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("FRQME_THREADS") {
            Ok(value) => Some(value.parse::<usize>().map_err(|e| {
                CliError::Config(format!("FRQME_THREADS = {value:?} is not a thread count: {e}"))
            })?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(CliError::Config("thread count must be at least 1".into()));
    }
    Ok(n)
}
