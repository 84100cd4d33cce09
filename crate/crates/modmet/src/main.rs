use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modmet::{generate, run, GenerateOptions, RunOptions};

/// Numerical experiments on modular (pseudo)metric spaces: axiom checks,
/// induced gauges, uniformity metrization, Δ₂ diagnostics, Cauchy and
/// compactness evidence, and the Orlicz compactness pipeline.
#[derive(Parser)]
#[command(name = "modmet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config and write its report.
    ///
    /// Exit codes: 0 pass/evidence, 2 fail-with-witness, 3 inconclusive,
    /// 1 usage or IO error.
    Run {
        /// JSON experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for report.json, meta.json and CSV tables.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config experiment kind.
        #[arg(long)]
        experiment: Option<String>,
        /// Suppresses the summary line.
        #[arg(long)]
        quiet: bool,
    },
    /// Emit a deterministic fixture (space or function family).
    Generate {
        /// One of: space, hexagon, rademacher, lipschitz.
        #[arg(long)]
        kind: String,
        /// Output directory.
        #[arg(long, default_value = "modmet_fixtures")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point count for random spaces.
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Family size for function families.
        #[arg(long, default_value_t = 16)]
        m: usize,
        /// Cell count for function families.
        #[arg(long, default_value_t = 64)]
        cells: usize,
        /// Coordinate scale for random spaces.
        #[arg(long, default_value_t = 4.0)]
        scale: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, seed, experiment, quiet } => {
            let opts = RunOptions { config, out, seed, experiment, quiet };
            match run(&opts) {
                Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
                Err(e) => {
                    eprintln!("modmet: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Generate { kind, out, seed, n, m, cells, scale } => {
            let opts = GenerateOptions { kind, out, seed, n, m, cells, scale };
            match generate(&opts) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("modmet: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
