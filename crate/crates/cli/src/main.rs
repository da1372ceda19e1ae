//! `weno`: runs named presets or configuration files and writes CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lopweno::harness::{self, presets, Precision, RunOptions};
use lopweno::Error;

#[derive(Parser)]
#[command(name = "weno", version, about = "Finite-volume WENO experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset by name, or a configuration file with --config.
    Run {
        /// Preset name (see `weno list`).
        #[arg(required_unless_present = "config", conflicts_with = "config")]
        preset: Option<String>,
        /// Path to a `key = value` configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory; defaults to `out/<preset or config name>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the solvers and independent schemes.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also write the real-time mapping trace of 1D runs.
        #[arg(long)]
        trace: bool,
        /// Print values in shortest round-trip form instead of 6 digits.
        #[arg(long)]
        full_precision: bool,
    },
    /// List the presets.
    List,
    /// Print a configuration file in canonical form.
    Check {
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        e if e.is_divergence() => 3,
        _ => 1,
    }
}

fn read_config(path: &Path) -> Result<harness::RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    harness::parse_config(&text)
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::List => {
            for p in presets::registry() {
                println!("{:<20} {}", p.name, p.about);
            }
            Ok(())
        }
        Command::Check { config } => {
            print!("{}", harness::render_config(&read_config(&config)?));
            Ok(())
        }
        Command::Run {
            preset,
            config,
            out,
            workers,
            trace,
            full_precision,
        } => {
            let opts = RunOptions {
                precision: if full_precision {
                    Precision::Full
                } else {
                    Precision::Table
                },
                trace,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot start {workers} workers: {e}")))?;
            let written = match (preset, config) {
                (Some(name), _) => {
                    let preset = presets::find(&name)?;
                    let dir = out.unwrap_or_else(|| Path::new("out").join(preset.name));
                    pool.install(|| preset.run(&dir, opts))?
                }
                (None, Some(path)) => {
                    let config = read_config(&path)?;
                    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
                    let dir = out.unwrap_or_else(|| Path::new("out").join(stem));
                    pool.install(|| harness::run_config(&config, &dir, opts))?
                }
                (None, None) => unreachable!("clap requires a preset or --config"),
            };
            for path in written {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}
