use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use vdge::experiments::{load_config, Experiment};
use vdge::GmeError;

/// Variational estimation of the geometric measure of entanglement.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Output file (default: stdout).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Replay a config, JSON report, or CSV produced by an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Experiment>,
}

fn run(cli: Cli) -> Result<(), GmeError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| GmeError::Format {
                field: "threads".into(),
                message: e.to_string(),
            })?;
    }
    let experiment = match (cli.config, cli.command) {
        (Some(_), Some(_)) => {
            return Err(GmeError::Format {
                field: "config".into(),
                message: "--config replaces the subcommand; give one or the other".into(),
            })
        }
        (Some(path), None) => load_config(&std::fs::read_to_string(path)?)?,
        (None, Some(cmd)) => cmd,
        (None, None) => {
            return Err(GmeError::Format {
                field: "command".into(),
                message: "a subcommand or --config is required".into(),
            })
        }
    };
    match cli.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            experiment.run(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            experiment.run(&mut out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vdge: {e}");
            if e.is_input_error() || matches!(e, GmeError::Io(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
