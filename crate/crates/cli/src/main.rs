//! `cycle-lab`: runs one experiment described by a TOML config.
//!
//! Exit status: 0 on success, 1 on an I/O error, 2 on a validation error (nothing is written),
//! 3 when the run finished short of its goal (diagnostics are written).

mod config;
mod run;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Parser, Debug)]
#[command(name = "cycle-lab", version, about = "Cycle packing experiments on randomly perturbed graphs")]
struct Args {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. `--set p=0.1` or `--set sweep.trials=50`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; defaults to the config's `out`, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for parallel trials.
    #[arg(long)]
    threads: Option<usize>,
    /// Master seed, replacing the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    let io = |source| CliError::Io { path: path.clone(), source };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content.as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(())
}

fn main_inner(args: Args) -> Result<Option<String>, CliError> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Validation(format!("--threads: {e}")))?;
    }
    let cfg = config::load(&args.config, &args.set, args.seed)?;
    let outcome = run::execute(&cfg)?;
    let dir = args.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    for a in &outcome.artifacts {
        write_atomic(&dir, a.name, &a.content)?;
        println!("wrote {}", dir.join(a.name).display());
    }
    Ok(outcome.shortfall)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(args) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(why)) => {
            eprintln!("shortfall: {why}");
            ExitCode::from(3)
        }
        Err(e @ CliError::Validation(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
