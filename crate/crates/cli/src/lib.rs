//! Batch front end: a JSON run configuration in, data files and a hashed
//! manifest out.

mod commands;
pub mod config;
mod output;

use thiserror::Error;

pub use config::{Args, Command, RunConfig};
pub use output::{FileEntry, Manifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] love_res::Error),
    #[error("class condition violated: {0}")]
    Class(String),
}

impl CliError {
    /// 2 for configuration and input errors, 3 for numerical failures,
    /// 4 for class-condition violations.
    pub fn exit_code(&self) -> i32 {
        use love_res::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Class(_) => 4,
            CliError::Core(e) if e.is_class_violation() => 4,
            CliError::Core(e) => match e.root() {
                E::Domain(_) | E::Io(_) | E::Json(_) | E::Csv(_) => 2,
                _ => 3,
            },
        }
    }
}

/// Runs one command. Outputs are written even when a check command reports a
/// class violation, which is then returned as the error.
pub fn run(cfg: &RunConfig, base: &std::path::Path) -> Result<Manifest, CliError> {
    let workers = cfg.workers.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| commands::dispatch(cfg, base))
}

/// Entry point shared by the binary: parses flags, runs, reports.
pub fn main_with_args(args: &Args) -> i32 {
    let outcome = RunConfig::from_args(args).and_then(|(cfg, base)| run(&cfg, &base));
    match outcome {
        Ok(manifest) => {
            for f in &manifest.files {
                println!("{}  {}", f.sha256, f.path);
            }
            0
        }
        Err(e) => {
            eprintln!("love-res: {e}");
            e.exit_code()
        }
    }
}
