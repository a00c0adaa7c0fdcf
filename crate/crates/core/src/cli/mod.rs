//! Command-line driver: config loading, sweeps, CSV and JSON output, exit codes.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use commands::{cmd_interfaces, cmd_limit, cmd_verify, cmd_viscous};
pub use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::Io(_) => EXIT_NUMERICAL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Viscous,
    Limit,
    Verify,
    Interfaces,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Lowercase hex SHA-256 of the raw config bytes.
pub fn config_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A parsed config together with its hash and output directory.
pub struct Loaded {
    pub config: RunConfig,
    pub hash: String,
    pub out_dir: PathBuf,
}

pub fn load(opts: &Options) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(&opts.config).map_err(|e| CliError::Config(format!("cannot read {}: {e}", opts.config.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Config("config is not UTF-8".into()))?;
    let config = RunConfig::parse(text).map_err(CliError::Config)?;
    if opts.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let out_dir = opts
        .out
        .clone()
        .or_else(|| config.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Some(n) = opts.threads.or(config.threads) {
        crate::par::set_threads(n);
    }
    Ok(Loaded { config, hash: config_hash(&bytes), out_dir })
}

/// Run one subcommand and map the outcome to an exit code; diagnostics go to stderr.
pub fn run(cmd: Command, opts: &Options) -> i32 {
    let result = load(opts).and_then(|l| dispatch(cmd, &l.config, &l.hash, &l.out_dir));
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("verification failed; see verify_report.json");
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig, hash: &str, out: &Path) -> Result<bool, CliError> {
    match cmd {
        Command::Viscous => cmd_viscous(cfg, hash, out).map(|_| true),
        Command::Limit => cmd_limit(cfg, hash, out).map(|_| true),
        Command::Interfaces => cmd_interfaces(cfg, hash, out).map(|_| true),
        Command::Verify => cmd_verify(cfg, hash, out).map(|r| r.all_passed),
    }
}
