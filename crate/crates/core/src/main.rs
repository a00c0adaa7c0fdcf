use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use burgers_source::cli::{run, Command, Options};

/// Viscous and inviscid Burgers flow with a unit source at the origin.
#[derive(Parser)]
#[command(name = "burgers-source", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// TOML run configuration
    #[arg(long, global = true, default_value = "config.toml")]
    config: PathBuf,
    /// output directory (overrides out_dir in the config)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// worker threads (overrides threads in the config)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// theta and u_eps on a grid, plus the boundary trace
    Viscous,
    /// the variational limit U and u on a grid, plus interfaces
    Limit,
    /// run the configured checks and write verify_report.json
    Verify,
    /// interface curves on both sides of the source
    Interfaces,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cmd = match args.command {
        Cmd::Viscous => Command::Viscous,
        Cmd::Limit => Command::Limit,
        Cmd::Verify => Command::Verify,
        Cmd::Interfaces => Command::Interfaces,
    };
    let opts = Options { config: args.config, out: args.out, threads: args.threads };
    ExitCode::from(run(cmd, &opts) as u8)
}
