mod args;
mod error;
mod fekete;
mod intertwine;
mod manifest;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, RootType};
use dunkl_lab::RootSystemConfig;
use error::{CliError, CliResult};

/// Builds the root system, rejecting `--nu` for type A and requiring it for type B.
pub(crate) fn root_config(root_type: RootType, n: usize, beta: f64, nu: Option<f64>) -> CliResult<RootSystemConfig> {
    let cfg = match (root_type, nu) {
        (RootType::A, None) => RootSystemConfig::type_a(n, beta)?,
        (RootType::A, Some(_)) => return Err(CliError::Usage("--nu only applies to type B".into())),
        (RootType::B, Some(nu)) => RootSystemConfig::type_b(n, beta, nu)?,
        (RootType::B, None) => return Err(CliError::Usage("type B needs --nu".into())),
    };
    Ok(cfg)
}

/// Caps the worker pool from `DUNKL_LAB_THREADS`; 0 or unset means automatic.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("DUNKL_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("DUNKL_LAB_THREADS=`{raw}` is not a nonnegative integer")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Fekete(a) => fekete::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Intertwine(a) => intertwine::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dunkl-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
