use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::CliResult;

/// Written next to every output so a run can be repeated exactly.
#[derive(Serialize, Debug)]
pub struct RunManifest<P: Serialize> {
    pub command: &'static str,
    pub parameters: P,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub wall_clock_seconds: f64,
}

impl<P: Serialize> RunManifest<P> {
    pub fn new(command: &'static str, parameters: P, seed: Option<u64>, started: Instant) -> Self {
        RunManifest {
            command,
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// A report together with the manifest of the run that produced it.
#[derive(Serialize, Debug)]
pub struct Output<P: Serialize, R: Serialize> {
    pub manifest: RunManifest<P>,
    pub report: R,
}

/// Pretty JSON to a file, or to stdout when no path is given.
pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
