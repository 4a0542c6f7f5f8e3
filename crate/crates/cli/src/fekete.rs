use std::time::Instant;

use serde::Serialize;

use dunkl_lab::equilibrium::{log_discriminant_residual, peak_set, PotentialReport};
use dunkl_lab::orthopoly::{hermite_zeros, laguerre_zeros};

use crate::args::{FeketeArgs, RootType};
use crate::error::CliResult;
use crate::manifest::{emit_json, Output, RunManifest};
use crate::root_config;

#[derive(Serialize)]
struct FeketeParameters {
    root_type: RootType,
    n: usize,
    nu: Option<f64>,
}

/// The minimizer compared with the orthogonal-polynomial zeros it should equal.
#[derive(Serialize)]
struct ZeroCheck {
    /// Hermite zeros (type A) or square roots of Laguerre zeros with parameter ν − 1/2 (type B).
    oracle: Vec<f64>,
    deltas: Vec<f64>,
    max_abs_delta: f64,
    log_discriminant_residual: f64,
}

#[derive(Serialize)]
struct FeketeReport {
    #[serde(flatten)]
    potential: PotentialReport,
    zero_check: ZeroCheck,
}

pub fn run(args: FeketeArgs) -> CliResult<()> {
    let started = Instant::now();
    // the minimizer does not depend on β
    let cfg = root_config(args.root_type, args.n, 1.0, args.nu)?;
    let potential = peak_set(&cfg)?;
    let oracle: Vec<f64> = match cfg.nu() {
        None => hermite_zeros(args.n)?.zeros,
        Some(nu) => laguerre_zeros(args.n, nu - 0.5)?.zeros.iter().map(|z| z.sqrt()).collect(),
    };
    let deltas: Vec<f64> = potential.minimizer.iter().zip(&oracle).map(|(a, b)| a - b).collect();
    let zero_check = ZeroCheck {
        max_abs_delta: deltas.iter().fold(0.0, |m, d| m.max(d.abs())),
        log_discriminant_residual: log_discriminant_residual(&cfg, &potential.minimizer),
        oracle,
        deltas,
    };
    let params = FeketeParameters { root_type: args.root_type, n: args.n, nu: args.nu };
    let out = Output {
        manifest: RunManifest::new("fekete", params, None, started),
        report: FeketeReport { potential, zero_check },
    };
    emit_json(&out, args.out.as_deref())
}
