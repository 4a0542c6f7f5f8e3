use std::time::Instant;

use serde::Serialize;

use dunkl_lab::orthopoly::{density_a_exact, density_b_exact};
use dunkl_lab::sde::{scaled_histogram, simulate_paths, DensityHistogram, Initial, SimPlan, DEFAULT_BIN_WIDTH};

use crate::args::{Bins, RootType, Scale, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::root_config;

#[derive(Serialize)]
struct SimulateParameters {
    root_type: RootType,
    n: usize,
    beta: f64,
    nu: Option<f64>,
    t: f64,
    dt: f64,
    paths: usize,
    init: Vec<f64>,
    scale: Scale,
    scale_factor: f64,
    bins: Bins,
    exact: bool,
    /// Equivalent invocation with every default made explicit.
    rerun: String,
}

#[derive(Serialize)]
struct SimulateStats {
    steps_per_path: usize,
    tie_repairs: u64,
    underflow: u64,
    overflow: u64,
}

#[derive(Serialize)]
struct SimulateManifest {
    #[serde(flatten)]
    run: RunManifest<SimulateParameters>,
    stats: SimulateStats,
}

fn scale_factor(scale: Scale, beta: f64, nu: Option<f64>, t: f64) -> CliResult<f64> {
    match (scale, nu) {
        (Scale::BetaT, _) => Ok((beta * t).sqrt()),
        (Scale::BetaNuT, Some(nu)) if nu > 0.0 => Ok((beta * nu * t).sqrt()),
        (Scale::BetaNuT, _) => Err(CliError::Usage("--scale beta_nu_t needs type B with --nu > 0".into())),
        (Scale::None, _) => Ok(1.0),
    }
}

/// Smallest grid of the given width, anchored at a multiple of it, that holds every scaled value.
fn data_bins(finals: &[Vec<f64>], scale: f64, width: f64) -> Bins {
    let scaled = finals.iter().flatten().map(|v| v / scale);
    let (min, max) = scaled.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let mut lo = (min / width).floor() * width;
    if min < lo {
        lo -= width;
    }
    let n_bins = ((max - lo) / width).floor() as usize + 1;
    Bins { lo, hi: lo + n_bins as f64 * width, width }
}

/// Exact density of the scaled variable at `v`, when one exists for these parameters.
fn exact_density(args: &SimulateArgs, scale: f64, v: f64) -> Option<f64> {
    if args.beta != 2.0 {
        return None;
    }
    let y = v * scale;
    let sigma = match (args.root_type, args.nu) {
        (RootType::A, _) => density_a_exact(args.n, args.t_final, y),
        (RootType::B, Some(nu)) => density_b_exact(args.n, nu, args.t_final, y),
        (RootType::B, None) => return None,
    };
    Some(scale * sigma)
}

fn write_csv(path: &std::path::Path, h: &DensityHistogram, exact: Option<&dyn Fn(f64) -> Option<f64>>) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["bin_left", "bin_right", "density"];
    if exact.is_some() {
        header.push("exact");
    }
    w.write_record(&header)?;
    for (i, d) in h.densities().into_iter().enumerate() {
        let left = h.bin_left(i);
        let mut row = vec![left.to_string(), (left + h.bin_width).to_string(), d.to_string()];
        if let Some(f) = exact {
            row.push(f(h.bin_center(i)).map(|x| x.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn rerun_line(p: &SimulateParameters, seed: u64, out: &std::path::Path) -> String {
    let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let scale = match p.scale {
        Scale::BetaT => "beta_t",
        Scale::BetaNuT => "beta_nu_t",
        Scale::None => "none",
    };
    let mut s = format!(
        "dunkl-lab simulate --type {} --n {} --beta {}",
        if p.root_type == RootType::A { "A" } else { "B" },
        p.n,
        p.beta
    );
    if let Some(nu) = p.nu {
        s += &format!(" --nu {nu}");
    }
    s += &format!(
        " --t {} --dt {} --paths {} --seed {seed} --init={} --scale {scale} --bins={}:{}:{}",
        p.t,
        p.dt,
        p.paths,
        list(&p.init),
        p.bins.lo,
        p.bins.hi,
        p.bins.width
    );
    if p.exact {
        s += " --exact";
    }
    s + &format!(" --out {}", out.display())
}

pub fn run(args: SimulateArgs) -> CliResult<()> {
    let started = Instant::now();
    let cfg = root_config(args.root_type, args.n, args.beta, args.nu)?;
    let scale = scale_factor(args.scale, args.beta, args.nu, args.t_final)?;
    let initial = match &args.init {
        Some(v) if v.0.len() != args.n => {
            return Err(CliError::Usage(format!("--init has {} values but --n is {}", v.0.len(), args.n)));
        }
        Some(v) => Initial::Positions(v.0.clone()),
        None => Initial::Lattice { spacing: 1.0 },
    };
    let init = initial.positions(&cfg);
    let plan = SimPlan::new(cfg, args.dt, args.t_final, args.paths, args.seed, initial)?;
    let ens = simulate_paths(&plan)?;
    let bins = args.bins.unwrap_or_else(|| data_bins(&ens.finals, scale, DEFAULT_BIN_WIDTH));
    let hist = scaled_histogram(&ens.finals, scale, bins.lo, bins.hi, bins.width)?;

    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("histogram.csv");
    let exact = |v: f64| exact_density(&args, scale, v);
    write_csv(&csv_path, &hist, args.exact.then_some(&exact as &dyn Fn(f64) -> Option<f64>))?;

    let mut params = SimulateParameters {
        root_type: args.root_type,
        n: args.n,
        beta: args.beta,
        nu: args.nu,
        t: args.t_final,
        dt: args.dt,
        paths: args.paths,
        init,
        scale: args.scale,
        scale_factor: scale,
        bins: Bins { lo: hist.lo, hi: hist.hi, width: hist.bin_width },
        exact: args.exact,
        rerun: String::new(),
    };
    params.rerun = rerun_line(&params, args.seed, &args.out);
    let manifest = SimulateManifest {
        run: RunManifest::new("simulate", params, Some(args.seed), started),
        stats: SimulateStats {
            steps_per_path: ens.steps_per_path,
            tie_repairs: ens.repairs,
            underflow: hist.underflow,
            overflow: hist.overflow,
        },
    };
    std::fs::write(args.out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    println!(
        "wrote {} ({} bins, {} below and {} above range)",
        csv_path.display(),
        hist.counts.len(),
        hist.underflow,
        hist.overflow
    );
    Ok(())
}
