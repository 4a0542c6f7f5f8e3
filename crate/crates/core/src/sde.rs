//! Euler–Maruyama integration of the radial SDEs with projection onto the
//! chamber after every step, reproducible parallel ensembles and histograms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootKind, RootSystemConfig};

/// Seed used when the caller does not provide one.
pub const DEFAULT_SEED: u64 = 0x5EED_D0C5_2011_0001;
/// Step size of the relaxation experiments.
pub const DT_RELAXATION: f64 = 2e-4;
/// Step size of the large-β experiments.
pub const DT_LARGE_BETA: f64 = 5e-5;
/// Default histogram resolution.
pub const DEFAULT_BIN_WIDTH: f64 = 1e-2;

/// Ordered particle positions at a given time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub positions: Vec<f64>,
    pub time: f64,
}

/// Drift of the radial SDE; `x` must lie strictly inside the chamber.
pub fn drift(cfg: &RootSystemConfig, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != cfg.n() {
        return Err(Error::InvalidParameter(format!("expected {} coordinates", cfg.n())));
    }
    if !cfg.in_weyl_chamber(x) {
        return Err(Error::Domain(format!("{x:?} is not inside the chamber")));
    }
    let mut out = vec![0.0; x.len()];
    drift_into(cfg, x, &mut out);
    Ok(out)
}

#[inline]
fn drift_into(cfg: &RootSystemConfig, x: &[f64], out: &mut [f64]) {
    let n = x.len();
    let half_beta = 0.5 * cfg.beta();
    out.iter_mut().for_each(|b| *b = 0.0);
    match cfg.kind() {
        RootKind::A => {
            for i in 0..n {
                for j in i + 1..n {
                    let d = 1.0 / (x[i] - x[j]);
                    out[i] += d;
                    out[j] -= d;
                }
            }
        }
        RootKind::B { nu } => {
            let c = (2.0 * nu + 1.0) / 2.0;
            for i in 0..n {
                out[i] += c / x[i];
                for j in i + 1..n {
                    let d = 1.0 / (x[i] - x[j]);
                    let s = 1.0 / (x[i] + x[j]);
                    out[i] += d + s;
                    out[j] += s - d;
                }
            }
        }
    }
    out.iter_mut().for_each(|b| *b *= half_beta);
}

/// Maps a raw Euler update back into the closed chamber and separates exact ties.
/// Returns the number of tie repairs.
#[inline]
fn project(cfg: &RootSystemConfig, x: &mut [f64]) -> u64 {
    if cfg.is_type_b() {
        x.iter_mut().for_each(|v| *v = v.abs());
    }
    // insertion sort: states are almost always already ordered
    for i in 1..x.len() {
        let mut j = i;
        while j > 0 && x[j - 1] > x[j] {
            x.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut repairs = 0;
    if cfg.is_type_b() && x[0] == 0.0 {
        x[0] = f64::EPSILON;
        repairs += 1;
    }
    for i in 1..x.len() {
        if x[i] <= x[i - 1] {
            x[i] = x[i - 1] + f64::EPSILON * x[i - 1].abs().max(1.0);
            repairs += 1;
        }
    }
    repairs
}

/// One projected Euler step with the given standard normal increments.
pub fn euler_step(
    cfg: &RootSystemConfig,
    state: &ParticleState,
    dt: f64,
    noise: &[f64],
) -> Result<ParticleState> {
    if noise.len() != cfg.n() {
        return Err(Error::InvalidParameter("noise length must equal N".into()));
    }
    let b = drift(cfg, &state.positions)?;
    let sq = dt.sqrt();
    let mut x: Vec<f64> =
        (0..cfg.n()).map(|i| state.positions[i] + b[i] * dt + sq * noise[i]).collect();
    project(cfg, &mut x);
    Ok(ParticleState { positions: x, time: state.time + dt })
}

/// Where the particles start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Initial {
    Positions(Vec<f64>),
    /// Evenly spaced points: centred on 0 for type A, `spacing·(1..=N)` for type B.
    Lattice { spacing: f64 },
}

impl Initial {
    pub fn positions(&self, cfg: &RootSystemConfig) -> Vec<f64> {
        match self {
            Initial::Positions(p) => p.clone(),
            Initial::Lattice { spacing } => {
                let n = cfg.n();
                if cfg.is_type_b() {
                    (1..=n).map(|i| spacing * i as f64).collect()
                } else {
                    (0..n).map(|i| spacing * (i as f64 - (n as f64 - 1.0) / 2.0)).collect()
                }
            }
        }
    }
}

/// Everything needed to reproduce an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPlan {
    pub cfg: RootSystemConfig,
    pub dt: f64,
    pub t_final: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub initial: Initial,
}

impl SimPlan {
    pub fn new(
        cfg: RootSystemConfig,
        dt: f64,
        t_final: f64,
        n_paths: usize,
        seed: u64,
        initial: Initial,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidParameter("dt and t_final must be positive".into()));
        }
        if dt > t_final {
            return Err(Error::InvalidParameter(format!("dt={dt} exceeds t_final={t_final}")));
        }
        if n_paths == 0 {
            return Err(Error::InvalidParameter("at least one path is required".into()));
        }
        let x0 = initial.positions(&cfg);
        if !cfg.in_weyl_chamber(&x0) {
            return Err(Error::InvalidParameter(format!(
                "initial positions {x0:?} must be strictly inside the chamber"
            )));
        }
        Ok(Self { cfg, dt, t_final, n_paths, seed, initial })
    }

    /// Number of steps; the last one is shortened to land on `t_final`.
    pub fn n_steps(&self) -> usize {
        ((self.t_final / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }

    /// Independent generator for one path, keyed by `(seed, path)`.
    pub fn path_rng(&self, path: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(path as u64);
        rng
    }
}

/// Final positions of every path, in path order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub finals: Vec<Vec<f64>>,
    /// Total number of tie repairs across all paths and steps.
    pub repairs: u64,
    pub steps_per_path: usize,
}

fn run_path(plan: &SimPlan, path: usize) -> Result<(Vec<f64>, u64)> {
    let cfg = &plan.cfg;
    let n = cfg.n();
    let mut rng = plan.path_rng(path);
    let mut x = plan.initial.positions(cfg);
    let mut b = vec![0.0; n];
    let steps = plan.n_steps();
    let mut repairs = 0;
    for k in 0..steps {
        let dt = if k + 1 == steps { plan.t_final - k as f64 * plan.dt } else { plan.dt };
        let sq = dt.sqrt();
        drift_into(cfg, &x, &mut b);
        for i in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            x[i] += b[i] * dt + sq * z;
        }
        repairs += project(cfg, &mut x);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("path {path} produced a non-finite state")));
    }
    Ok((x, repairs))
}

/// Integrates every path of the plan. The result depends only on the plan,
/// not on how many worker threads run it.
pub fn simulate_paths(plan: &SimPlan) -> Result<Ensemble> {
    #[cfg(feature = "parallel")]
    let results: Vec<Result<(Vec<f64>, u64)>> =
        (0..plan.n_paths).into_par_iter().map(|p| run_path(plan, p)).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(Vec<f64>, u64)>> =
        (0..plan.n_paths).map(|p| run_path(plan, p)).collect();
    let mut finals = Vec::with_capacity(plan.n_paths);
    let mut repairs = 0;
    for r in results {
        let (x, k) = r?;
        finals.push(x);
        repairs += k;
    }
    Ok(Ensemble { finals, repairs, steps_per_path: plan.n_steps() })
}

/// Binned one-point density of the scaled coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityHistogram {
    pub lo: f64,
    pub hi: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    pub total_particles: u64,
    pub n_paths: u64,
    pub scale_factor: f64,
}

impl DensityHistogram {
    /// Density per bin, normalized to integrate to N over the real line.
    pub fn densities(&self) -> Vec<f64> {
        let norm = self.n_paths as f64 * self.bin_width;
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }

    pub fn bin_left(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.bin_width
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.bin_left(i) + 0.5 * self.bin_width
    }
}

/// Histogram of every coordinate divided by `scale_factor` over `[lo, hi)`.
pub fn scaled_histogram(
    finals: &[Vec<f64>],
    scale_factor: f64,
    lo: f64,
    hi: f64,
    bin_width: f64,
) -> Result<DensityHistogram> {
    if !(bin_width > 0.0) || !(lo < hi) || !(scale_factor > 0.0) {
        return Err(Error::InvalidParameter("need lo < hi and positive bin width and scale".into()));
    }
    let n_bins = ((hi - lo) / bin_width - 1e-9).ceil().max(1.0) as usize;
    let mut h = DensityHistogram {
        lo,
        hi: lo + n_bins as f64 * bin_width,
        bin_width,
        counts: vec![0; n_bins],
        underflow: 0,
        overflow: 0,
        total_particles: 0,
        n_paths: finals.len() as u64,
        scale_factor,
    };
    for x in finals {
        for &v in x {
            h.total_particles += 1;
            let k = ((v / scale_factor - lo) / bin_width).floor();
            if k < 0.0 {
                h.underflow += 1;
            } else if k >= n_bins as f64 {
                h.overflow += 1;
            } else {
                h.counts[k as usize] += 1;
            }
        }
    }
    Ok(h)
}

/// Per-particle means of the ordered coordinates, each divided by `scale`.
pub fn per_particle_means(finals: &[Vec<f64>], scale: f64) -> Vec<f64> {
    let n = finals.first().map_or(0, |x| x.len());
    let mut m = vec![0.0; n];
    for x in finals {
        for (a, v) in m.iter_mut().zip(x) {
            *a += v / scale;
        }
    }
    m.iter().map(|s| s / finals.len() as f64).collect()
}

/// The squared process `Y²`, obtained from the finals by squaring coordinates.
pub fn squared(finals: &[Vec<f64>]) -> Vec<Vec<f64>> {
    finals.iter().map(|x| x.iter().map(|v| v * v).collect()).collect()
}

/// First and second moments of the initial distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitStats {
    pub mean: Vec<f64>,
    /// Total variance `E|x − x̄|²`.
    pub variance_total: f64,
}

impl InitStats {
    /// A point mass.
    pub fn from_point(x: &[f64]) -> Self {
        Self { mean: x.to_vec(), variance_total: 0.0 }
    }
}

/// Time after which the scaled process is close to its steady state:
/// `t ≫ (s² + |x̄|²)·max(1, β)`.
pub fn relaxation_bound(stats: &InitStats, beta: f64) -> f64 {
    let m2: f64 = stats.mean.iter().map(|v| v * v).sum();
    (stats.variance_total + m2) * beta.max(1.0)
}
