//! Verification suites. Each check records what was measured against which
//! tolerance; the command exits 1 when any check fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use dunkl_lab::equilibrium::{default_fke_step, fke_residual, log_discriminant_residual, peak_set, steady_state_logdensity};
use dunkl_lab::equilibrium::{hermite_log_discriminant, laguerre_log_discriminant};
use dunkl_lab::intertwine::{
    filter_product, hyper_series, kernel_reproducing_check, linear_intertwiner, v_a_limit, v_a_on_monomial,
    v_b_limit_beta, v_b_limit_nu, v_b_on_monomial, HyperSeriesParams, DEFAULT_MAX_DEGREE,
};
use dunkl_lab::orthopoly::{hermite_zeros, laguerre_zeros};
use dunkl_lab::sde::{relaxation_bound, InitStats};
use dunkl_lab::symfunc::{factorial, jack_coeffs, jack_eval, partitions_of, schur_eval, Partition, SymPoly};
use dunkl_lab::RootSystemConfig;

use crate::args::{Suite, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{emit_json, Output, RunManifest};

const NU_VALUES: [f64; 3] = [0.5, 1.0, 2.5];

#[derive(Serialize, Debug)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Serialize)]
struct VerifyParameters {
    suites: Vec<Suite>,
    n_max: usize,
    paths: usize,
    points: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    passed: usize,
    failed: usize,
    checks: Vec<Check>,
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    /// Passes when `measured ≤ tolerance`; NaN fails.
    fn push(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.checks.push(Check { suite: self.suite, name: name.into(), measured, tolerance, pass: measured <= tolerance });
    }
}

fn configs(n: usize, beta: f64) -> CliResult<Vec<RootSystemConfig>> {
    let mut v = vec![RootSystemConfig::type_a(n, beta)?];
    for nu in NU_VALUES {
        v.push(RootSystemConfig::type_b(n, beta, nu)?);
    }
    Ok(v)
}

fn label(cfg: &RootSystemConfig) -> String {
    match cfg.nu() {
        None => format!("A N={}", cfg.n()),
        Some(nu) => format!("B N={} nu={nu}", cfg.n()),
    }
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec())
}

fn rel_distance(a: &SymPoly, b: &SymPoly) -> f64 {
    a.max_coeff_distance(b) / b.max_abs_coeff().max(f64::MIN_POSITIVE)
}

fn freezing(r: &mut Recorder, n_max: usize) -> CliResult<()> {
    for n in 1..=n_max {
        for cfg in configs(n, 1.0)? {
            let rep = peak_set(&cfg)?;
            let identity = ["potential_minus_constant", "norm_sq_minus_gamma"]
                .iter()
                .map(|k| rep.identity_residuals[*k].abs())
                .fold(0.0, f64::max);
            r.push(format!("{}: F(v*) - K and |v*|^2 - gamma", label(&cfg)), identity, 1e-9);
            let oracle: Vec<f64> = match cfg.nu() {
                None => hermite_zeros(n)?.zeros,
                Some(nu) => laguerre_zeros(n, nu - 0.5)?.zeros.iter().map(|z| z.sqrt()).collect(),
            };
            let delta = rep.minimizer.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            r.push(format!("{}: minimizer vs polynomial zeros", label(&cfg)), delta, 1e-9);
        }
    }
    Ok(())
}

fn logdisc(r: &mut Recorder, n_max: usize) -> CliResult<()> {
    for n in 1..=n_max {
        for cfg in configs(n, 1.0)? {
            let (pts, rhs) = match cfg.nu() {
                None => (hermite_zeros(n)?.zeros, hermite_log_discriminant(n)),
                Some(nu) => (
                    laguerre_zeros(n, nu - 0.5)?.zeros.iter().map(|z| z.sqrt()).collect(),
                    laguerre_log_discriminant(n, nu - 0.5),
                ),
            };
            let res = log_discriminant_residual(&cfg, &pts) / rhs.abs().max(1.0);
            r.push(format!("{}: log-discriminant", label(&cfg)), res, 1e-9);
        }
    }
    Ok(())
}

/// Dunkl operator `T_i f(x) = ∂_i f + Σ_α (βκ_α/2) α_i (f(x) − f(σ_α x))/(α·x)` on `f(x) = b·x`.
fn dunkl_on_linear(cfg: &RootSystemConfig, b: &[f64], x: &[f64]) -> Vec<f64> {
    let f = |y: &[f64]| b.iter().zip(y).map(|(u, v)| u * v).sum::<f64>();
    let mut out = b.to_vec();
    for root in cfg.positive_roots() {
        let diff = (f(x) - f(&root.reflect(x))) / root.dot(x);
        for (o, a) in out.iter_mut().zip(&root.vector) {
            *o += cfg.beta() * root.kappa / 2.0 * a * diff;
        }
    }
    out
}

fn intertwine(r: &mut Recorder, n_max: usize) -> CliResult<()> {
    let (beta, nu, n) = (2.0, 0.5, 3.0);
    let va = v_a_on_monomial(&p(&[2]), 3, beta)?.to_monomial()?.scaled(beta);
    let vb = v_b_on_monomial(&p(&[2]), 3, beta, nu)?.to_monomial()?.scaled(beta * beta);
    let g = beta * (nu + n - 0.5);
    let d = (g + 1.0) * (g + 3.0) * (beta * n + 2.0);
    let a_err = (va.coefficient(&p(&[2])) - beta * (beta + 2.0) / (beta * n + 2.0)).abs()
        .max((va.coefficient(&p(&[1, 1])) - 2.0 * beta * beta / (beta * n + 2.0)).abs());
    let b_err = (vb.coefficient(&p(&[2])) - 3.0 * beta * beta * (beta + 2.0) / d).abs()
        .max((vb.coefficient(&p(&[1, 1])) - 6.0 * beta.powi(3) / d).abs());
    r.push("type A quadratic closed form, N=3 beta=2", a_err, 1e-12);
    r.push("type B quadratic closed form, N=3 beta=2 nu=1/2", b_err, 1e-12);
    let x_base = [0.37, 1.21, 2.05, 3.4, 4.9];
    for n in 1..=n_max {
        for cfg in configs(n, 2.0)? {
            let v = linear_intertwiner(&cfg);
            let x = &x_base[..n];
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let mut a = vec![0.0; n];
                a[i] = 1.0;
                let t = dunkl_on_linear(&cfg, &v.apply(&a), x);
                worst = worst.max(t.iter().zip(&a).map(|(u, w)| (u - w).abs()).fold(0.0, f64::max));
            }
            r.push(format!("{}: Dunkl operators intertwine linear functions", label(&cfg)), worst, 1e-12);
        }
    }
    Ok(())
}

fn limits(r: &mut Recorder, n_max: usize) -> CliResult<()> {
    for n in 1..=n_max.min(4) {
        let (mut a_worst, mut b_beta, mut b_nu, mut filt) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for k in 0..=4 {
            for lam in partitions_of(k, n) {
                let a = v_a_on_monomial(&lam, n, 1e6)?.to_monomial()?;
                a_worst = a_worst.max(rel_distance(&a, &v_a_limit(&lam, n)?));
                for nu in NU_VALUES {
                    let b = v_b_on_monomial(&lam, n, 1e7, nu)?.to_monomial()?.scaled(1e7f64.powi(k as i32));
                    b_beta = b_beta.max(rel_distance(&b, &v_b_limit_beta(&lam, n, nu)?));
                }
                for beta in [1.0, 2.0, 4.0] {
                    let b = v_b_on_monomial(&lam, n, beta, 1e7)?.to_monomial()?.scaled(1e7f64.powi(k as i32));
                    b_nu = b_nu.max(rel_distance(&b, &v_b_limit_nu(&lam, n, beta)?));
                }
                if k > 0 {
                    let f = filter_product(&lam, 1e8, n);
                    let err = if lam.len() == 1 {
                        let want = 1.0 / ((n as f64).powi(k as i32) * factorial(k));
                        (f - want).abs() / want
                    } else {
                        f.abs()
                    };
                    filt = filt.max(err);
                }
            }
        }
        r.push(format!("N={n}: type A beta-limit at beta=1e6, |lambda| <= 4"), a_worst, 1e-5);
        r.push(format!("N={n}: type B beta-limit at beta=1e7, |lambda| <= 4"), b_beta, 1e-5);
        r.push(format!("N={n}: type B nu-limit at nu=1e7, |lambda| <= 4"), b_nu, 1e-5);
        r.push(format!("N={n}: filter products at beta=1e8"), filt, 1e-6);
    }
    Ok(())
}

fn jack(r: &mut Recorder) -> CliResult<()> {
    let x = [0.31, -0.8, 1.12, 0.45, -0.27, 0.9];
    let mut worst: f64 = 0.0;
    for w in 1..=6 {
        for lam in partitions_of(w, w) {
            let s = schur_eval(&lam, &x[..w]);
            let j = jack_eval(&lam, 1.0, &x[..w])?;
            worst = worst.max((j - s).abs() / s.abs().max(1e-12));
        }
    }
    r.push("alpha=1 Jack equals Schur, |lambda| <= 6", worst, 1e-9);
    for alpha in [0.1, 1.0, 2.0, 10.0] {
        let c = jack_coeffs(&p(&[2]), alpha, 2)?.coefficient(&p(&[1, 1]));
        r.push(format!("P_(2) coefficient of m_(1,1) at alpha={alpha}"), (c - 2.0 / (1.0 + alpha)).abs(), 1e-12);
    }
    Ok(())
}

fn kernel(r: &mut Recorder, samples: usize, seed: u64) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = HyperSeriesParams { alpha: 1.0, b: None, n_vars: 3, max_degree: 30 };
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let e = x.iter().sum::<f64>().exp();
        worst = worst.max((hyper_series(params, &x, &[1.0; 3])?.value - e).abs() / e);
    }
    r.push("0F0(x, 1) = exp(sum x), N=3, degree 30", worst, 1e-10);
    let cases: [(&[f64], &[f64]); 4] = [(&[0.4], &[-0.2]), (&[0.0], &[0.7]), (&[-0.3, 0.2], &[0.1, 0.5]), (&[0.0, 0.0], &[-0.4, 0.3])];
    for (y, z) in cases {
        let cfg = RootSystemConfig::type_a(y.len(), 2.0)?;
        let chk = kernel_reproducing_check(&cfg, y, z, samples, DEFAULT_MAX_DEGREE, seed)?;
        r.push(format!("reproducing identity |z|, A beta=2 y={y:?} z={z:?}"), chk.z_score().abs(), 3.0);
    }
    Ok(())
}

fn fke(r: &mut Recorder, n_max: usize, points: usize, seed: u64) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 2..=n_max.max(2) {
        let cfgs = [RootSystemConfig::type_a(n, 2.0)?, RootSystemConfig::type_b(n, 2.0, 0.5)?];
        for cfg in cfgs {
            let peak = peak_set(&cfg)?.minimizer;
            let mut taken = 0;
            while taken < points {
                let mut v: Vec<f64> = peak
                    .iter()
                    .map(|c| {
                        let g: f64 = StandardNormal.sample(&mut rng);
                        c + 0.5 * g
                    })
                    .collect();
                if cfg.is_type_b() {
                    v.iter_mut().for_each(|x| *x = x.abs());
                }
                v.sort_by(f64::total_cmp);
                if cfg.wall_distance(&v) < 0.05 {
                    continue;
                }
                let res = fke_residual(&cfg, |x| steady_state_logdensity(&cfg, x), &v, default_fke_step(&v))?;
                let pt: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
                r.push(format!("{}: residual at ({})", label(&cfg), pt.join(", ")), res.relative(), 1e-4);
                taken += 1;
            }
        }
    }
    Ok(())
}

fn bounds(r: &mut Recorder) {
    let a = relaxation_bound(&InitStats::from_point(&[0.0, 1.0, 2.0]), 2.0);
    let b = relaxation_bound(&InitStats::from_point(&[1.0, 2.0, 3.0]), 2.0);
    r.push("bound for (0,1,2) at beta=2 equals 10", (a - 10.0).abs(), 0.0);
    r.push("bound for (1,2,3) at beta=2 equals 28", (b - 28.0).abs(), 0.0);
}

pub fn run_suites(args: &VerifyArgs) -> CliResult<Vec<Check>> {
    let suites: Vec<Suite> = if args.suite.is_empty() { Suite::ALL.to_vec() } else { args.suite.clone() };
    if args.n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let mut all = Vec::new();
    for suite in suites {
        let mut r = Recorder { suite, checks: Vec::new() };
        match suite {
            Suite::Freezing => freezing(&mut r, args.n_max)?,
            Suite::Logdisc => logdisc(&mut r, args.n_max)?,
            Suite::Intertwine => intertwine(&mut r, args.n_max)?,
            Suite::Limits => limits(&mut r, args.n_max)?,
            Suite::Jack => jack(&mut r)?,
            Suite::Kernel => kernel(&mut r, args.paths, args.seed)?,
            Suite::Fke => fke(&mut r, args.n_max, args.points, args.seed)?,
            Suite::Bounds => bounds(&mut r),
        }
        all.extend(r.checks);
    }
    Ok(all)
}

pub fn run(args: VerifyArgs) -> CliResult<()> {
    let started = Instant::now();
    let checks = run_suites(&args)?;
    for c in &checks {
        eprintln!(
            "{} [{:?}] {}: {:.3e} (tol {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.measured,
            c.tolerance
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let params = VerifyParameters {
        suites: if args.suite.is_empty() { Suite::ALL.to_vec() } else { args.suite.clone() },
        n_max: args.n_max,
        paths: args.paths,
        points: args.points,
    };
    let report = VerifyReport { passed: checks.len() - failed, failed, checks };
    let out = Output { manifest: RunManifest::new("verify", params, Some(args.seed), started), report };
    emit_json(&out, args.out.as_deref())?;
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} check(s) failed")));
    }
    Ok(())
}
