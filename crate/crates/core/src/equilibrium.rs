//! Log-gas potentials, their minimizers (the peak set), steady-state densities
//! and pointwise checks of the scaled forward equation.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootKind, RootSystemConfig};

const NEWTON_CAP: usize = 100;

/// Potential value with first and second derivatives.
#[derive(Clone, Debug)]
pub struct PotentialEval {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: DMatrix<f64>,
}

/// Minimizer of the potential together with identity diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialReport {
    pub minimizer: Vec<f64>,
    pub potential_at_min: f64,
    pub freezing_constant: f64,
    /// `potential_minus_constant`, `norm_sq_minus_gamma` and `log_discriminant`.
    pub identity_residuals: BTreeMap<String, f64>,
    pub newton_iterations: usize,
    pub gradient_norm: f64,
    /// Ascending eigenvalues of the Hessian at the minimizer.
    pub hessian_eigenvalues: Vec<f64>,
}

fn on_wall(cfg: &RootSystemConfig, v: &[f64]) -> bool {
    let n = v.len();
    for i in 0..n {
        if cfg.is_type_b() && v[i] == 0.0 {
            return true;
        }
        for j in i + 1..n {
            if v[i] == v[j] || (cfg.is_type_b() && v[i] == -v[j]) {
                return true;
            }
        }
    }
    false
}

/// Potential value only; `+inf` on a wall.
pub fn potential_value(cfg: &RootSystemConfig, v: &[f64]) -> f64 {
    let n = v.len();
    let half_sq: f64 = 0.5 * v.iter().map(|x| x * x).sum::<f64>();
    let mut logs = 0.0;
    match cfg.kind() {
        RootKind::A => {
            for i in 0..n {
                for j in i + 1..n {
                    logs += (v[j] - v[i]).abs().ln();
                }
            }
            half_sq - logs
        }
        RootKind::B { nu } => {
            let mut short = 0.0;
            for i in 0..n {
                short += v[i].abs().ln();
                for j in i + 1..n {
                    logs += (v[j] * v[j] - v[i] * v[i]).abs().ln();
                }
            }
            half_sq - (2.0 * nu + 1.0) / 2.0 * short - logs
        }
    }
}

/// Potential with gradient and Hessian; a point on a wall is a domain error.
pub fn potential(cfg: &RootSystemConfig, v: &[f64]) -> Result<PotentialEval> {
    let n = cfg.n();
    if v.len() != n {
        return Err(Error::InvalidParameter(format!("expected {n} coordinates, got {}", v.len())));
    }
    if on_wall(cfg, v) || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("{v:?} lies on a chamber wall")));
    }
    let mut grad: Vec<f64> = v.to_vec();
    let mut hess = DMatrix::<f64>::identity(n, n);
    match cfg.kind() {
        RootKind::A => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let d = v[i] - v[j];
                        grad[i] -= 1.0 / d;
                        hess[(i, i)] += 1.0 / (d * d);
                        hess[(i, j)] = -1.0 / (d * d);
                    }
                }
            }
        }
        RootKind::B { nu } => {
            let c = (2.0 * nu + 1.0) / 2.0;
            for i in 0..n {
                grad[i] -= c / v[i];
                hess[(i, i)] += c / (v[i] * v[i]);
                for j in 0..n {
                    if i != j {
                        let (a, b) = (v[i] * v[i], v[j] * v[j]);
                        let d = a - b;
                        grad[i] -= 2.0 * v[i] / d;
                        hess[(i, i)] += 2.0 * (a + b) / (d * d);
                        hess[(i, j)] = -4.0 * v[i] * v[j] / (d * d);
                    }
                }
            }
        }
    }
    Ok(PotentialEval { value: potential_value(cfg, v), gradient: grad, hessian: hess })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn initial_guess(cfg: &RootSystemConfig) -> Vec<f64> {
    let n = cfg.n();
    let gamma = cfg.gamma();
    match cfg.kind() {
        RootKind::A => {
            let raw: Vec<f64> = (0..n).map(|i| i as f64 - (n as f64 - 1.0) / 2.0).collect();
            let r = norm(&raw);
            if r == 0.0 {
                raw
            } else {
                raw.iter().map(|x| x * gamma.sqrt() / r).collect()
            }
        }
        RootKind::B { .. } => (1..=n)
            .map(|i| (2.0 * gamma.sqrt() * i as f64 / n as f64).sqrt())
            .collect(),
    }
}

/// Minimizer of the potential by damped Newton from a default interior start.
pub fn peak_set(cfg: &RootSystemConfig) -> Result<PotentialReport> {
    minimize_from(cfg, initial_guess(cfg))
}

pub fn minimize_from(cfg: &RootSystemConfig, start: Vec<f64>) -> Result<PotentialReport> {
    if !cfg.in_weyl_chamber(&start) {
        return Err(Error::Domain("Newton start must lie inside the chamber".into()));
    }
    let mut v = start;
    for iter in 0..=NEWTON_CAP {
        let eval = potential(cfg, &v)?;
        let gnorm = norm(&eval.gradient);
        if gnorm <= 1e-12 * norm(&v).max(1.0) {
            return Ok(build_report(cfg, v, eval, iter));
        }
        if iter == NEWTON_CAP {
            break;
        }
        let g = DVector::from_vec(eval.gradient.clone());
        let chol = eval
            .hessian
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NoConvergence("Hessian lost positive definiteness".into()))?;
        let d = chol.solve(&(-&g));
        let slope = g.dot(&d);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = v.iter().zip(d.iter()).map(|(x, dx)| x + t * dx).collect();
            if cfg.in_weyl_chamber(&trial) {
                let f = potential_value(cfg, &trial);
                let slack = 8.0 * f64::EPSILON * eval.value.abs().max(1.0);
                if f <= eval.value + 1e-4 * t * slope + slack {
                    v = trial;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(format!(
                "line search stalled at iteration {iter}, gradient norm {gnorm:e}"
            )));
        }
    }
    Err(Error::NoConvergence(format!("Newton did not converge in {NEWTON_CAP} iterations")))
}

fn build_report(cfg: &RootSystemConfig, v: Vec<f64>, eval: PotentialEval, iters: usize) -> PotentialReport {
    let k = cfg.freezing_constant();
    let mut res = BTreeMap::new();
    res.insert("potential_minus_constant".to_string(), (eval.value - k).abs());
    let nsq: f64 = v.iter().map(|x| x * x).sum();
    res.insert("norm_sq_minus_gamma".to_string(), (nsq - cfg.gamma()).abs());
    res.insert("log_discriminant".to_string(), log_discriminant_residual(cfg, &v));
    let eig = SymmetricEigen::new(eval.hessian.clone());
    let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    evals.sort_by(f64::total_cmp);
    PotentialReport {
        gradient_norm: norm(&eval.gradient),
        minimizer: v,
        potential_at_min: eval.value,
        freezing_constant: k,
        identity_residuals: res,
        newton_iterations: iters,
        hessian_eigenvalues: evals,
    }
}

/// Deviation of the discriminant of the peak set from its closed form.
///
/// Type A uses the points directly; type B uses their squares, which are Laguerre
/// zeros with parameter `ν − 1/2`.
pub fn log_discriminant_residual(cfg: &RootSystemConfig, v: &[f64]) -> f64 {
    let n = v.len();
    let pts: Vec<f64> = match cfg.kind() {
        RootKind::A => v.to_vec(),
        RootKind::B { .. } => v.iter().map(|x| x * x).collect(),
    };
    let mut lhs = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            lhs += 2.0 * (pts[j] - pts[i]).abs().ln();
        }
    }
    let rhs = match cfg.kind() {
        RootKind::A => hermite_log_discriminant(n),
        RootKind::B { nu } => laguerre_log_discriminant(n, nu - 0.5),
    };
    (lhs - rhs).abs()
}

/// Closed form of `2 Σ_{i<j} log|h_j − h_i|` over the zeros of `H_n`.
pub fn hermite_log_discriminant(n: usize) -> f64 {
    let nf = n as f64;
    (1..=n).map(|i| i as f64 * (i as f64).ln()).sum::<f64>()
        - nf / 2.0 * (nf - 1.0) * std::f64::consts::LN_2
}

/// Closed form of `2 Σ_{i<j} log|l_j − l_i|` over the zeros of `L_n^(α)`.
pub fn laguerre_log_discriminant(n: usize, alpha: f64) -> f64 {
    (1..=n)
        .map(|i| {
            let f = i as f64;
            (f - 1.0) * (alpha + f).ln() + f * f.ln()
        })
        .sum()
}

/// The auxiliary type-B potential `v²/2 − ½Σ log v_i² − N/2` and its gradient.
pub fn potential_b_tilde(v: &[f64]) -> Result<(f64, Vec<f64>)> {
    if v.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("all coordinates must be positive".into()));
    }
    let n = v.len() as f64;
    let value = v.iter().map(|x| 0.5 * x * x - x.ln()).sum::<f64>() - n / 2.0;
    Ok((value, v.iter().map(|x| x - 1.0 / x).collect()))
}

/// Large-β steady state of the scaled process over the chamber, with the
/// prefactors `N!(β/2π)^{N/2}` (type A) and `N!(2β)^{N/2}` (type B).
///
/// These prefactors do not give unit mass: as β grows the log-ratio to
/// [`exact_steady_logdensity`] tends to `½ log N!` for type A and
/// `½ log(2^N N! π^N)` for type B. Use the exact form when a probability
/// density is needed; the two differ only by a constant, so both are
/// stationary for the forward equation.
pub fn steady_state_logdensity(cfg: &RootSystemConfig, v: &[f64]) -> f64 {
    let f = potential_value(cfg, v);
    if !f.is_finite() {
        return f64::NEG_INFINITY;
    }
    let (n, beta) = (cfg.n() as f64, cfg.beta());
    let lf = cfg.log_weyl_order() - if cfg.is_type_b() { n * std::f64::consts::LN_2 } else { 0.0 };
    let pref = match cfg.kind() {
        RootKind::A => lf + n / 2.0 * (beta / (2.0 * std::f64::consts::PI)).ln(),
        RootKind::B { .. } => lf + n / 2.0 * (2.0 * beta).ln(),
    };
    pref - beta * (f - cfg.freezing_constant())
}

/// Exactly normalized steady state over the chamber, `|W| e^{−βF} / z`.
pub fn exact_steady_logdensity(cfg: &RootSystemConfig, v: &[f64]) -> f64 {
    let f = potential_value(cfg, v);
    if !f.is_finite() {
        return f64::NEG_INFINITY;
    }
    let (n, beta) = (cfg.n() as f64, cfg.beta());
    cfg.log_weyl_order() + (n + beta * cfg.gamma()) / 2.0 * beta.ln() - cfg.log_selberg_const()
        - beta * f
}

/// Gaussian mixture around the reflected peak sets, normalized over R^N.
#[derive(Clone, Debug)]
pub struct GaussianSteadyApprox {
    cfg: RootSystemConfig,
    peak: Vec<f64>,
    hessian: DMatrix<f64>,
    log_prefactor: f64,
}

impl GaussianSteadyApprox {
    pub fn new(cfg: &RootSystemConfig) -> Result<Self> {
        let cap = if cfg.is_type_b() { 6 } else { 8 };
        if cfg.n() > cap {
            return Err(Error::InvalidParameter(format!(
                "group sum limited to N <= {cap} for this type"
            )));
        }
        let report = peak_set(cfg)?;
        let eval = potential(cfg, &report.minimizer)?;
        let log_det: f64 = report.hessian_eigenvalues.iter().map(|l| l.ln()).sum();
        let n = cfg.n() as f64;
        let log_prefactor = n / 2.0 * cfg.beta().ln() + 0.5 * log_det
            - n / 2.0 * (2.0 * std::f64::consts::PI).ln()
            - cfg.log_weyl_order();
        Ok(Self { cfg: *cfg, peak: report.minimizer, hessian: eval.hessian, log_prefactor })
    }

    pub fn density(&self, v: &[f64]) -> f64 {
        let beta = self.cfg.beta();
        let s = DVector::from_column_slice(&self.peak);
        let total: f64 = self
            .cfg
            .weyl_orbit(v)
            .into_iter()
            .map(|rv| {
                let d = DVector::from_vec(rv) - &s;
                (-0.5 * beta * d.dot(&(&self.hessian * &d))).exp()
            })
            .sum();
        self.log_prefactor.exp() * total
    }

    pub fn peak(&self) -> &[f64] {
        &self.peak
    }
}

pub fn gaussian_steady_approx(cfg: &RootSystemConfig, v: &[f64]) -> Result<f64> {
    Ok(GaussianSteadyApprox::new(cfg)?.density(v))
}

/// Right-hand side of the scaled forward equation for a stationary density.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FkeResidual {
    /// Right-hand side divided by `f(v)`.
    pub residual: f64,
    /// Sum of the magnitudes of the individual terms, also divided by `f(v)`.
    pub scale: f64,
}

impl FkeResidual {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale
    }
}

/// Default finite-difference step for [`fke_residual`].
pub fn default_fke_step(v: &[f64]) -> f64 {
    1e-4 * norm(v).max(1.0)
}

/// Evaluates, by central differences,
/// `(1/β)Δf − Σ_α κ[α·∇f/(α·v) − (α²/2)(f + f∘σ_α)/(α·v)²] + v·∇f + N f`
/// for the density `exp(logdensity)`; zero for a stationary density.
pub fn fke_residual(
    cfg: &RootSystemConfig,
    logdensity: impl Fn(&[f64]) -> f64,
    v: &[f64],
    h: f64,
) -> Result<FkeResidual> {
    let n = cfg.n();
    if v.len() != n {
        return Err(Error::InvalidParameter(format!("expected {n} coordinates")));
    }
    if cfg.wall_distance(v) <= 2.0 * h {
        return Err(Error::Domain(format!("{v:?} is within 2h of a chamber wall")));
    }
    let l0 = logdensity(v);
    let f = |x: &[f64]| (logdensity(x) - l0).exp();
    let mut grad = vec![0.0; n];
    let mut lap = 0.0;
    for i in 0..n {
        let mut xp = v.to_vec();
        let mut xm = v.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        grad[i] = (fp - fm) / (2.0 * h);
        lap += (fp - 2.0 + fm) / (h * h);
    }
    let beta = cfg.beta();
    let mut terms = vec![lap / beta];
    for root in cfg.positive_roots() {
        let av = root.dot(v);
        let a_grad = root.dot(&grad);
        let reflected = f(&root.reflect(v));
        terms.push(-root.kappa * a_grad / av);
        terms.push(root.kappa * root.norm_sq() / 2.0 * (1.0 + reflected) / (av * av));
    }
    terms.push(v.iter().zip(&grad).map(|(a, b)| a * b).sum());
    terms.push(n as f64);
    Ok(FkeResidual {
        residual: terms.iter().sum(),
        scale: terms.iter().map(|t| t.abs()).sum(),
    })
}

/// `|‖∇F‖² − (v² − 2γ + Σ_α α²κ²/(α·v)²)|`, the right side by root enumeration.
pub fn cm_gradient_identity_residual(cfg: &RootSystemConfig, v: &[f64]) -> Result<f64> {
    let g = potential(cfg, v)?.gradient;
    let lhs: f64 = g.iter().map(|x| x * x).sum();
    let mut rhs = v.iter().map(|x| x * x).sum::<f64>() - 2.0 * cfg.gamma();
    for root in cfg.positive_roots() {
        let av = root.dot(v);
        rhs += root.norm_sq() * root.kappa * root.kappa / (av * av);
    }
    Ok((lhs - rhs).abs())
}
