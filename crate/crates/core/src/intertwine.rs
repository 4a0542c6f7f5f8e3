//! Intertwining operators on symmetric polynomials, generalized hypergeometric
//! series of two vector arguments and the generalized Bessel kernels built from
//! them, together with frozen-kernel approximations and the radial transition
//! density.
//!
//! Conventions: the Jack parameter is `α = 2/β`; type-B operators act on
//! polynomials in the squared variables `(x)² = (x_1², …, x_N²)`; every kernel
//! is the Weyl-group symmetrization `Σ_ρ V e^{ρx·y}`, so it carries the factor
//! `|W|` at the origin.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{next_permutation, RootKind, RootSystemConfig};
use crate::symfunc::{
    factorial, gen_pochhammer, hook_c, hook_c_prime, jack_expansion, multinomial_m, partitions_of,
    Basis, Partition, SymPoly,
};

/// Default truncation degree of the hypergeometric series.
pub const DEFAULT_MAX_DEGREE: usize = 30;
/// A series whose trailing shells exceed this fraction of the sum is flagged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-8;

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("beta must be positive and finite, got {beta}")))
    }
}

fn check_length(lambda: &Partition, n_vars: usize) -> Result<()> {
    if lambda.len() > n_vars {
        Err(Error::InvalidParameter(format!("{lambda} has more parts than {n_vars} variables")))
    } else {
        Ok(())
    }
}

/// `c_τ(2/β) / (c'_τ(2/β) (βN/2)_τ)`, the factor that filters all but one-row
/// partitions as `β → ∞`. Computed cell by cell so it neither overflows nor
/// underflows at large `β`.
pub fn filter_product(tau: &Partition, beta: f64, n_vars: usize) -> f64 {
    let conj = tau.conjugate();
    let mut prod = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        for j in 0..ti {
            let arm = (ti - j) as f64;
            let leg = (conj.part(j) - i) as f64;
            let num = arm - 1.0 + beta * leg / 2.0;
            let den = (beta * (n_vars - i) as f64 / 2.0 + j as f64) * (arm + beta * (leg - 1.0) / 2.0);
            prod *= num / den;
        }
    }
    prod
}

/// Jack-basis expansion `Σ_τ [c_τ/c'_τ] u_{τλ} / ((βN/2)_τ (b)_τ) P_τ`, the
/// common core of both operators; `b` is absent for type A.
fn v_core(lambda: &Partition, n_vars: usize, beta: f64, b: Option<f64>) -> Result<SymPoly> {
    let alpha = 2.0 / beta;
    let mut out = SymPoly::zero(Basis::Jack(alpha), n_vars);
    for tau in partitions_of(lambda.weight(), n_vars) {
        if !lambda.dominance_leq(&tau) {
            continue;
        }
        let u = jack_expansion(&tau, alpha, n_vars)?
            .into_iter()
            .find(|(mu, _)| mu == lambda)
            .map_or(0.0, |(_, u)| u);
        if u == 0.0 {
            continue;
        }
        let mut coeff = hook_c(&tau, alpha) / hook_c_prime(&tau, alpha) * u
            / gen_pochhammer(beta * n_vars as f64 / 2.0, &tau, alpha)?;
        if let Some(b) = b {
            coeff /= gen_pochhammer(b, &tau, alpha)?;
        }
        out.add_term(tau, coeff);
    }
    Ok(out)
}

/// `V_A m_λ` in the Jack basis `P^(2/β)`.
pub fn v_a_on_monomial(lambda: &Partition, n_vars: usize, beta: f64) -> Result<SymPoly> {
    check_beta(beta)?;
    check_length(lambda, n_vars)?;
    let pre = lambda.factorial() * multinomial_m(lambda, n_vars) as f64;
    Ok(v_core(lambda, n_vars, beta, None)?.scaled(pre))
}

/// Lower parameter `β(ν+N−1/2)/2 + 1/2` of the type-B series.
pub fn type_b_parameter(n_vars: usize, beta: f64, nu: f64) -> f64 {
    beta * (nu + n_vars as f64 - 0.5) / 2.0 + 0.5
}

/// `V_B m_λ[(x)²]` in the Jack basis `P^(2/β)[(x)²]`.
pub fn v_b_on_monomial(lambda: &Partition, n_vars: usize, beta: f64, nu: f64) -> Result<SymPoly> {
    RootSystemConfig::type_b(n_vars.max(1), beta, nu)?;
    check_length(lambda, n_vars)?;
    let k = lambda.weight() as i32;
    let pre = lambda.double_factorial_product() * multinomial_m(lambda, n_vars) as f64 / 4f64.powi(k);
    let b = type_b_parameter(n_vars, beta, nu);
    Ok(v_core(lambda, n_vars, beta, Some(b))?.scaled(pre))
}

/// `(Σ x_j)^k = Σ_{|τ|=k} (k!/τ!) m_τ`.
pub fn power_of_sum(k: usize, n_vars: usize) -> SymPoly {
    let mut out = SymPoly::zero(Basis::Monomial, n_vars);
    for tau in partitions_of(k, n_vars) {
        let c = factorial(k) / tau.factorial();
        out.add_term(tau, c);
    }
    out
}

/// `lim_{β→∞} V_A m_λ = (M(λ,N)/N^|λ|) (Σ x_j)^|λ|`, monomial basis.
pub fn v_a_limit(lambda: &Partition, n_vars: usize) -> Result<SymPoly> {
    check_length(lambda, n_vars)?;
    let k = lambda.weight();
    let pre = multinomial_m(lambda, n_vars) as f64 / (n_vars as f64).powi(k as i32);
    Ok(power_of_sum(k, n_vars).scaled(pre))
}

/// `lim_{β→∞} V_B β^|λ| m_λ[(x)²]`, monomial basis in the squared variables.
pub fn v_b_limit_beta(lambda: &Partition, n_vars: usize, nu: f64) -> Result<SymPoly> {
    check_length(lambda, n_vars)?;
    if !(nu >= 0.0) {
        return Err(Error::InvalidParameter(format!("nu must be nonnegative, got {nu}")));
    }
    let k = lambda.weight() as i32;
    let n = n_vars as f64;
    let pre = lambda.double_factorial_product() * multinomial_m(lambda, n_vars) as f64
        / (2f64.powi(k) * lambda.factorial() * n.powi(k) * (nu + n - 0.5).powi(k));
    Ok(power_of_sum(lambda.weight(), n_vars).scaled(pre))
}

/// `lim_{ν→∞} V_B ν^|λ| m_λ[(x)²] = ((2λ)!/λ!) V_A m_λ(u)` with `u = (x)²/(2β)`,
/// monomial basis in the squared variables.
pub fn v_b_limit_nu(lambda: &Partition, n_vars: usize, beta: f64) -> Result<SymPoly> {
    let va = v_a_on_monomial(lambda, n_vars, beta)?.to_monomial()?;
    let k = lambda.weight() as i32;
    Ok(va.scaled(lambda.double_factorial_product() / lambda.factorial() / (2.0 * beta).powi(k)))
}

/// `V_β` restricted to linear polynomials: `V(a·x) = (M a)·x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearIntertwiner {
    pub matrix: DMatrix<f64>,
    /// Dimension of the span of the roots.
    pub rank: usize,
}

impl LinearIntertwiner {
    pub fn apply(&self, a: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(a)).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `M_β = (1 + βγ/d_R)⁻¹ [I + (βγ/d_R) P]`, with `P` projecting onto the
/// complement of the root span.
pub fn linear_intertwiner(cfg: &RootSystemConfig) -> LinearIntertwiner {
    let n = cfg.n();
    let rank = cfg.rank();
    let mut m = DMatrix::<f64>::identity(n, n);
    if rank == 0 {
        return LinearIntertwiner { matrix: m, rank };
    }
    let s = cfg.beta() * cfg.gamma() / rank as f64;
    if let RootKind::A = cfg.kind() {
        // the complement is spanned by (1,…,1)/√N
        m += DMatrix::from_element(n, n, s / n as f64);
    }
    LinearIntertwiner { matrix: m / (1.0 + s), rank }
}

/// Parameters of `₀F₀^(α)(x,y)` (no `b`) or `₀F₁^(α)(b; x,y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperSeriesParams {
    pub alpha: f64,
    pub b: Option<f64>,
    pub n_vars: usize,
    pub max_degree: usize,
}

/// Value of a truncated series with its truncation diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Largest absolute term sum over the two highest shells.
    pub last_shell: f64,
}

impl SeriesValue {
    pub fn converged(&self) -> bool {
        self.last_shell <= TRUNCATION_TOLERANCE * self.value.abs()
    }
}

#[derive(Clone, Debug)]
struct Monomial {
    /// Distinct permutations of the padded exponent vector.
    exponents: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
struct Shell {
    monomials: Vec<Monomial>,
    /// Series weight and sparse Jack coefficients `(monomial index, u)` per τ.
    terms: Vec<(f64, Vec<(usize, f64)>)>,
}

/// Jack values `P_τ(x)` for every τ of a precomputed series, grouped by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct JackValues(Vec<Vec<f64>>);

/// Truncated series with all Jack data precomputed once, so repeated
/// evaluations only cost monomial evaluations and dot products.
#[derive(Clone, Debug)]
pub struct HyperSeries {
    params: HyperSeriesParams,
    shells: Vec<Shell>,
}

impl HyperSeries {
    pub fn new(params: HyperSeriesParams) -> Result<Self> {
        let HyperSeriesParams { alpha, b, n_vars, max_degree } = params;
        if !(alpha > 0.0 && alpha.is_finite()) || n_vars == 0 {
            return Err(Error::InvalidParameter("need alpha > 0 and at least one variable".into()));
        }
        let mut shells = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let parts = partitions_of(d, n_vars);
            let index: HashMap<Partition, usize> =
                parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
            let monomials = parts
                .iter()
                .map(|mu| {
                    let mut e = mu.padded(n_vars);
                    e.sort_unstable();
                    let mut exponents = vec![e.clone()];
                    while next_permutation(&mut e) {
                        exponents.push(e.clone());
                    }
                    Monomial { exponents }
                })
                .collect();
            let mut terms = Vec::with_capacity(parts.len());
            for tau in &parts {
                let w = series_weight(tau, alpha, n_vars, b)?;
                let u = jack_expansion(tau, alpha, n_vars)?
                    .into_iter()
                    .map(|(mu, u)| (index[&mu], u))
                    .collect();
                terms.push((w, u));
            }
            shells.push(Shell { monomials, terms });
        }
        Ok(Self { params, shells })
    }

    pub fn params(&self) -> &HyperSeriesParams {
        &self.params
    }

    /// `P_τ(x)` for every τ in the series.
    pub fn jack_values(&self, x: &[f64]) -> Result<JackValues> {
        if x.len() != self.params.n_vars {
            return Err(Error::InvalidParameter(format!(
                "expected {} variables, got {}",
                self.params.n_vars,
                x.len()
            )));
        }
        let d = self.params.max_degree;
        let powers: Vec<Vec<f64>> = x
            .iter()
            .map(|&xi| {
                let mut p = Vec::with_capacity(d + 1);
                let mut acc = 1.0;
                for _ in 0..=d {
                    p.push(acc);
                    acc *= xi;
                }
                p
            })
            .collect();
        let shells = self
            .shells
            .iter()
            .map(|shell| {
                let m: Vec<f64> = shell
                    .monomials
                    .iter()
                    .map(|mono| {
                        mono.exponents
                            .iter()
                            .map(|e| e.iter().enumerate().map(|(i, &k)| powers[i][k]).product::<f64>())
                            .sum()
                    })
                    .collect();
                shell.terms.iter().map(|(_, u)| u.iter().map(|&(k, c)| c * m[k]).sum()).collect()
            })
            .collect();
        Ok(JackValues(shells))
    }

    /// Series value from precomputed Jack values of both arguments.
    pub fn combine(&self, px: &JackValues, py: &JackValues) -> SeriesValue {
        let mut value = 0.0;
        let mut shell_abs = Vec::with_capacity(self.shells.len());
        for ((shell, a), b) in self.shells.iter().zip(&px.0).zip(&py.0) {
            let mut abs = 0.0;
            for ((w, _), (pa, pb)) in shell.terms.iter().zip(a.iter().zip(b)) {
                let t = w * pa * pb;
                value += t;
                abs += t.abs();
            }
            shell_abs.push(abs);
        }
        let last_shell = shell_abs.iter().rev().take(2).fold(0.0, |m: f64, v| m.max(*v));
        SeriesValue { value, last_shell }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<SeriesValue> {
        Ok(self.combine(&self.jack_values(x)?, &self.jack_values(y)?))
    }
}

/// `c_τ / (c'_τ (N/α)_τ (b)_τ)`, one cell at a time.
fn series_weight(tau: &Partition, alpha: f64, n_vars: usize, b: Option<f64>) -> Result<f64> {
    let conj = tau.conjugate();
    let mut w = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        for j in 0..ti {
            let leg = (conj.part(j) - i) as f64;
            let c = alpha * (ti - j - 1) as f64 + leg;
            let cp = alpha * (ti - j) as f64 + leg - 1.0;
            let shift = j as f64 - i as f64 / alpha;
            let mut den = cp * (n_vars as f64 / alpha + shift);
            if let Some(b) = b {
                let f = b + shift;
                if f == 0.0 {
                    return Err(Error::Pole(format!("(b)_τ vanishes for b={b}, τ={tau}, α={alpha}")));
                }
                den *= f;
            }
            w *= c / den;
        }
    }
    Ok(w)
}

/// One-shot evaluation of the truncated series.
pub fn hyper_series(params: HyperSeriesParams, x: &[f64], y: &[f64]) -> Result<SeriesValue> {
    HyperSeries::new(params)?.eval(x, y)
}

/// The generalized Bessel kernel `Σ_ρ V e^{ρx·y}`:
/// `N! ₀F₀^(2/β)(x,y)` for type A and `2^N N! ₀F₁^(2/β)(b; (x)²/2, (y)²/2)` for type B.
#[derive(Clone, Debug)]
pub struct BesselKernel {
    cfg: RootSystemConfig,
    series: HyperSeries,
}

impl BesselKernel {
    pub fn new(cfg: &RootSystemConfig, max_degree: usize) -> Result<Self> {
        let n = cfg.n();
        let b = match cfg.kind() {
            RootKind::A => None,
            RootKind::B { nu } => Some(type_b_parameter(n, cfg.beta(), nu)),
        };
        let series = HyperSeries::new(HyperSeriesParams { alpha: 2.0 / cfg.beta(), b, n_vars: n, max_degree })?;
        Ok(Self { cfg: *cfg, series })
    }

    pub fn config(&self) -> &RootSystemConfig {
        &self.cfg
    }

    /// Jack values of one kernel argument, with the type-B change of variables applied.
    pub fn argument_values(&self, x: &[f64]) -> Result<JackValues> {
        if self.cfg.is_type_b() {
            let sq: Vec<f64> = x.iter().map(|v| v * v / 2.0).collect();
            self.series.jack_values(&sq)
        } else {
            self.series.jack_values(x)
        }
    }

    pub fn combine(&self, px: &JackValues, py: &JackValues) -> SeriesValue {
        let s = self.series.combine(px, py);
        let w = self.cfg.weyl_order();
        SeriesValue { value: w * s.value, last_shell: w * s.last_shell }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<SeriesValue> {
        Ok(self.combine(&self.argument_values(x)?, &self.argument_values(y)?))
    }
}

pub fn bessel_kernel(cfg: &RootSystemConfig, x: &[f64], y: &[f64], max_degree: usize) -> Result<SeriesValue> {
    BesselKernel::new(cfg, max_degree)?.eval(x, y)
}

/// How the frozen kernel treats the finite-β correction of `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpsilonMode {
    ExactLimit,
    Corrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrozenKernelParams {
    pub cfg: RootSystemConfig,
    pub epsilon_beta_mode: EpsilonMode,
}

/// `ε_β = −γ/2 + √(γ²/4 + x²y²/β)`: about `x²y²/(βγ)` for small arguments and
/// `xy/√β` for large ones.
pub fn epsilon_beta(gamma: f64, x2y2: f64, beta: f64) -> f64 {
    let g = gamma / 2.0;
    let r = x2y2 / beta;
    // rationalized to stay accurate when r ≪ γ²
    r / (g + (g * g + r).sqrt())
}

/// Log of the large-β approximation to `Σ_ρ V e^{√β ρx·y}`:
/// `log|W| + √β x_⊥·y_⊥ + |x_∥|²|y_∥|² / (2(γ+ε))`, where `∥` is the
/// component in the span of the roots and `⊥` its complement.
pub fn frozen_log_kernel(params: &FrozenKernelParams, x: &[f64], y: &[f64]) -> Result<f64> {
    let cfg = &params.cfg;
    let n = cfg.n();
    if x.len() != n || y.len() != n {
        return Err(Error::InvalidParameter(format!("expected {n} coordinates")));
    }
    let beta = cfg.beta();
    let (perp, x2, y2) = match cfg.kind() {
        RootKind::B { .. } => (0.0, norm_sq(x), norm_sq(y)),
        RootKind::A => {
            let sx: f64 = x.iter().sum();
            let sy: f64 = y.iter().sum();
            let nf = n as f64;
            (sx * sy / nf, norm_sq(x) - sx * sx / nf, norm_sq(y) - sy * sy / nf)
        }
    };
    let gamma = cfg.gamma();
    let inner = if gamma == 0.0 {
        0.0
    } else {
        let eps = match params.epsilon_beta_mode {
            EpsilonMode::ExactLimit => 0.0,
            EpsilonMode::Corrected => epsilon_beta(gamma, x2 * y2, beta),
        };
        x2 * y2 / (2.0 * (gamma + eps))
    };
    Ok(cfg.log_weyl_order() + beta.sqrt() * perp + inner)
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Log transition density with its truncation diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionLogDensity {
    pub value: f64,
    /// Trailing-shell magnitude relative to the kernel value.
    pub relative_last_shell: f64,
    /// False when the kernel series did not converge to the stated tolerance.
    pub converged: bool,
}

/// Log density at `y` at time `t` for the process started at `x`, both in the
/// closed chamber.
pub fn radial_transition_logdensity(
    cfg: &RootSystemConfig,
    t: f64,
    y: &[f64],
    x: &[f64],
    max_degree: usize,
) -> Result<TransitionLogDensity> {
    BesselKernel::new(cfg, max_degree)?.transition_logdensity(t, y, x)
}

impl BesselKernel {
    /// As [`radial_transition_logdensity`], reusing this kernel's series.
    pub fn transition_logdensity(&self, t: f64, y: &[f64], x: &[f64]) -> Result<TransitionLogDensity> {
        let cfg = &self.cfg;
        let n = cfg.n();
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        if x.len() != n || y.len() != n {
            return Err(Error::InvalidParameter(format!("expected {n} coordinates")));
        }
        let st = t.sqrt();
        let ys: Vec<f64> = y.iter().map(|v| v / st).collect();
        let xs: Vec<f64> = x.iter().map(|v| v / st).collect();
        let k = self.eval(&xs, &ys)?;
        if !(k.value > 0.0) {
            return Err(Error::NoConvergence(format!("kernel series gave {}", k.value)));
        }
        let value = cfg.log_weight(&ys) - (norm_sq(y) + norm_sq(x)) / (2.0 * t) - cfg.log_selberg_const()
            - n as f64 / 2.0 * t.ln()
            + k.value.ln();
        let relative_last_shell = k.last_shell / k.value;
        Ok(TransitionLogDensity {
            value,
            relative_last_shell,
            converged: relative_last_shell <= TRUNCATION_TOLERANCE,
        })
    }
}

/// Result of the Monte Carlo check of the Gaussian reproducing identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub lhs_estimate: f64,
    pub rhs_value: f64,
    pub std_error: f64,
    /// Exact acceptance probability of the rejection sampler.
    pub acceptance: f64,
    /// Number of samples whose kernel series missed the truncation tolerance.
    pub unconverged: usize,
}

impl KernelCheck {
    pub fn z_score(&self) -> f64 {
        let d = self.lhs_estimate - self.rhs_value;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d.abs() <= 1e-12 * self.rhs_value.abs() {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Rejection sampler for the density `∝ e^{−|x|²/2} w(x)` on R^N using the
/// isotropic Gaussian envelope with matched second moment.
#[derive(Clone, Debug)]
pub struct WeightSampler {
    cfg: RootSystemConfig,
    sigma: f64,
    /// `log sup (f/g)` for the unnormalized target `f` and envelope `g`.
    log_bound: f64,
    acceptance: f64,
}

impl WeightSampler {
    pub fn new(cfg: &RootSystemConfig) -> Self {
        let n = cfg.n() as f64;
        let gamma = cfg.gamma();
        let d = cfg.beta() * gamma;
        let s2 = (n + d) / n;
        // w is homogeneous of degree d and maximal on the unit sphere at the
        // normalized peak set, where log w = β(γ/2 − K) − (d/2) log γ
        let log_bound = if d == 0.0 {
            0.0
        } else {
            let on_sphere = cfg.beta() * (gamma / 2.0 - cfg.freezing_constant()) - d / 2.0 * gamma.ln();
            on_sphere + d / 2.0 * (n + d).ln() - d / 2.0
        };
        let log_acc = cfg.log_selberg_const() - log_bound - n / 2.0 * (2.0 * std::f64::consts::PI * s2).ln();
        Self { cfg: *cfg, sigma: s2.sqrt(), log_bound, acceptance: log_acc.exp() }
    }

    pub fn acceptance(&self) -> f64 {
        self.acceptance
    }

    /// One exact draw, projected onto the closed chamber.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.cfg.n();
        let s2 = self.sigma * self.sigma;
        let mut x = vec![0.0; n];
        loop {
            for v in x.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *v = self.sigma * z;
            }
            let r2 = norm_sq(&x);
            let log_ratio = self.cfg.log_weight(&x) - r2 / 2.0 + r2 / (2.0 * s2) - self.log_bound;
            let u: f64 = rand::Rng::random(rng);
            if u.ln() < log_ratio {
                if self.cfg.is_type_b() {
                    x.iter_mut().for_each(|v| *v = v.abs());
                }
                x.sort_by(f64::total_cmp);
                return x;
            }
        }
    }
}

/// Monte Carlo check of `(1/c)∫ K(x,y)K(x,z) e^{−|x|²/2} w(x) dx = |W| e^{(y²+z²)/2} K(y,z)`
/// for the symmetrized kernel `K`.
pub fn kernel_reproducing_check(
    cfg: &RootSystemConfig,
    y: &[f64],
    z: &[f64],
    n_samples: usize,
    max_degree: usize,
    seed: u64,
) -> Result<KernelCheck> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let sampler = WeightSampler::new(cfg);
    if sampler.acceptance() < 1e-3 {
        return Err(Error::LowAcceptance(format!(
            "envelope acceptance {:.2e} is below 1e-3; reduce N or beta",
            sampler.acceptance()
        )));
    }
    let kernel = BesselKernel::new(cfg, max_degree)?;
    let py = kernel.argument_values(y)?;
    let pz = kernel.argument_values(z)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unconverged = 0;
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 0..n_samples {
        let x = sampler.sample(&mut rng);
        let px = kernel.argument_values(&x)?;
        let ky = kernel.combine(&px, &py);
        let kz = kernel.combine(&px, &pz);
        unconverged += usize::from(!ky.converged()) + usize::from(!kz.converged());
        // Welford update
        let v = ky.value * kz.value;
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (n_samples - 1) as f64;
    let rhs = cfg.weyl_order() * ((norm_sq(y) + norm_sq(z)) / 2.0).exp() * kernel.eval(y, z)?.value;
    Ok(KernelCheck {
        lhs_estimate: mean,
        rhs_value: rhs,
        std_error: (var / n_samples as f64).sqrt(),
        acceptance: sampler.acceptance(),
        unconverged,
    })
}
