//! Hermite and associated Laguerre polynomials, their zeros, and the exact
//! one-point densities of the β=2 processes started at the origin.
//!
//! Zeros and densities use orthonormally rescaled recurrences so that degrees
//! in the hundreds neither overflow nor lose the Christoffel–Darboux bracket
//! to cancellation.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const NEWTON_CAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PolyKind {
    Hermite,
    Laguerre,
}

/// Ascending zeros of a Hermite or Laguerre polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyZeros {
    pub kind: PolyKind,
    pub n: usize,
    /// Laguerre parameter; zero for Hermite.
    pub alpha: f64,
    pub zeros: Vec<f64>,
}

/// Physicists' Hermite polynomial `H_n(x)` and its derivative.
pub fn hermite_eval(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, 2.0 * n as f64 * prev)
}

fn laguerre_value(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Laguerre polynomial `L_n^(α)(x)` and its derivative.
///
/// The derivative uses `d/dx L_n^(α) = -L_{n-1}^(α+1)`, which is exact at `x = 0`.
pub fn laguerre_eval(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let d = if n == 0 { 0.0 } else { -laguerre_value(n - 1, alpha + 1.0, x) };
    (laguerre_value(n, alpha, x), d)
}

/// Orthonormal Hermite values `p_k` for `k = 0..=n` (weight `e^{-x²}` factored out).
fn hermite_orthonormal(n: usize, x: f64, p0: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(p0);
    if n >= 1 {
        p.push(std::f64::consts::SQRT_2 * x * p0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * p[k] - (kf / (kf + 1.0)).sqrt() * p[k - 1];
        p.push(next);
    }
    p
}

/// Normalized Laguerre values `L_k √(k!/Γ(k+α+1))` times `p0`, for `k = 0..=n`.
fn laguerre_orthonormal(n: usize, alpha: f64, x: f64, p0: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(p0);
    if n >= 1 {
        p.push((1.0 + alpha - x) / (1.0 + alpha).sqrt() * p0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * p[k] - (kf * (kf + alpha)).sqrt() * p[k - 1])
            / ((kf + 1.0) * (kf + alpha + 1.0)).sqrt();
        p.push(next);
    }
    p
}

/// Newton correction `P/P'` for the degree-`n` Hermite polynomial.
fn hermite_step(n: usize, x: f64) -> f64 {
    let p = hermite_orthonormal(n, x, 1.0);
    p[n] / ((2.0 * n as f64).sqrt() * p[n - 1])
}

/// Newton correction `P/P'` for the degree-`n` Laguerre polynomial.
fn laguerre_step(n: usize, alpha: f64, x: f64) -> f64 {
    let p = laguerre_orthonormal(n, alpha, x, 1.0);
    let nf = n as f64;
    let dp = nf * p[n] - (nf * (nf + alpha)).sqrt() * p[n - 1];
    if x == 0.0 {
        // fall back to the exact derivative at the origin
        let (v, d) = laguerre_eval(n, alpha, x);
        return v / d;
    }
    x * p[n] / dp
}

fn newton(mut z: f64, step: impl Fn(f64) -> f64) -> Option<f64> {
    for _ in 0..NEWTON_CAP {
        let dz = step(z);
        if !dz.is_finite() {
            return None;
        }
        z -= dz;
        if dz.abs() <= 1e-15 * z.abs().max(1.0) {
            return Some(z);
        }
    }
    None
}

fn certified(zeros: &[f64], n: usize, step: &impl Fn(f64) -> f64) -> bool {
    zeros.len() == n
        && zeros.iter().all(|z| z.is_finite())
        && zeros.windows(2).all(|w| w[0] < w[1])
        && zeros.iter().all(|&z| step(z).abs() <= 1e-10 * z.abs().max(1.0))
}

/// Roots inside each bracket by safeguarded Newton (bisection whenever Newton leaves it).
fn bracketed_roots(
    brackets: &[(f64, f64)],
    value: &impl Fn(f64) -> f64,
    step: &impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(brackets.len());
    for &(mut lo, mut hi) in brackets {
        let mut flo = value(lo);
        let mut z = 0.5 * (lo + hi);
        let mut done = false;
        for _ in 0..400 {
            let fz = value(z);
            if fz == 0.0 {
                done = true;
                break;
            }
            if (fz > 0.0) == (flo > 0.0) {
                lo = z;
                flo = fz;
            } else {
                hi = z;
            }
            let cand = z - step(z);
            z = if cand.is_finite() && cand > lo && cand < hi { cand } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-15 * z.abs().max(1.0) || step(z).abs() <= 1e-15 * z.abs().max(1.0) {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence("bracketed root search".into()));
        }
        out.push(z);
    }
    Ok(out)
}

fn interlacing_brackets(inner: &[f64], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![lo];
    pts.extend_from_slice(inner);
    pts.push(hi);
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Zeros of `H_n` in ascending order.
pub fn hermite_zeros(n: usize) -> Result<PolyZeros> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let step = |z: f64| hermite_step(n, z);
    let zeros = hermite_newton(n).filter(|z| certified(z, n, &step));
    let zeros = match zeros {
        Some(z) => z,
        None => hermite_bracketed(n)?,
    };
    Ok(PolyZeros { kind: PolyKind::Hermite, n, alpha: 0.0, zeros })
}

/// Newton from the classical asymptotic guesses for the largest zeros, mirrored by symmetry.
fn hermite_newton(n: usize) -> Option<Vec<f64>> {
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut pos: Vec<f64> = Vec::with_capacity(m);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * pos[0],
            3 => 1.91 * z - 0.91 * pos[1],
            _ => 2.0 * z - pos[i - 2],
        };
        z = newton(z, |x| hermite_step(n, x))?;
        pos.push(z);
    }
    if n % 2 == 1 {
        *pos.last_mut()? = 0.0;
    }
    let mut zeros: Vec<f64> = pos.iter().map(|v| -v).collect();
    let start = if n % 2 == 1 { m - 1 } else { m };
    zeros.extend(pos[..start].iter().rev());
    zeros.sort_by(f64::total_cmp);
    Some(zeros)
}

fn hermite_bracketed(n: usize) -> Result<Vec<f64>> {
    let mut zeros: Vec<f64> = Vec::new();
    for k in 1..=n {
        let bound = (2.0 * k as f64 + 1.0).sqrt() + 1.0;
        let br = interlacing_brackets(&zeros, -bound, bound);
        let value = |x: f64| hermite_orthonormal(k, x, 1.0)[k];
        zeros = bracketed_roots(&br, &value, &|x| hermite_step(k, x))?;
    }
    Ok(zeros)
}

/// Zeros of `L_n^(α)` in ascending order.
pub fn laguerre_zeros(n: usize, alpha: f64) -> Result<PolyZeros> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must exceed -1, got {alpha}")));
    }
    let step = |z: f64| laguerre_step(n, alpha, z);
    let zeros = laguerre_newton(n, alpha)
        .filter(|z| certified(z, n, &step) && z[0] > 0.0);
    let zeros = match zeros {
        Some(z) => z,
        None => laguerre_bracketed(n, alpha)?,
    };
    Ok(PolyZeros { kind: PolyKind::Laguerre, n, alpha, zeros })
}

fn laguerre_newton(n: usize, alpha: f64) -> Option<Vec<f64>> {
    let nf = n as f64;
    let mut zeros: Vec<f64> = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha),
            1 => z + (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                    * (z - zeros[i - 2])
                    / (1.0 + 0.3 * alpha)
            }
        };
        z = newton(z, |x| laguerre_step(n, alpha, x))?;
        zeros.push(z);
    }
    Some(zeros)
}

fn laguerre_bracketed(n: usize, alpha: f64) -> Result<Vec<f64>> {
    let mut zeros: Vec<f64> = Vec::new();
    for k in 1..=n {
        let bound = 4.0 * k as f64 + 2.0 * alpha.abs() + 10.0;
        let br = interlacing_brackets(&zeros, 0.0, bound);
        let value = |x: f64| laguerre_orthonormal(k, alpha, x, 1.0)[k];
        zeros = bracketed_roots(&br, &value, &|x| laguerre_step(k, alpha, x))?;
    }
    Ok(zeros)
}

/// One-point density at time `t` of `n` type-A particles started at the origin, β=2.
///
/// Evaluated as `(N/√(2t))[ψ_N² − √((N+1)/N) ψ_{N+1}ψ_{N−1}]` in Hermite functions,
/// which is the Hermite Christoffel–Darboux bracket with the factorials absorbed.
pub fn density_a_exact(n: usize, t: f64, y: f64) -> f64 {
    assert!(n >= 1 && t > 0.0);
    let u = y / (2.0 * t).sqrt();
    let p0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * u * u).exp();
    let psi = hermite_orthonormal(n + 1, u, p0);
    let nf = n as f64;
    let bracket = psi[n] * psi[n] - ((nf + 1.0) / nf).sqrt() * psi[n + 1] * psi[n - 1];
    (nf / (2.0 * t).sqrt() * bracket).max(0.0)
}

/// One-point density at time `t` of `n` type-B particles started at the origin, β=2.
pub fn density_b_exact(n: usize, nu: f64, t: f64, y: f64) -> f64 {
    assert!(n >= 1 && t > 0.0);
    if y <= 0.0 {
        return 0.0;
    }
    let u = y * y / (2.0 * t);
    let p0 = (0.5 * nu * u.ln() - 0.5 * u - 0.5 * ln_gamma(nu + 1.0)).exp();
    let phi = laguerre_orthonormal(n + 1, nu, u, p0);
    let nf = n as f64;
    let bracket = nf * (nf + nu) * phi[n] * phi[n] + (nf * (nf + nu)).sqrt() * phi[n] * phi[n - 1]
        - (nf * (nf + 1.0) * (nf + nu) * (nf + nu + 1.0)).sqrt() * phi[n + 1] * phi[n - 1];
    (2.0 / y * bracket).max(0.0)
}
