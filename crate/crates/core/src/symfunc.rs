//! Partitions and symmetric polynomials in the monomial, elementary, Schur and
//! Jack bases, with the hook products and generalized Pochhammer symbols used
//! by hypergeometric series of two vector arguments.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::next_permutation;

/// Weakly decreasing sequence of positive integers.
///
/// Ordered reverse-lexicographically, so dominance-larger partitions of equal
/// weight always sort first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of positive parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part `i` (zero based), zero past the length.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        Partition((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// `self ≤ other` in dominance order.
    pub fn dominance_leq(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for i in 0..self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// `Π λ_i!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&p| factorial(p)).product()
    }

    /// `Π (2λ_i)!`.
    pub fn double_factorial_product(&self) -> f64 {
        self.0.iter().map(|&p| factorial(2 * p)).product()
    }

    /// Parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<usize> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `self ≤ other` in dominance order.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> bool {
    mu.dominance_leq(lambda)
}

/// All partitions of `weight` with at most `max_len` parts, reverse lexicographic.
pub fn partitions_of(weight: usize, max_len: usize) -> Vec<Partition> {
    fn rec(rem: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rem.min(cap)).rev() {
            cur.push(p);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, weight, max_len, &mut Vec::new(), &mut out);
    out
}

/// Number of distinct permutations of `λ` padded with zeros to `n` entries.
pub fn multinomial_m(lambda: &Partition, n_vars: usize) -> u128 {
    assert!(lambda.len() <= n_vars, "partition longer than the variable count");
    let padded = lambda.padded(n_vars);
    let mut result: u128 = 1;
    let mut placed: u128 = 0;
    let mut i = 0;
    while i < padded.len() {
        let mut j = i;
        while j < padded.len() && padded[j] == padded[i] {
            j += 1;
        }
        // multiply by binomial(placed + run, run), built incrementally to stay exact
        for k in 1..=(j - i) as u128 {
            placed += 1;
            result = result * placed / k;
        }
        i = j;
    }
    result
}

/// Monomial symmetric polynomial: sum over distinct permutations of the exponents.
pub fn monomial_eval(lambda: &Partition, x: &[f64]) -> f64 {
    if lambda.len() > x.len() {
        return 0.0;
    }
    let mut exps = lambda.padded(x.len());
    exps.sort_unstable();
    let mut total = 0.0;
    loop {
        total += exps.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>();
        if !next_permutation(&mut exps) {
            return total;
        }
    }
}

/// Elementary symmetric polynomials `e_0..=e_k` of `x`.
fn elementary_all(k: usize, x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &xi in x {
        for j in (1..=k).rev() {
            e[j] += xi * e[j - 1];
        }
    }
    e
}

pub fn elementary_eval(k: usize, x: &[f64]) -> f64 {
    elementary_all(k, x)[k]
}

/// Complete homogeneous symmetric polynomials `h_0..=h_k`.
fn complete_all(k: usize, x: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &xi in x {
        for j in 1..=k {
            h[j] += xi * h[j - 1];
        }
    }
    h
}

/// Schur polynomial: bialternant for well separated points, Jacobi–Trudi otherwise.
pub fn schur_eval(lambda: &Partition, x: &[f64]) -> f64 {
    let n = x.len();
    if lambda.len() > n {
        return 0.0;
    }
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_gap = min_gap.min((x[i] - x[j]).abs());
        }
    }
    if min_gap > 1e-3 * scale {
        let num = DMatrix::from_fn(n, n, |i, j| x[i].powi((lambda.part(j) + n - 1 - j) as i32));
        let den = DMatrix::from_fn(n, n, |i, j| x[i].powi((n - 1 - j) as i32));
        num.determinant() / den.determinant()
    } else {
        schur_jacobi_trudi(lambda, x)
    }
}

fn schur_jacobi_trudi(lambda: &Partition, x: &[f64]) -> f64 {
    let l = lambda.len();
    if l == 0 {
        return 1.0;
    }
    let h = complete_all(lambda.weight() + l, x);
    let m = DMatrix::from_fn(l, l, |i, j| {
        let k = lambda.part(i) as isize - i as isize + j as isize;
        if k < 0 { 0.0 } else { h[k as usize] }
    });
    m.determinant()
}

/// `c_τ(α)`, the product of upper hook lengths.
pub fn hook_c(tau: &Partition, alpha: f64) -> f64 {
    let conj = tau.conjugate();
    let mut prod = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        for j in 0..ti {
            prod *= alpha * (ti - j - 1) as f64 + (conj.part(j) - i) as f64;
        }
    }
    prod
}

/// `c'_τ(α)`, the product of lower hook lengths.
pub fn hook_c_prime(tau: &Partition, alpha: f64) -> f64 {
    let conj = tau.conjugate();
    let mut prod = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        for j in 0..ti {
            prod *= alpha * (ti - j) as f64 + (conj.part(j) - i - 1) as f64;
        }
    }
    prod
}

/// Generalized Pochhammer symbol `(b)_τ^(α)` as a product of rising factorials.
pub fn gen_pochhammer(b: f64, tau: &Partition, alpha: f64) -> Result<f64> {
    let mut prod = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        let a = b - i as f64 / alpha;
        for k in 0..ti {
            let f = a + k as f64;
            if f == 0.0 {
                return Err(Error::Pole(format!("(b)_τ with b={b}, τ={tau}, α={alpha}")));
            }
            prod *= f;
        }
    }
    Ok(prod)
}

/// Coefficients `u_{λμ}` of `P_λ^(α) = Σ_μ u_{λμ} m_μ`, dominance-largest first.
///
/// Solves the triangular eigen-system of
/// `D = Σ x_i² ∂_i² + (2/α) Σ_{i≠j} x_i²/(x_i − x_j) ∂_i`
/// in the monomial basis. The off-diagonal action only moves weight from a
/// larger to a smaller exponent, hence is strictly dominance-lowering.
pub fn jack_expansion(lambda: &Partition, alpha: f64, n_vars: usize) -> Result<Vec<(Partition, f64)>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("Jack parameter must be positive, got {alpha}")));
    }
    if lambda.len() > n_vars {
        return Err(Error::InvalidParameter(format!("{lambda} has more parts than {n_vars} variables")));
    }
    let below: Vec<Partition> = partitions_of(lambda.weight(), n_vars)
        .into_iter()
        .filter(|mu| mu.dominance_leq(lambda))
        .collect();
    let e_lambda = jack_eigenvalue(lambda, alpha, n_vars);
    let mut coeffs: BTreeMap<Partition, f64> = BTreeMap::new();
    let mut out = Vec::with_capacity(below.len());
    for nu in below {
        let u = if &nu == lambda {
            1.0
        } else {
            let gap = e_lambda - jack_eigenvalue(&nu, alpha, n_vars);
            if gap.abs() <= 1e-12 * e_lambda.abs().max(1.0) {
                return Err(Error::Pole(format!("eigenvalue collision between {lambda} and {nu}")));
            }
            let mut acc = 0.0;
            for (mu, d) in raising_coefficients(&nu, n_vars) {
                if let Some(u_mu) = coeffs.get(&mu) {
                    acc += u_mu * d;
                }
            }
            2.0 / alpha * acc / gap
        };
        coeffs.insert(nu.clone(), u);
        out.push((nu, u));
    }
    Ok(out)
}

/// Eigenvalue of the Jack operator on `P_λ` in `n` variables.
pub fn jack_eigenvalue(lambda: &Partition, alpha: f64, n_vars: usize) -> f64 {
    let mut e = 0.0;
    for (j, &p) in lambda.parts().iter().enumerate() {
        let pf = p as f64;
        e += pf * (pf - 1.0 - 2.0 * j as f64 / alpha);
    }
    e + 2.0 / alpha * lambda.weight() as f64 * (n_vars as f64 - 1.0)
}

/// For a target `ν`, the partitions `μ > ν` with the coefficient of `m_ν` in
/// `Σ_{i<j} (x_i²∂_i − x_j²∂_j)/(x_i − x_j) m_μ`.
fn raising_coefficients(nu: &Partition, n_vars: usize) -> BTreeMap<Partition, f64> {
    let b = nu.padded(n_vars);
    let mut out: BTreeMap<Partition, f64> = BTreeMap::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let s = b[i] + b[j];
            let hi = b[i].max(b[j]);
            for p in hi + 1..=s {
                let q = s - p;
                let mut parts: Vec<usize> = b
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, &v)| v)
                    .collect();
                parts.push(p);
                parts.push(q);
                *out.entry(Partition::new(parts)).or_insert(0.0) += (p - q) as f64;
            }
        }
    }
    out
}

/// Jack polynomial `P_λ^(α)` in the monomial basis.
pub fn jack_coeffs(lambda: &Partition, alpha: f64, n_vars: usize) -> Result<SymPoly> {
    let mut poly = SymPoly::zero(Basis::Monomial, n_vars);
    for (mu, u) in jack_expansion(lambda, alpha, n_vars)? {
        poly.add_term(mu, u);
    }
    Ok(poly)
}

pub fn jack_eval(lambda: &Partition, alpha: f64, x: &[f64]) -> Result<f64> {
    Ok(jack_expansion(lambda, alpha, x.len())?
        .iter()
        .map(|(mu, u)| u * monomial_eval(mu, x))
        .sum())
}

/// Basis in which a [`SymPoly`] is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Basis {
    Monomial,
    /// Jack polynomials `P^(α)` with the given `α`.
    Jack(f64),
}

/// Finite expansion of a symmetric polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymPoly {
    pub basis: Basis,
    pub coeffs: BTreeMap<Partition, f64>,
    pub n_vars: usize,
}

impl SymPoly {
    pub fn zero(basis: Basis, n_vars: usize) -> Self {
        SymPoly { basis, coeffs: BTreeMap::new(), n_vars }
    }

    pub fn add_term(&mut self, p: Partition, c: f64) {
        assert!(p.len() <= self.n_vars, "partition {p} exceeds {} variables", self.n_vars);
        let entry = self.coeffs.entry(p.clone()).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &Partition) -> f64 {
        self.coeffs.get(p).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, c: f64) -> SymPoly {
        let mut out = SymPoly::zero(self.basis, self.n_vars);
        for (p, v) in &self.coeffs {
            out.add_term(p.clone(), v * c);
        }
        out
    }

    /// Re-expand in the monomial basis.
    pub fn to_monomial(&self) -> Result<SymPoly> {
        match self.basis {
            Basis::Monomial => Ok(self.clone()),
            Basis::Jack(alpha) => {
                let mut out = SymPoly::zero(Basis::Monomial, self.n_vars);
                for (tau, c) in &self.coeffs {
                    for (mu, u) in jack_expansion(tau, alpha, self.n_vars)? {
                        out.add_term(mu, c * u);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_vars {
            return Err(Error::InvalidParameter(format!(
                "expected {} variables, got {}",
                self.n_vars,
                x.len()
            )));
        }
        let mono = self.to_monomial()?;
        Ok(mono.coeffs.iter().map(|(p, c)| c * monomial_eval(p, x)).sum())
    }

    /// Largest absolute difference of coefficients, in the shared basis.
    pub fn max_coeff_distance(&self, other: &SymPoly) -> f64 {
        let mut keys: Vec<&Partition> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| (self.coefficient(k) - other.coefficient(k)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}
