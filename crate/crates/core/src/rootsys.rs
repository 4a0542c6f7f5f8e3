//! Root systems of types A and B with multiplicities fixed by `beta` and `nu`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Which family of reflection groups the particles live in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum RootKind {
    /// Permutations; particles on the line.
    A,
    /// Signed permutations; particles on the half-line with Bessel index `nu`.
    B { nu: f64 },
}

/// A positive root together with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub vector: Vec<f64>,
    pub kappa: f64,
}

impl Root {
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.vector.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.vector.iter().map(|a| a * a).sum()
    }

    /// Image of `x` under the reflection through the hyperplane orthogonal to the root.
    pub fn reflect(&self, x: &[f64]) -> Vec<f64> {
        let c = 2.0 * self.dot(x) / self.norm_sq();
        x.iter().zip(&self.vector).map(|(xi, ai)| xi - c * ai).collect()
    }
}

/// Particle count, inverse temperature and root-system type.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSystemConfig {
    kind: RootKind,
    n: usize,
    beta: f64,
}

impl RootSystemConfig {
    pub fn new(kind: RootKind, n: usize, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("particle count must be positive".into()));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        if let RootKind::B { nu } = kind {
            if beta < 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "type B requires beta >= 1, got {beta}"
                )));
            }
            if !(nu.is_finite() && nu >= 0.0) {
                return Err(Error::InvalidParameter(format!("nu must be >= 0, got {nu}")));
            }
        }
        Ok(Self { kind, n, beta })
    }

    pub fn type_a(n: usize, beta: f64) -> Result<Self> {
        Self::new(RootKind::A, n, beta)
    }

    pub fn type_b(n: usize, beta: f64, nu: f64) -> Result<Self> {
        Self::new(RootKind::B { nu }, n, beta)
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nu(&self) -> Option<f64> {
        match self.kind {
            RootKind::A => None,
            RootKind::B { nu } => Some(nu),
        }
    }

    pub fn is_type_b(&self) -> bool {
        matches!(self.kind, RootKind::B { .. })
    }

    /// Same system at a different inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.kind, self.n, beta)
    }

    /// Sum of multiplicities over the positive roots.
    pub fn gamma(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            RootKind::A => n * (n - 1.0) / 2.0,
            RootKind::B { nu } => n * (n + nu - 0.5),
        }
    }

    /// Dimension of the span of the roots.
    pub fn rank(&self) -> usize {
        match self.kind {
            RootKind::A => self.n - 1,
            RootKind::B { .. } => self.n,
        }
    }

    /// Order of the reflection group.
    pub fn weyl_order(&self) -> f64 {
        let fact: f64 = (1..=self.n).map(|k| k as f64).product();
        match self.kind {
            RootKind::A => fact,
            RootKind::B { .. } => fact * 2f64.powi(self.n as i32),
        }
    }

    pub fn log_weyl_order(&self) -> f64 {
        let lf = ln_gamma(self.n as f64 + 1.0);
        match self.kind {
            RootKind::A => lf,
            RootKind::B { .. } => lf + self.n as f64 * std::f64::consts::LN_2,
        }
    }

    /// Explicit enumeration of the positive subsystem.
    pub fn positive_roots(&self) -> Vec<Root> {
        let n = self.n;
        let unit = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        let mut roots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = vec![0.0; n];
                v[j] = 1.0;
                v[i] = -1.0;
                roots.push(Root { vector: v, kappa: 1.0 });
            }
        }
        if let RootKind::B { nu } = self.kind {
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = vec![0.0; n];
                    v[j] = 1.0;
                    v[i] = 1.0;
                    roots.push(Root { vector: v, kappa: 1.0 });
                }
                roots.push(Root { vector: unit(i), kappa: nu + 0.5 });
            }
        }
        roots
    }

    /// `log w(x)`, or `-inf` when a factor of the weight vanishes.
    pub fn log_weight(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        match self.kind {
            RootKind::A => {
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        acc += (x[j] - x[i]).abs().ln();
                    }
                }
                self.beta * acc
            }
            RootKind::B { nu } => {
                let mut short = 0.0;
                for i in 0..x.len() {
                    short += x[i].abs().ln();
                    for j in i + 1..x.len() {
                        acc += (x[j] * x[j] - x[i] * x[i]).abs().ln();
                    }
                }
                self.beta * ((nu + 0.5) * short + acc)
            }
        }
    }

    /// `log c`, where `c = ∫ exp(-|x|²/2) w(x) dx` over all of R^N.
    pub fn log_selberg_const(&self) -> f64 {
        let b = self.beta;
        let n = self.n;
        match self.kind {
            RootKind::A => {
                let mut acc = 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
                for j in 1..=n {
                    acc += ln_gamma(1.0 + j as f64 * b / 2.0) - ln_gamma(1.0 + b / 2.0);
                }
                acc
            }
            RootKind::B { nu } => {
                let mut acc = 0.5 * (b * self.gamma() + n as f64) * std::f64::consts::LN_2;
                for j in 1..=n {
                    let jf = j as f64;
                    acc += ln_gamma(1.0 + jf * b / 2.0) + ln_gamma(b / 2.0 * (nu + jf - 0.5) + 0.5)
                        - ln_gamma(b / 2.0 + 1.0);
                }
                acc
            }
        }
    }

    /// Value of the log-gas potential at its minimum.
    pub fn freezing_constant(&self) -> f64 {
        let n = self.n as f64;
        let sum_ilogi: f64 = (1..=self.n).map(|i| i as f64 * (i as f64).ln()).sum();
        match self.kind {
            RootKind::A => n / 4.0 * (n - 1.0) * (1.0 + std::f64::consts::LN_2) - 0.5 * sum_ilogi,
            RootKind::B { nu } => {
                let tail: f64 = (1..=self.n)
                    .map(|i| {
                        let a = nu + i as f64 - 0.5;
                        if a > 0.0 { a * a.ln() } else { 0.0 }
                    })
                    .sum();
                n / 2.0 * (n + nu - 0.5) - 0.5 * sum_ilogi - 0.5 * tail
            }
        }
    }

    /// Strict membership in the open Weyl chamber.
    pub fn in_weyl_chamber(&self, x: &[f64]) -> bool {
        if x.len() != self.n || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let ordered = x.windows(2).all(|w| w[0] < w[1]);
        match self.kind {
            RootKind::A => ordered,
            RootKind::B { .. } => ordered && x[0] > 0.0,
        }
    }

    /// Smallest `|α·x|/|α|` over positive roots: distance to the nearest wall.
    pub fn wall_distance(&self, x: &[f64]) -> f64 {
        self.positive_roots()
            .iter()
            .map(|r| r.dot(x).abs() / r.norm_sq().sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// All images `ρx` for `ρ` in the reflection group, in a fixed order.
    pub fn weyl_orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let perms = permutations(self.n);
        match self.kind {
            RootKind::A => perms.iter().map(|p| p.iter().map(|&i| x[i]).collect()).collect(),
            RootKind::B { .. } => {
                let mut out = Vec::with_capacity(perms.len() << self.n);
                for p in &perms {
                    for signs in 0u32..(1u32 << self.n) {
                        out.push(
                            p.iter()
                                .enumerate()
                                .map(|(k, &i)| if signs >> k & 1 == 1 { -x[i] } else { x[i] })
                                .collect(),
                        );
                    }
                }
                out
            }
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Advance to the next lexicographic permutation; false when `v` was the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
