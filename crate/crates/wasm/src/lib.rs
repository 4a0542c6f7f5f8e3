//! Browser bindings. The plain functions return `Result<_, String>` so they run
//! and test natively; the `#[wasm_bindgen]` wrappers only convert errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use dunkl_lab::equilibrium::peak_set;
use dunkl_lab::intertwine::{v_a_on_monomial, v_b_on_monomial};
use dunkl_lab::orthopoly::{density_a_exact, density_b_exact};
use dunkl_lab::sde::{scaled_histogram, simulate_paths, Initial, SimPlan};
use dunkl_lab::symfunc::{Basis, Partition};
use dunkl_lab::RootSystemConfig;

/// Upper bound on `paths × steps × N` so a simulation stays interactive.
pub const MAX_WORK: f64 = 5e7;

fn config(root_type: &str, n: usize, beta: f64, nu: f64) -> Result<RootSystemConfig, String> {
    let cfg = match root_type {
        "A" | "a" => RootSystemConfig::type_a(n, beta),
        "B" | "b" => RootSystemConfig::type_b(n, beta, nu),
        other => return Err(format!("unknown root system type `{other}`")),
    };
    cfg.map_err(|e| e.to_string())
}

/// Exact β=2 one-point density of `v = y/√(2t)` from the origin, at `points` equally spaced `v` in `[lo, hi]`.
pub fn exact_curve(root_type: &str, n: usize, nu: f64, t: f64, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    let cfg = config(root_type, n, 2.0, nu)?;
    if !(t > 0.0) || !(lo < hi) || points < 2 {
        return Err("need t > 0, lo < hi and at least two points".into());
    }
    let scale = (2.0 * t).sqrt();
    Ok((0..points)
        .map(|i| {
            let v = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let y = v * scale;
            scale * if cfg.is_type_b() { density_b_exact(n, nu, t, y) } else { density_a_exact(n, t, y) }
        })
        .collect())
}

/// Minimizer of the log-gas potential: Hermite zeros (type A) or square roots of Laguerre zeros (type B).
pub fn peak_points(root_type: &str, n: usize, nu: f64) -> Result<Vec<f64>, String> {
    let cfg = config(root_type, n, 1.0, nu)?;
    peak_set(&cfg).map(|r| r.minimizer).map_err(|e| e.to_string())
}

/// Density histogram of `v = y/√(βt)` over `[lo, hi)`, started on a unit lattice.
#[allow(clippy::too_many_arguments)]
pub fn histogram(
    root_type: &str,
    n: usize,
    beta: f64,
    nu: f64,
    t: f64,
    dt: f64,
    paths: usize,
    seed: u32,
    lo: f64,
    hi: f64,
    width: f64,
) -> Result<Vec<f64>, String> {
    let cfg = config(root_type, n, beta, nu)?;
    let plan = SimPlan::new(cfg, dt, t, paths, u64::from(seed), Initial::Lattice { spacing: 1.0 })
        .map_err(|e| e.to_string())?;
    let work = paths as f64 * plan.n_steps() as f64 * n as f64;
    if work > MAX_WORK {
        return Err(format!("{work:.1e} particle steps exceeds the interactive limit of {MAX_WORK:.0e}"));
    }
    let ens = simulate_paths(&plan).map_err(|e| e.to_string())?;
    let h = scaled_histogram(&ens.finals, (beta * t).sqrt(), lo, hi, width).map_err(|e| e.to_string())?;
    Ok(h.densities())
}

#[derive(Serialize, Debug, PartialEq)]
pub struct Term {
    pub partition: Vec<usize>,
    pub monomial: f64,
}

/// Monomial coefficients of `V m_λ`; type-B polynomials are in the squared variables.
pub fn intertwiner_terms(root_type: &str, lambda: &str, n: usize, beta: f64, nu: f64) -> Result<Vec<Term>, String> {
    let parts = lambda
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("`{s}` is not a part")))
        .collect::<Result<Vec<_>, _>>()?;
    let lam = Partition::new(parts);
    if lam.weight() > 8 {
        return Err("keep |lambda| at most 8 in the browser".into());
    }
    let cfg = config(root_type, n, beta, nu)?;
    let poly = if cfg.is_type_b() {
        v_b_on_monomial(&lam, n, beta, nu)
    } else {
        v_a_on_monomial(&lam, n, beta)
    }
    .and_then(|p| p.to_monomial())
    .map_err(|e| e.to_string())?;
    debug_assert_eq!(poly.basis, Basis::Monomial);
    Ok(poly.coeffs.iter().map(|(p, &c)| Term { partition: p.parts().to_vec(), monomial: c }).collect())
}

#[wasm_bindgen(js_name = exactCurve)]
pub fn exact_curve_js(root_type: &str, n: usize, nu: f64, t: f64, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    exact_curve(root_type, n, nu, t, lo, hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = peakPoints)]
pub fn peak_points_js(root_type: &str, n: usize, nu: f64) -> Result<Vec<f64>, JsError> {
    peak_points(root_type, n, nu).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = histogram)]
#[allow(clippy::too_many_arguments)]
pub fn histogram_js(
    root_type: &str,
    n: usize,
    beta: f64,
    nu: f64,
    t: f64,
    dt: f64,
    paths: usize,
    seed: u32,
    lo: f64,
    hi: f64,
    width: f64,
) -> Result<Vec<f64>, JsError> {
    histogram(root_type, n, beta, nu, t, dt, paths, seed, lo, hi, width).map_err(|e| JsError::new(&e))
}

/// JSON array of `{partition, monomial}` objects.
#[wasm_bindgen(js_name = intertwinerTable)]
pub fn intertwiner_table_js(root_type: &str, lambda: &str, n: usize, beta: f64, nu: f64) -> Result<String, JsError> {
    let terms = intertwiner_terms(root_type, lambda, n, beta, nu).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&terms).map_err(|e| JsError::new(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_curve_integrates_to_n() {
        for (ty, n) in [("A", 3), ("B", 2)] {
            let (lo, hi, m) = (if ty == "A" { -6.0 } else { 0.0 }, 6.0, 2001);
            let c = exact_curve(ty, n, 0.5, 1.5, lo, hi, m).unwrap();
            let h = (hi - lo) / (m - 1) as f64;
            let trapezoid = h * (c.iter().sum::<f64>() - 0.5 * (c[0] + c[m - 1]));
            assert!((trapezoid - n as f64).abs() < 1e-6, "{ty}: {trapezoid}");
        }
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(exact_curve("C", 2, 0.5, 1.0, -1.0, 1.0, 10).is_err());
        assert!(exact_curve("A", 2, 0.5, 1.0, 1.0, -1.0, 10).is_err());
        assert!(histogram("A", 3, 2.0, 0.0, 100.0, 1e-4, 100_000, 1, -3.0, 3.0, 0.1).is_err());
        assert!(intertwiner_terms("A", "2,x", 3, 2.0, 0.0).is_err());
    }

    #[test]
    fn peak_points_are_hermite_zeros() {
        let p = peak_points("A", 2, 0.0).unwrap();
        assert!((p[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let b = peak_points("B", 1, 0.5).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_has_unit_mass_per_particle() {
        let d = histogram("A", 2, 2.0, 0.0, 1.0, 1e-2, 500, 7, -5.0, 5.0, 0.25).unwrap();
        let mass: f64 = d.iter().sum::<f64>() * 0.25;
        assert!((mass - 2.0).abs() < 1e-9);
    }

    #[test]
    fn intertwiner_terms_reproduce_the_quadratic_example() {
        let t = intertwiner_terms("A", "2", 3, 2.0, 0.0).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|x| (x.monomial - 0.5).abs() < 1e-12));
        assert_eq!(intertwiner_terms("B", "", 2, 2.0, 0.5).unwrap(), vec![Term { partition: vec![], monomial: 1.0 }]);
    }
}
