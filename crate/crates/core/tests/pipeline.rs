//! End-to-end checks that chain simulation, exact densities and equilibria.

use dunkl_lab::equilibrium::{exact_steady_logdensity, peak_set};
use dunkl_lab::orthopoly::density_b_exact;
use dunkl_lab::sde::{per_particle_means, scaled_histogram, simulate_paths, Initial, SimPlan, DEFAULT_SEED};
use dunkl_lab::RootSystemConfig;

#[test]
fn bessel_ensemble_matches_exact_density_at_beta_two() {
    let (n, nu, t) = (2, 0.5, 4.0);
    let cfg = RootSystemConfig::type_b(n, 2.0, nu).unwrap();
    let plan = SimPlan::new(cfg, 1e-3, t, 4000, DEFAULT_SEED, Initial::Lattice { spacing: 0.2 }).unwrap();
    let ens = simulate_paths(&plan).unwrap();
    let scale = (2.0 * t).sqrt();
    let width = 0.1;
    let h = scaled_histogram(&ens.finals, scale, 0.0, 4.0, width).unwrap();
    // per-particle L1 against bin-centre values of the exact density
    let l1: f64 = h
        .densities()
        .iter()
        .enumerate()
        .map(|(i, d)| (d - scale * density_b_exact(n, nu, t, h.bin_center(i) * scale)).abs() * width)
        .sum::<f64>()
        / n as f64;
    assert!(l1 < 0.08, "L1 {l1}");
    assert_eq!(h.underflow, 0);
}

#[test]
fn large_beta_ensemble_sits_on_the_peak_set() {
    let (beta, t) = (400.0, 1.0);
    let cfg = RootSystemConfig::type_b(3, beta, 1.5).unwrap();
    let peaks = peak_set(&cfg).unwrap().minimizer;
    let plan = SimPlan::new(cfg, 2e-4, t, 400, DEFAULT_SEED, Initial::Lattice { spacing: 0.5 }).unwrap();
    let ens = simulate_paths(&plan).unwrap();
    let means = per_particle_means(&ens.finals, (beta * t).sqrt());
    for (m, p) in means.iter().zip(&peaks) {
        assert!((m - p).abs() < 0.03, "{means:?} vs {peaks:?}");
    }
}

#[test]
fn steady_state_is_normalized_over_the_chamber() {
    // N=2 type A: integrate over v1 < v2 with a midpoint grid
    let cfg = RootSystemConfig::type_a(2, 3.0).unwrap();
    let (lo, hi, m) = (-6.0, 6.0, 600);
    let h = (hi - lo) / m as f64;
    let mut total = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let v = [lo + (i as f64 + 0.5) * h, lo + (j as f64 + 0.5) * h];
            total += exact_steady_logdensity(&cfg, &v).exp() * h * h;
        }
    }
    assert!((total - 1.0).abs() < 1e-3, "{total}");
}
