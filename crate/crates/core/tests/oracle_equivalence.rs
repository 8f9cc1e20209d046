//! Cross-module agreement between the closed forms and the formula-free
//! oracles: energy-scan minimization against the closed-form order
//! parameter, and covariance evolution against the closed-form squeezing
//! coefficients.

use std::f64::consts::PI;

use dicke2p::analysis::{global_min_squeezing, lin_spaced};
use dicke2p::dynamics::{coefficients, min_squeezing};
use dicke2p::model::{critical_coupling, order_parameter, solve_mean_field, Branch, ModelParams};
use dicke2p::oracle::{
    evolve_covariance, minimize_energy_bruteforce, moments_from_covariance, propagate_covariance,
    CovarianceState,
};

fn base_solution(g: f64) -> dicke2p::model::MeanFieldSolution {
    let p = ModelParams::new(1.0, 0.0008, 1000, g).unwrap();
    solve_mean_field(&p, Branch::Plus).unwrap()
}

#[test]
fn order_parameter_matches_the_energy_scan_on_a_grid() {
    // A coarse version of the acceptance grid: the closed-form minimizer
    // agrees with the brute-force scan everywhere in the superradiant
    // region.
    let p0 = ModelParams::new(1.0, 0.0008, 1000, 0.0).unwrap();
    let g_t = critical_coupling(&p0);
    for g in lin_spaced(g_t + 1e-3, 0.5 - 1e-4, 12) {
        let p = ModelParams::new(1.0, 0.0008, 1000, g).unwrap();
        let closed = order_parameter(&p, Branch::Plus).unwrap();
        let scan = minimize_energy_bruteforce(&p).unwrap();
        let rel = (closed - scan.argmin).abs() / scan.argmin.max(1.0);
        assert!(
            rel < 1e-6,
            "g = {g}: closed {closed} vs oracle {}",
            scan.argmin
        );
    }
}

#[test]
fn covariance_oracle_reproduces_the_closed_form_coefficients() {
    for g in [0.45, 0.47, 0.49] {
        let s = base_solution(g);
        let dt = 2e-4 * PI / s.omega_a;
        let mut worst: f64 = 0.0;
        for t in lin_spaced(0.0, 200.0, 101) {
            let closed = coefficients(&s, t).unwrap();
            let cov = evolve_covariance(&s, t, dt).unwrap();
            let oracle = moments_from_covariance(&cov);
            worst = worst
                .max((closed.a_q - oracle.a_q).abs())
                .max((closed.b_q - oracle.b_q).abs())
                .max((closed.c_q - oracle.c_q).abs());
        }
        assert!(worst < 1e-8, "g = {g}: max deviation {worst}");
    }
}

#[test]
fn rk4_and_exact_propagator_agree_over_the_full_window() {
    let s = base_solution(0.47);
    let dt = 2e-4 * PI / s.omega_a;
    for t in lin_spaced(0.0, 200.0, 41) {
        let a = evolve_covariance(&s, t, dt).unwrap();
        let b = propagate_covariance(&s, t).unwrap();
        assert!((a.sxx - b.sxx).abs() < 1e-9);
        assert!((a.spp - b.spp).abs() < 1e-9);
        assert!((a.sxp - b.sxp).abs() < 1e-9);
    }
}

#[test]
fn symplectic_purity_is_conserved() {
    for g in [0.45, 0.47, 0.49] {
        let s = base_solution(g);
        let dt = 2e-4 * PI / s.omega_a;
        for t in lin_spaced(1.0, 200.0, 24) {
            let c = evolve_covariance(&s, t, dt).unwrap();
            assert!(
                (c.det() - 0.25).abs() < 1e-8,
                "g = {g}, t = {t}: det = {}",
                c.det()
            );
            assert!(c.sxx > 0.0 && c.spp > 0.0);
        }
    }
}

#[test]
fn oracle_oscillates_at_the_predicted_frequency() {
    // The oracle's C coefficient oscillates with period pi / omega_a; the
    // measured period from its minima must land within 0.1%.
    let s = base_solution(0.49);
    let expected = PI / s.omega_a;
    let n_per_period = 256;
    let t_total = 3.5 * expected;
    let n = (t_total / expected * n_per_period as f64) as usize;
    let samples: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let t = expected * k as f64 / n_per_period as f64;
            let cov = propagate_covariance(&s, t).unwrap();
            (t, moments_from_covariance(&cov).c_q)
        })
        .collect();
    let mut minima = Vec::new();
    for i in 1..samples.len() - 1 {
        let (prev, here, next) = (samples[i - 1].1, samples[i].1, samples[i + 1].1);
        if here < prev && here < next {
            let denom = prev - 2.0 * here + next;
            let offset = if denom > 0.0 {
                0.5 * (prev - next) / denom
            } else {
                0.0
            };
            let dt = samples[1].0 - samples[0].0;
            minima.push(samples[i].0 + offset * dt);
        }
    }
    assert!(minima.len() >= 3, "found {} minima", minima.len());
    let spans: Vec<f64> = minima.windows(2).map(|w| w[1] - w[0]).collect();
    let measured = spans.iter().sum::<f64>() / spans.len() as f64;
    assert!(
        (measured - expected).abs() / expected < 1e-3,
        "measured {measured} vs expected {expected}"
    );
}

#[test]
fn minimum_covariance_eigenvalue_matches_the_closed_squeezing() {
    // lambda_min(sigma) = zeta_min^2 / 2 at the deepest point of the cycle.
    for g in [0.47, 0.49] {
        let s = base_solution(g);
        let t = PI / (2.0 * s.omega_a);
        let dt = 2e-4 * PI / s.omega_a;
        let cov = evolve_covariance(&s, t, dt).unwrap();
        let zeta_sq_closed = global_min_squeezing(&s).powi(2);
        assert!(
            (2.0 * cov.min_eigenvalue() - zeta_sq_closed).abs() < 1e-8,
            "g = {g}"
        );
    }
}

#[test]
fn oracle_moments_match_min_squeezing_at_random_times() {
    let s = base_solution(0.49);
    // Deterministic quasi-random times over the window.
    let times: Vec<f64> = (0..50).map(|k| (k as f64 * 3.9002) % 200.0).collect();
    for &t in &times {
        let cov = propagate_covariance(&s, t).unwrap();
        let oracle = moments_from_covariance(&cov);
        let closed = coefficients(&s, t).unwrap();
        assert!((min_squeezing(&oracle) - min_squeezing(&closed)).abs() < 1e-8);
    }
}

#[test]
fn vacuum_dictionary_is_the_identity_reference() {
    let m = moments_from_covariance(&CovarianceState::vacuum());
    assert_eq!((m.a_q, m.b_q, m.c_q), (0.0, 0.0, 1.0));
}
