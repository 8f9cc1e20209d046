//! Independent verification paths for the closed-form results.
//!
//! Two oracles live here. The first minimizes the ground-state energy over
//! the order parameter by brute force (grid scan plus golden-section
//! refinement), never touching the closed-form minimizer. The second evolves
//! the Gaussian covariance matrix of the cavity quadratures under the
//! quadratic mean-field Hamiltonian, either with a fixed-step RK4 integrator
//! or with a numerically computed matrix exponential; the quadrature
//! coefficients are then read off through the ladder-operator dictionary.
//! Neither path imports the closed-form coefficient or squeezing formulas.

use crate::dynamics::QuadratureCoefficients;
use crate::error::{Error, Result};
use crate::model::{ground_state_energy, MeanFieldSolution, ModelParams};

/// Grid resolution of the coarse energy scan.
const SCAN_POINTS: usize = 20_000;

/// Golden-section interval tolerance, relative to `sqrt(N)`.
const REFINE_TOL: f64 = 1e-9;

/// Inverse golden ratio, the interval reduction factor per iteration.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of the brute-force energy minimization over `beta in [0, sqrt(N))`.
#[derive(Debug, Clone)]
pub struct EnergyScan {
    pub beta_grid: Vec<f64>,
    pub energies: Vec<f64>,
    /// Refined non-negative minimizer; the `-beta` partner is implied by
    /// the symmetry of the energy.
    pub argmin: f64,
    pub min_energy: f64,
}

/// Second moments of the cavity quadratures X and P at time `t`.
/// The vacuum is `(1/2, 1/2, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub t: f64,
    pub sxx: f64,
    pub spp: f64,
    pub sxp: f64,
}

impl CovarianceState {
    pub fn vacuum() -> Self {
        CovarianceState {
            t: 0.0,
            sxx: 0.5,
            spp: 0.5,
            sxp: 0.0,
        }
    }

    /// Determinant of the 2x2 covariance matrix; 1/4 for a pure state.
    pub fn det(&self) -> f64 {
        self.sxx * self.spp - self.sxp * self.sxp
    }

    /// Smaller eigenvalue of the covariance matrix; equals half the
    /// squared minimum squeezing parameter for this pure-state evolution.
    pub fn min_eigenvalue(&self) -> f64 {
        let mean = 0.5 * (self.sxx + self.spp);
        let half_diff = 0.5 * (self.sxx - self.spp);
        mean - (half_diff * half_diff + self.sxp * self.sxp).sqrt()
    }
}

/// Minimizes the ground-state energy over the order parameter by a coarse
/// grid scan followed by golden-section refinement and a parabolic polish.
///
/// The scan uses only the energy expression itself; the closed-form
/// minimizer is never consulted, which is what makes this an oracle.
pub fn minimize_energy_bruteforce(p: &ModelParams) -> Result<EnergyScan> {
    let beta_max = p.n().sqrt() * (1.0 - 1e-9);
    let step = beta_max / SCAN_POINTS as f64;
    let mut beta_grid = Vec::with_capacity(SCAN_POINTS + 1);
    let mut energies = Vec::with_capacity(SCAN_POINTS + 1);
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=SCAN_POINTS {
        let beta = i as f64 * step;
        let e = ground_state_energy(p, beta)?;
        if e < best.1 {
            best = (i, e);
        }
        beta_grid.push(beta);
        energies.push(e);
    }

    let lo = beta_grid[best.0.saturating_sub(1)];
    let hi = beta_grid[(best.0 + 1).min(SCAN_POINTS)];
    let energy = |beta: f64| ground_state_energy(p, beta).expect("scan stays inside the domain");
    let tol = REFINE_TOL * p.n().sqrt();
    let mut argmin = golden_section(&energy, lo, hi, tol);
    // Two parabolic steps push the minimizer to the floating-point noise
    // floor of the energy landscape.
    for h in [1e-5 * p.n().sqrt(), 1e-7 * p.n().sqrt()] {
        argmin = parabolic_step(&energy, argmin.max(0.0), h, beta_max);
    }
    let argmin = argmin.max(0.0);
    Ok(EnergyScan {
        beta_grid,
        energies,
        argmin,
        min_energy: energy(argmin),
    })
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut b = hi - (hi - lo) * INV_PHI;
    let mut c = lo + (hi - lo) * INV_PHI;
    let mut fb = f(b);
    let mut fc = f(c);
    while hi - lo > tol {
        if fb < fc {
            hi = c;
            c = b;
            fc = fb;
            b = hi - (hi - lo) * INV_PHI;
            fb = f(b);
        } else {
            lo = b;
            b = c;
            fb = fc;
            c = lo + (hi - lo) * INV_PHI;
            fc = f(c);
        }
    }
    0.5 * (lo + hi)
}

/// One step of successive parabolic interpolation on the stencil
/// `(b - h, b, b + h)`, clamped to the admissible interval.
fn parabolic_step<F: Fn(f64) -> f64>(f: &F, b: f64, h: f64, beta_max: f64) -> f64 {
    let lo = (b - h).max(0.0);
    let hi = (b + h).min(beta_max);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    if half <= 0.0 {
        return b;
    }
    let (f_lo, f_mid, f_hi) = (f(lo), f(mid), f(hi));
    let denom = f_lo - 2.0 * f_mid + f_hi;
    if denom <= 0.0 {
        return b;
    }
    let vertex = mid + 0.5 * half * (f_lo - f_hi) / denom;
    if vertex.is_finite() && vertex >= lo && vertex <= hi {
        vertex
    } else {
        b
    }
}

/// Right-hand side of the covariance moment equations
/// `dX/dt = (omega - 2 g_beta) P`, `dP/dt = -(omega + 2 g_beta) X`
/// lifted to second moments.
fn moment_rhs(omega_minus: f64, omega_plus: f64, y: [f64; 3]) -> [f64; 3] {
    let [sxx, spp, sxp] = y;
    [
        2.0 * omega_minus * sxp,
        -2.0 * omega_plus * sxp,
        omega_minus * spp - omega_plus * sxx,
    ]
}

fn rk4_step(omega_minus: f64, omega_plus: f64, y: [f64; 3], h: f64) -> [f64; 3] {
    let add =
        |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1 = moment_rhs(omega_minus, omega_plus, y);
    let k2 = moment_rhs(omega_minus, omega_plus, add(y, k1, h / 2.0));
    let k3 = moment_rhs(omega_minus, omega_plus, add(y, k2, h / 2.0));
    let k4 = moment_rhs(omega_minus, omega_plus, add(y, k3, h));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        y[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Integrates the covariance moment equations from the cavity vacuum up to
/// time `t` with a fixed-step RK4 scheme.
///
/// The requested step must satisfy `dt <= 1e-3 * pi / omega_a`; the actual
/// step is `t / ceil(t / dt)` so the endpoint is hit exactly.
pub fn evolve_covariance(s: &MeanFieldSolution, t: f64, dt: f64) -> Result<CovarianceState> {
    if s.omega_a <= 0.0 {
        return Error::domain_err("omega_a", "covariance evolution needs omega_a > 0");
    }
    if t < 0.0 {
        return Error::domain_err("t", format!("time must be non-negative, got {t}"));
    }
    let max_dt = 1e-3 * std::f64::consts::PI / s.omega_a;
    if !(dt > 0.0) || dt > max_dt {
        return Err(Error::StepTooLarge { dt, max_dt });
    }
    let omega = s.params.omega();
    let omega_minus = omega - 2.0 * s.g_beta;
    let omega_plus = omega + 2.0 * s.g_beta;
    let mut y = [0.5, 0.5, 0.0];
    if t > 0.0 {
        let n = (t / dt).ceil() as u64;
        let h = t / n as f64;
        for _ in 0..n {
            y = rk4_step(omega_minus, omega_plus, y, h);
        }
    }
    Ok(CovarianceState {
        t,
        sxx: y[0],
        spp: y[1],
        sxp: y[2],
    })
}

/// Evolves the covariance through the exact propagator of the first-moment
/// equations, `sigma(t) = Phi sigma(0) Phi^T` with `Phi = exp(M t)`.
///
/// The exponential is computed numerically by scaling-and-squaring with a
/// Taylor series, so this path shares no formula with the RK4 route or the
/// closed-form coefficients.
pub fn propagate_covariance(s: &MeanFieldSolution, t: f64) -> Result<CovarianceState> {
    if s.omega_a <= 0.0 {
        return Error::domain_err("omega_a", "covariance propagation needs omega_a > 0");
    }
    if t < 0.0 {
        return Error::domain_err("t", format!("time must be non-negative, got {t}"));
    }
    let omega = s.params.omega();
    let m = [
        [0.0, (omega - 2.0 * s.g_beta) * t],
        [-(omega + 2.0 * s.g_beta) * t, 0.0],
    ];
    let phi = expm2(m);
    // Phi sigma Phi^T with sigma = diag(1/2, 1/2).
    let sigma = [[0.5, 0.0], [0.0, 0.5]];
    let tmp = mat_mul(phi, sigma);
    let full = mat_mul(tmp, transpose(phi));
    Ok(CovarianceState {
        t,
        sxx: full[0][0],
        spp: full[1][1],
        sxp: 0.5 * (full[0][1] + full[1][0]),
    })
}

type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn transpose(a: Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Matrix exponential of a 2x2 real matrix by scaling-and-squaring with a
/// Taylor series.
fn expm2(m: Mat2) -> Mat2 {
    let norm = (m[0][0].abs() + m[0][1].abs()).max(m[1][0].abs() + m[1][1].abs());
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let a = [
        [m[0][0] * scale, m[0][1] * scale],
        [m[1][0] * scale, m[1][1] * scale],
    ];
    let mut result = [[1.0, 0.0], [0.0, 1.0]];
    let mut term = [[1.0, 0.0], [0.0, 1.0]];
    for k in 1..64 {
        term = mat_mul(term, a);
        let inv_k = 1.0 / k as f64;
        for row in &mut term {
            for v in row.iter_mut() {
                *v *= inv_k;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                result[i][j] += term[i][j];
            }
        }
        let term_norm =
            (term[0][0].abs() + term[0][1].abs()).max(term[1][0].abs() + term[1][1].abs());
        if term_norm < 1e-20 {
            break;
        }
    }
    let mut out = result;
    for _ in 0..squarings {
        out = mat_mul(out, out);
    }
    out
}

/// Translates covariance moments into the quadrature-coefficient triple
/// through the ladder-operator dictionary:
/// `A = sxx - spp`, `B = 2 sxp`, `C = sxx + spp` (vacuum maps to (0, 0, 1)).
pub fn moments_from_covariance(c: &CovarianceState) -> QuadratureCoefficients {
    QuadratureCoefficients {
        t: c.t,
        a_q: c.sxx - c.spp,
        b_q: 2.0 * c.sxp,
        c_q: c.sxx + c.spp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{solve_mean_field, Branch};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn base_params(g: f64) -> ModelParams {
        ModelParams::new(1.0, 0.0008, 1000, g).unwrap()
    }

    #[test]
    fn normal_phase_minimizer_is_zero() {
        let scan = minimize_energy_bruteforce(&base_params(0.40)).unwrap();
        assert!(scan.argmin.abs() < 1e-6, "argmin = {}", scan.argmin);
    }

    #[test]
    fn superradiant_minimizer_matches_the_pinned_value() {
        let scan = minimize_energy_bruteforce(&base_params(0.49)).unwrap();
        assert_abs_diff_eq!(scan.argmin, 18.881353239, epsilon = 1e-6);
        assert!(scan.min_energy < -0.4);
        assert!(scan.argmin >= 0.0 && scan.argmin < 1000f64.sqrt());
    }

    #[test]
    fn minimizer_is_continuous_across_the_boundary() {
        use crate::model::{critical_coupling, order_parameter};
        let g_t = critical_coupling(&base_params(0.1));
        let p = base_params(g_t * (1.0 + 1e-6));
        let scan = minimize_energy_bruteforce(&p).unwrap();
        let closed = order_parameter(&p, Branch::Plus).unwrap();
        assert!(
            (scan.argmin - closed).abs() < 1e-2,
            "oracle {} vs closed {closed}",
            scan.argmin
        );
    }

    #[test]
    fn energy_has_exactly_two_stationary_points_when_superradiant() {
        // The derivative changes sign exactly once (minus to plus) on the
        // open interval, i.e. beta = 0 is a maximum and beta0 the minimum.
        let scan = minimize_energy_bruteforce(&base_params(0.49)).unwrap();
        let mut sign_changes_up = 0;
        let mut sign_changes_down = 0;
        let mut prev = 0.0f64;
        for w in scan.energies.windows(2) {
            let d = w[1] - w[0];
            if d == 0.0 {
                continue;
            }
            let s = d.signum();
            if prev < 0.0 && s > 0.0 {
                sign_changes_up += 1;
            }
            if prev > 0.0 && s < 0.0 {
                sign_changes_down += 1;
            }
            prev = s;
        }
        assert_eq!(sign_changes_up, 1);
        assert_eq!(sign_changes_down, 0);
    }

    #[test]
    fn vacuum_is_stationary_without_coupling() {
        let s = solve_mean_field(&base_params(0.40), Branch::Plus).unwrap();
        assert_eq!(s.g_beta, 0.0);
        let c = evolve_covariance(&s, 37.0, 1e-3).unwrap();
        assert_abs_diff_eq!(c.sxx, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.spp, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.sxp, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn initial_condition_is_the_vacuum() {
        let s = solve_mean_field(&base_params(0.49), Branch::Plus).unwrap();
        let c = evolve_covariance(&s, 0.0, 1e-4).unwrap();
        assert_eq!((c.sxx, c.spp, c.sxp), (0.5, 0.5, 0.0));
    }

    #[test]
    fn oversized_steps_are_rejected() {
        let s = solve_mean_field(&base_params(0.49), Branch::Plus).unwrap();
        let err = evolve_covariance(&s, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
    }

    #[test]
    fn rk4_and_propagator_agree() {
        for g in [0.45, 0.49] {
            let s = solve_mean_field(&base_params(g), Branch::Plus).unwrap();
            let dt = 2e-4 * std::f64::consts::PI / s.omega_a;
            for t in [0.5, 7.0, 60.0, 200.0] {
                let a = evolve_covariance(&s, t, dt).unwrap();
                let b = propagate_covariance(&s, t).unwrap();
                assert_abs_diff_eq!(a.sxx, b.sxx, epsilon = 1e-9);
                assert_abs_diff_eq!(a.spp, b.spp, epsilon = 1e-9);
                assert_abs_diff_eq!(a.sxp, b.sxp, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn determinant_is_conserved() {
        let s = solve_mean_field(&base_params(0.49), Branch::Plus).unwrap();
        let dt = 2e-4 * std::f64::consts::PI / s.omega_a;
        for t in [1.0, 25.0, 120.0, 200.0] {
            let c = evolve_covariance(&s, t, dt).unwrap();
            assert_abs_diff_eq!(c.det(), 0.25, epsilon = 1e-8);
        }
    }

    #[test]
    fn moments_dictionary() {
        let vac = moments_from_covariance(&CovarianceState::vacuum());
        assert_eq!((vac.a_q, vac.b_q, vac.c_q), (0.0, 0.0, 1.0));

        // A pure squeezed-rotated state: det = 1/4 by construction.
        let sxp = (0.81f64 - 0.25).sqrt();
        let c = CovarianceState {
            t: 0.0,
            sxx: 0.9,
            spp: 0.9,
            sxp,
        };
        let m = moments_from_covariance(&c);
        assert_eq!(m.a_q, 0.0);
        assert_relative_eq!(m.b_q, 2.0 * sxp, max_relative = 1e-15);
        assert_relative_eq!(m.c_q, 1.8, max_relative = 1e-15);
        let purity = m.c_q * m.c_q - m.a_q * m.a_q - m.b_q * m.b_q;
        assert_relative_eq!(purity, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn minimum_eigenvalue_at_the_half_period() {
        // At t = pi / (2 omega_a) the squeezing is deepest; the smaller
        // covariance eigenvalue there is half the squared minimum squeezing.
        let s = solve_mean_field(&base_params(0.49), Branch::Plus).unwrap();
        let t = std::f64::consts::PI / (2.0 * s.omega_a);
        let dt = 2e-4 * std::f64::consts::PI / s.omega_a;
        let c = evolve_covariance(&s, t, dt).unwrap();
        assert_abs_diff_eq!(c.min_eigenvalue(), 0.015789556, epsilon = 1e-8);
    }
}
