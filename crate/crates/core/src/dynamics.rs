//! Time-dependent quadrature squeezing of the cavity mode, starting from
//! the vacuum.
//!
//! The squeezing parameter along the quadrature at angle `phi` is
//! `zeta(phi, t) = sqrt(A cos(2 phi) + B sin(2 phi) + C)` with coefficients
//!
//! ```text
//! A(t) = 2 omega g_beta (cos(2 omega_a t) - 1) / omega_a^2
//! B(t) = -2 g_beta sin(2 omega_a t) / omega_a
//! C(t) = (omega^2 - 4 g_beta^2 cos(2 omega_a t)) / omega_a^2
//! ```
//!
//! Normalization: the vacuum gives `zeta = 1` (twice the quadrature
//! variance), so squeezing means `zeta < 1` and the 3 dB level sits at
//! `zeta^2 = 1/2`. The triple satisfies the pure-state identity
//! `C^2 - A^2 - B^2 = 1`, equivalently `zeta_min * zeta_max = 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::MeanFieldSolution;

/// The coefficient triple of the angle-resolved squeezing parameter at one
/// instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureCoefficients {
    pub t: f64,
    pub a_q: f64,
    pub b_q: f64,
    pub c_q: f64,
}

/// Squeezing data sampled at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingSample {
    pub t: f64,
    /// Squeezing of the position quadrature (`phi = 0`).
    pub zeta_x: f64,
    /// Squeezing of the momentum quadrature (`phi = pi/2`).
    pub zeta_p: f64,
    /// Squeezing minimized over the quadrature angle.
    pub zeta_min: f64,
    /// The anti-squeezed partner, maximized over the angle.
    pub zeta_max: f64,
    /// Minimizing angle in `[0, pi)`.
    pub phi_min: f64,
}

/// Uniformly sampled squeezing time series for one mean-field solution.
#[derive(Debug, Clone)]
pub struct SqueezingSeries {
    pub solution: MeanFieldSolution,
    pub samples: Vec<SqueezingSample>,
    pub dt: f64,
}

/// Minimizing quadrature angle, with a degeneracy marker for the instants
/// where every angle is equivalent (`A = B = 0`, e.g. `t = 0` or the
/// normal phase).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalAngle {
    pub phi: f64,
    pub degenerate: bool,
}

/// Evaluates the closed-form coefficient triple at time `t >= 0`.
pub fn coefficients(s: &MeanFieldSolution, t: f64) -> Result<QuadratureCoefficients> {
    if !(t >= 0.0) {
        return Error::domain_err("t", format!("time must be non-negative, got {t}"));
    }
    if s.omega_a <= 0.0 {
        return Error::domain_err("omega_a", "coefficients need omega_a > 0");
    }
    let omega = s.params.omega();
    let wa = s.omega_a;
    let wa2 = wa * wa;
    let (sin2wt, cos2wt) = (2.0 * wa * t).sin_cos();
    // `+ 0.0` normalizes the sign of zero so the normal phase emits +0.
    let a_q = 2.0 * omega * s.g_beta * (cos2wt - 1.0) / wa2 + 0.0;
    let b_q = -2.0 * s.g_beta * sin2wt / wa + 0.0;
    // (omega^2 - 4 g_beta^2 cos) / omega_a^2 rewritten through
    // omega_a^2 = omega^2 - 4 g_beta^2; this form is exact at t = 0 and
    // keeps C >= 1 free of cancellation.
    let c_q = 1.0 + 4.0 * s.g_beta * s.g_beta * (1.0 - cos2wt) / wa2;
    Ok(QuadratureCoefficients { t, a_q, b_q, c_q })
}

/// Squeezing parameter of the quadrature at angle `phi`.
pub fn squeezing_at_angle(c: &QuadratureCoefficients, phi: f64) -> f64 {
    let (sin2phi, cos2phi) = (2.0 * phi).sin_cos();
    let variance = c.a_q * cos2phi + c.b_q * sin2phi + c.c_q;
    variance.max(0.0).sqrt()
}

/// Angle in `[0, pi)` minimizing the squeezing parameter.
///
/// Computed with the two-argument arctangent so that
/// `A cos(2 phi) + B sin(2 phi) = -sqrt(A^2 + B^2)` on the returned angle
/// for every quadrant. When `A = B = 0` the angle is undefined; the
/// convention `phi = 0` is returned with the degeneracy flag set.
pub fn optimal_angle(c: &QuadratureCoefficients) -> OptimalAngle {
    if c.a_q == 0.0 && c.b_q == 0.0 {
        return OptimalAngle {
            phi: 0.0,
            degenerate: true,
        };
    }
    let mut phi = 0.5 * (c.b_q.atan2(c.a_q) + PI);
    if phi >= PI {
        phi -= PI;
    }
    OptimalAngle {
        phi,
        degenerate: false,
    }
}

/// Minimum squeezing over the quadrature angle,
/// `sqrt(C - sqrt(A^2 + B^2))`.
pub fn min_squeezing(c: &QuadratureCoefficients) -> f64 {
    let r = (c.a_q * c.a_q + c.b_q * c.b_q).sqrt();
    (c.c_q - r).max(0.0).sqrt()
}

/// Anti-squeezing, the maximum over the quadrature angle,
/// `sqrt(C + sqrt(A^2 + B^2))`.
pub fn max_squeezing(c: &QuadratureCoefficients) -> f64 {
    let r = (c.a_q * c.a_q + c.b_q * c.b_q).sqrt();
    (c.c_q + r).sqrt()
}

/// Builds the full squeezing sample at time `t`.
pub fn sample_at(s: &MeanFieldSolution, t: f64) -> Result<SqueezingSample> {
    let c = coefficients(s, t)?;
    Ok(SqueezingSample {
        t,
        zeta_x: squeezing_at_angle(&c, 0.0),
        zeta_p: squeezing_at_angle(&c, FRAC_PI_2),
        zeta_min: min_squeezing(&c),
        zeta_max: max_squeezing(&c),
        phi_min: optimal_angle(&c).phi,
    })
}

/// Samples the squeezing dynamics uniformly with
/// `dt = (pi / omega_a) / resolution`, covering `[0, t_max]`.
///
/// `resolution` is the number of points per oscillation period `pi/omega_a`
/// and must be at least 50; the analysis-side period measurement needs 200.
pub fn quadrature_series(
    s: &MeanFieldSolution,
    t_max: f64,
    resolution: u32,
) -> Result<SqueezingSeries> {
    if !(t_max > 0.0) {
        return Error::domain_err(
            "t_max",
            format!("time window must be positive, got {t_max}"),
        );
    }
    if resolution < 50 {
        return Error::domain_err(
            "resolution",
            format!("need at least 50 points per period, got {resolution}"),
        );
    }
    let dt = (PI / s.omega_a) / resolution as f64;
    let n_samples = (t_max / dt).floor() as usize + 1;
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        samples.push(sample_at(s, k as f64 * dt)?);
    }
    Ok(SqueezingSeries {
        solution: *s,
        samples,
        dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{solve_mean_field, Branch, ModelParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn base_solution(g: f64, branch: Branch) -> MeanFieldSolution {
        let p = ModelParams::new(1.0, 0.0008, 1000, g).unwrap();
        solve_mean_field(&p, branch).unwrap()
    }

    #[test]
    fn coefficients_start_at_the_vacuum() {
        let s = base_solution(0.49, Branch::Plus);
        let c = coefficients(&s, 0.0).unwrap();
        assert_eq!(c.a_q, 0.0);
        assert_eq!(c.b_q, 0.0);
        assert_eq!(c.c_q, 1.0);
    }

    #[test]
    fn normal_phase_coefficients_are_trivial() {
        let s = base_solution(0.40, Branch::Plus);
        for t in [0.0, 1.3, 57.0, 200.0] {
            let c = coefficients(&s, t).unwrap();
            assert_eq!((c.a_q, c.b_q, c.c_q), (0.0, 0.0, 1.0));
        }
    }

    #[test]
    fn coefficients_at_the_half_period() {
        // cos(2 omega_a t) = -1 there: C peaks at (omega^2 + 4 g_beta^2) /
        // omega_a^2 and B vanishes.
        let s = base_solution(0.49, Branch::Plus);
        let t = PI / (2.0 * s.omega_a);
        let c = coefficients(&s, t).unwrap();
        assert_abs_diff_eq!(c.c_q, 15.849040173, epsilon = 1e-8);
        assert_abs_diff_eq!(c.a_q, -15.817461060, epsilon = 1e-8);
        assert_abs_diff_eq!(c.b_q, 0.0, epsilon = 1e-12);
        let expected_c = (1.0 + 4.0 * s.g_beta * s.g_beta) / (s.omega_a * s.omega_a);
        assert_relative_eq!(c.c_q, expected_c, max_relative = 1e-10);
    }

    #[test]
    fn purity_identity_holds() {
        let s = base_solution(0.49, Branch::Plus);
        for t in [0.0, 0.7, 4.5, 100.0, 200.0] {
            let c = coefficients(&s, t).unwrap();
            let purity = c.c_q * c.c_q - c.a_q * c.a_q - c.b_q * c.b_q;
            assert_relative_eq!(purity, 1.0, max_relative = 1e-9);
            assert!(c.c_q >= 1.0);
        }
    }

    #[test]
    fn vacuum_is_angle_independent() {
        let s = base_solution(0.49, Branch::Plus);
        let c = coefficients(&s, 0.0).unwrap();
        for phi in [0.0, 0.3, FRAC_PI_2, 2.9] {
            assert_relative_eq!(squeezing_at_angle(&c, phi), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn angle_pi_over_4_reads_off_c_when_b_vanishes() {
        let s = base_solution(0.49, Branch::Plus);
        let t = PI / (2.0 * s.omega_a);
        let c = coefficients(&s, t).unwrap();
        assert_abs_diff_eq!(
            squeezing_at_angle(&c, PI / 4.0),
            c.c_q.sqrt(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn branch_sign_swaps_the_quadratures() {
        let plus = base_solution(0.49, Branch::Plus);
        let minus = base_solution(0.49, Branch::Minus);
        for t in [0.9, 3.7, 45.0] {
            let cp = coefficients(&plus, t).unwrap();
            let cm = coefficients(&minus, t).unwrap();
            for phi in [0.0, 0.4, 1.1] {
                assert_abs_diff_eq!(
                    squeezing_at_angle(&cm, phi),
                    squeezing_at_angle(&cp, phi + FRAC_PI_2),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn optimal_angle_quadrants() {
        let make = |a_q: f64, b_q: f64| QuadratureCoefficients {
            t: 1.0,
            a_q,
            b_q,
            c_q: (1.0 + a_q * a_q + b_q * b_q).sqrt(),
        };
        let oa = optimal_angle(&make(-2.0, 0.0));
        assert_eq!(oa.phi, 0.0);
        assert!(!oa.degenerate);

        let oa = optimal_angle(&make(2.0, 0.0));
        assert_relative_eq!(oa.phi, FRAC_PI_2, max_relative = 1e-15);

        // (A, B) = (3, 4): the minimizer satisfies cos(2 phi) = -3/5 and
        // sin(2 phi) = -4/5.
        let oa = optimal_angle(&make(3.0, 4.0));
        assert_relative_eq!((2.0 * oa.phi).cos(), -0.6, max_relative = 1e-12);
        assert_relative_eq!((2.0 * oa.phi).sin(), -0.8, max_relative = 1e-12);

        let oa = optimal_angle(&make(0.0, 0.0));
        assert!(oa.degenerate);
        assert_eq!(oa.phi, 0.0);
    }

    #[test]
    fn optimal_angle_beats_a_dense_scan() {
        let s = base_solution(0.49, Branch::Plus);
        let c = coefficients(&s, 2.7).unwrap();
        let best = squeezing_at_angle(&c, optimal_angle(&c).phi);
        for k in 0..10_000 {
            let phi = PI * k as f64 / 10_000.0;
            assert!(best <= squeezing_at_angle(&c, phi) + 1e-12);
        }
    }

    #[test]
    fn min_squeezing_values() {
        let s = base_solution(0.49, Branch::Plus);
        let c0 = coefficients(&s, 0.0).unwrap();
        assert_relative_eq!(min_squeezing(&c0), 1.0, max_relative = 1e-12);

        let t = PI / (2.0 * s.omega_a);
        let c = coefficients(&s, t).unwrap();
        assert_abs_diff_eq!(min_squeezing(&c), 0.177705128, epsilon = 1e-8);
        // Consistent with evaluating at the optimizing angle.
        assert_relative_eq!(
            min_squeezing(&c),
            squeezing_at_angle(&c, optimal_angle(&c).phi),
            max_relative = 1e-12
        );

        let normal = base_solution(0.40, Branch::Plus);
        let c = coefficients(&normal, 17.0).unwrap();
        assert_eq!(min_squeezing(&c), 1.0);
    }

    #[test]
    fn min_max_product_is_one() {
        let s = base_solution(0.47, Branch::Plus);
        for t in [0.4, 2.0, 9.0, 151.0] {
            let c = coefficients(&s, t).unwrap();
            assert_relative_eq!(
                min_squeezing(&c) * max_squeezing(&c),
                1.0,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn series_is_flat_in_the_normal_phase() {
        let s = base_solution(0.40, Branch::Plus);
        let series = quadrature_series(&s, 30.0, 64).unwrap();
        for sample in &series.samples {
            assert_eq!(sample.zeta_x, 1.0);
            assert_eq!(sample.zeta_p, 1.0);
            assert_eq!(sample.zeta_min, 1.0);
        }
    }

    #[test]
    fn plus_branch_squeezes_x_and_enhances_p() {
        let s = base_solution(0.49, Branch::Plus);
        let series = quadrature_series(&s, 100.0, 200).unwrap();
        let threshold = 1.0 / 2f64.sqrt();
        let dips = series
            .samples
            .iter()
            .filter(|smp| smp.zeta_x < threshold)
            .count();
        assert!(dips > 10, "only {dips} samples below the 3 dB level");
        assert!(series.samples.iter().all(|smp| smp.zeta_p >= 1.0 - 1e-12));

        // The minus branch exchanges the roles.
        let m = base_solution(0.49, Branch::Minus);
        let mseries = quadrature_series(&m, 100.0, 200).unwrap();
        for (a, b) in series.samples.iter().zip(&mseries.samples) {
            assert_abs_diff_eq!(a.zeta_x, b.zeta_p, epsilon = 1e-10);
            assert_abs_diff_eq!(a.zeta_p, b.zeta_x, epsilon = 1e-10);
        }
    }

    #[test]
    fn squeezing_near_the_boundary_is_deeper_and_longer_lived() {
        // Same window for a coupling near g_t and one near omega/2.
        let p_near_gt = ModelParams::new(1.0, 0.0008, 1000, 0.447214 * 1.001).unwrap();
        let near_gt = solve_mean_field(&p_near_gt, Branch::Plus).unwrap();
        let p_near_half = ModelParams::new(1.0, 0.0008, 1000, 0.499).unwrap();
        let near_half = solve_mean_field(&p_near_half, Branch::Plus).unwrap();

        let threshold = 1.0 / 2f64.sqrt();
        let min_and_frac = |s: &MeanFieldSolution| {
            let series = quadrature_series(s, 100.0, 200).unwrap();
            let min = series
                .samples
                .iter()
                .map(|smp| smp.zeta_min)
                .fold(f64::INFINITY, f64::min);
            let below = series
                .samples
                .iter()
                .filter(|smp| smp.zeta_min < threshold)
                .count() as f64
                / series.samples.len() as f64;
            (min, below)
        };
        let (min_gt, frac_gt) = min_and_frac(&near_gt);
        let (min_half, frac_half) = min_and_frac(&near_half);
        assert!(min_half < min_gt);
        assert!(frac_half > frac_gt);
    }

    #[test]
    fn sample_invariants_hold_along_a_series() {
        let s = base_solution(0.49, Branch::Plus);
        let series = quadrature_series(&s, 40.0, 128).unwrap();
        let mut prev_t = -1.0;
        for smp in &series.samples {
            assert!(smp.t > prev_t);
            prev_t = smp.t;
            let lo = smp.zeta_x.min(smp.zeta_p);
            let hi = smp.zeta_x.max(smp.zeta_p);
            assert!(smp.zeta_min <= lo + 1e-12);
            assert!(hi <= smp.zeta_max + 1e-12);
            assert!(smp.zeta_min > 0.0);
            assert!((0.0..PI).contains(&smp.phi_min));
            assert_relative_eq!(smp.zeta_min * smp.zeta_max, 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn invalid_series_inputs_are_rejected() {
        let s = base_solution(0.49, Branch::Plus);
        assert!(quadrature_series(&s, 0.0, 200).is_err());
        assert!(quadrature_series(&s, -5.0, 200).is_err());
        assert!(quadrature_series(&s, 10.0, 49).is_err());
        assert!(coefficients(&s, -1.0).is_err());
    }
}
