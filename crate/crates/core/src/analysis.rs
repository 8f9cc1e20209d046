//! Phase diagrams, parameter sweeps, and the critical scaling of the
//! squeezing magnitude and oscillation period near the unbounded region.

use std::f64::consts::PI;

use crate::dynamics::{coefficients, min_squeezing, SqueezingSeries};
use crate::error::{Error, Result};
use crate::model::{
    classify_phase, critical_coupling, solve_mean_field, Branch, MeanFieldSolution, ModelParams,
    PhaseTag,
};
use crate::par;

/// How the coupling is chosen when a sweep varies `N epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GRule {
    /// Pin the coupling just below the unbounded boundary,
    /// `g = omega/2 - delta_near`.
    NearHalfOmega { delta_near: f64 },
    /// Track the phase boundary from above, `g = g_t (1 + rel_offset)`.
    NearGt { rel_offset: f64 },
}

impl GRule {
    pub fn resolve(&self, omega: f64, g_t: f64) -> f64 {
        match *self {
            GRule::NearHalfOmega { delta_near } => omega / 2.0 - delta_near,
            GRule::NearGt { rel_offset } => g_t * (1.0 + rel_offset),
        }
    }
}

impl std::fmt::Display for GRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GRule::NearHalfOmega { delta_near } => {
                write!(f, "near-half-omega(delta_near={delta_near})")
            }
            GRule::NearGt { rel_offset } => write!(f, "near-gt(r={rel_offset})"),
        }
    }
}

/// Fixed inputs of a sweep: everything that is not the swept axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepContext {
    pub omega: f64,
    pub n_qubits: u64,
    /// Qubit frequency when it is held fixed (delta sweeps).
    pub epsilon: Option<f64>,
    /// Coupling rule when the coupling tracks the axis (epsilon sweeps).
    pub rule: Option<GRule>,
    /// Evaluation time when the sweep is taken at a fixed instant.
    pub t_fixed: Option<f64>,
}

/// Which quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Distance `delta = omega/2 - g` from the unbounded boundary.
    Delta,
    /// The product `N epsilon` in units of `omega`.
    NEps,
    /// Time.
    Time,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Delta => "delta",
            SweepAxis::NEps => "n_eps",
            SweepAxis::Time => "t",
        }
    }
}

/// One-dimensional sweep result: the minimum squeezing parameter per point.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub zeta_min: Vec<f64>,
    pub fixed: SweepContext,
}

/// Zero-intercept fit of the squared minimum squeezing against `delta`.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub deltas: Vec<f64>,
    pub zeta_min_sq: Vec<f64>,
    pub slope_m: f64,
    pub max_rel_residual: f64,
    pub r_squared: f64,
}

/// Phase tag of one cell in the phase diagram, with the unbounded region
/// marked explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRegion {
    Normal,
    Superradiant,
    Unbounded,
}

impl std::fmt::Display for PhaseRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseRegion::Normal => write!(f, "Normal"),
            PhaseRegion::Superradiant => write!(f, "Superradiant"),
            PhaseRegion::Unbounded => write!(f, "Unbounded"),
        }
    }
}

/// Phase tags over a `(N epsilon, g)` grid plus the critical boundary
/// curve, everything in units of `omega`.
#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub g_values: Vec<f64>,
    pub n_eps_values: Vec<f64>,
    /// Row-major over `n_eps` (outer) and `g` (inner).
    pub cells: Vec<PhaseRegion>,
    /// `(n_eps, g_t)` pairs of the phase boundary.
    pub boundary: Vec<(f64, f64)>,
}

impl PhaseDiagram {
    pub fn cell(&self, i_eps: usize, i_g: usize) -> PhaseRegion {
        self.cells[i_eps * self.g_values.len() + i_g]
    }
}

/// Squeezing over a `(N epsilon, t)` grid for one coupling rule.
#[derive(Debug, Clone)]
pub struct SqueezingSurface {
    pub n_eps_values: Vec<f64>,
    pub times: Vec<f64>,
    /// Row-major over `n_eps` (outer) and `t` (inner).
    pub zeta_min: Vec<f64>,
    pub fixed: SweepContext,
}

impl SqueezingSurface {
    pub fn at(&self, i_eps: usize, i_t: usize) -> f64 {
        self.zeta_min[i_eps * self.times.len() + i_t]
    }

    pub fn row(&self, i_eps: usize) -> &[f64] {
        let n = self.times.len();
        &self.zeta_min[i_eps * n..(i_eps + 1) * n]
    }
}

/// Classifies every `(N epsilon, g)` grid cell and attaches the boundary
/// curve `g_t = sqrt(n_eps)/2` (in units of `omega`).
///
/// Cells at or beyond `g = omega/2` are marked [`PhaseRegion::Unbounded`].
pub fn phase_diagram(
    omega: f64,
    n_qubits: u64,
    g_over_omega: &[f64],
    n_eps_over_omega: &[f64],
) -> Result<PhaseDiagram> {
    let points: Vec<(f64, f64)> = n_eps_over_omega
        .iter()
        .flat_map(|&ne| g_over_omega.iter().map(move |&g| (ne, g)))
        .collect();
    let cells = par::try_map(&points, |&(n_eps, g)| {
        let epsilon = n_eps * omega / n_qubits as f64;
        match ModelParams::new(omega, epsilon, n_qubits, g * omega) {
            Ok(p) => Ok(match classify_phase(&p).tag {
                PhaseTag::Normal => PhaseRegion::Normal,
                PhaseTag::Superradiant => PhaseRegion::Superradiant,
            }),
            Err(Error::UnboundedRegion { .. }) => Ok(PhaseRegion::Unbounded),
            Err(e) => Err(e),
        }
    })?;
    let boundary = n_eps_over_omega
        .iter()
        .map(|&ne| {
            let epsilon = ne * omega / n_qubits as f64;
            let p = ModelParams::new(omega, epsilon, n_qubits, 0.0)?;
            Ok((ne, critical_coupling(&p) / omega))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram {
        g_values: g_over_omega.to_vec(),
        n_eps_values: n_eps_over_omega.to_vec(),
        cells,
        boundary,
    })
}

/// Global minimum of the squeezing parameter over time.
///
/// The squared minimum is a decreasing function of `C(t)` alone, so the
/// global minimum sits where `cos(2 omega_a t) = -1`:
/// `zeta_min^2 = C_max - sqrt(C_max^2 - 1)` with
/// `C_max = (omega^2 + 4 g_beta^2) / omega_a^2`. Evaluated through the
/// reciprocal form, which stays accurate as `C_max` diverges.
pub fn global_min_squeezing(s: &MeanFieldSolution) -> f64 {
    if s.g_beta == 0.0 {
        return 1.0;
    }
    let omega = s.params.omega();
    let c_max = (omega * omega + 4.0 * s.g_beta * s.g_beta) / (s.omega_a * s.omega_a);
    let zeta_sq = 1.0 / (c_max + (c_max * c_max - 1.0).sqrt());
    zeta_sq.sqrt()
}

/// Template for sweeps that vary the coupling while the physical inputs
/// stay fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamTemplate {
    pub omega: f64,
    pub epsilon: f64,
    pub n_qubits: u64,
}

impl ParamTemplate {
    pub fn with_g(&self, g: f64) -> Result<ModelParams> {
        ModelParams::new(self.omega, self.epsilon, self.n_qubits, g)
    }
}

/// Minimum squeezing (over both angle and time) as a function of the
/// distance `delta = omega/2 - g` from the unbounded boundary.
///
/// Every point must be superradiant; `deltas` must be positive and
/// strictly increasing.
pub fn delta_sweep(template: &ParamTemplate, deltas: &[f64]) -> Result<SweepResult> {
    ensure_increasing_positive(deltas, "deltas")?;
    let zeta_min = par::try_map(deltas, |&delta| {
        let g = template.omega / 2.0 - delta;
        let p = template.with_g(g)?;
        let phase = classify_phase(&p);
        if phase.tag == PhaseTag::Normal {
            return Err(Error::NotSuperradiant {
                detail: format!("delta = {delta} gives g = {g} <= g_t = {}", phase.g_t),
            });
        }
        let s = solve_mean_field(&p, Branch::Plus)?;
        Ok(global_min_squeezing(&s))
    })?;
    Ok(SweepResult {
        axis: SweepAxis::Delta,
        values: deltas.to_vec(),
        zeta_min,
        fixed: SweepContext {
            omega: template.omega,
            n_qubits: template.n_qubits,
            epsilon: Some(template.epsilon),
            rule: None,
            t_fixed: None,
        },
    })
}

/// Least-squares slope through the origin of `zeta_min^2` against the
/// sweep axis, with residual statistics.
pub fn fit_through_origin(sweep: &SweepResult) -> Result<ScalingFit> {
    const MIN_POINTS: usize = 5;
    let n = sweep.values.len();
    if n < MIN_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_POINTS,
            got: n,
        });
    }
    ensure_increasing_positive(&sweep.values, "fit axis")?;
    let y: Vec<f64> = sweep.zeta_min.iter().map(|z| z * z).collect();
    let sxy: f64 = sweep.values.iter().zip(&y).map(|(x, y)| x * y).sum();
    let sxx: f64 = sweep.values.iter().map(|x| x * x).sum();
    let slope_m = sxy / sxx;
    if !(slope_m > 0.0) {
        return Error::domain_err("slope", format!("fitted slope {slope_m} is not positive"));
    }
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    let mut max_rel_residual: f64 = 0.0;
    for (&x, &yi) in sweep.values.iter().zip(&y) {
        let r = yi - slope_m * x;
        ss_res += r * r;
        ss_tot += yi * yi;
        max_rel_residual = max_rel_residual.max((r / yi).abs());
    }
    Ok(ScalingFit {
        deltas: sweep.values.clone(),
        zeta_min_sq: y,
        slope_m,
        max_rel_residual,
        // Coefficient of determination of the zero-intercept model.
        r_squared: 1.0 - ss_res / ss_tot,
    })
}

/// Oscillation period estimated from successive minima of `zeta_min(t)`,
/// each refined by parabolic interpolation.
///
/// The series must cover at least three periods sampled at 200+ points per
/// period; the result equals `pi / omega_a` to well within half a percent.
pub fn period_measurement(series: &SqueezingSeries) -> Result<f64> {
    let expected = PI / series.solution.omega_a;
    let points_per_period = expected / series.dt;
    if points_per_period < 199.5 {
        return Error::domain_err(
            "resolution",
            format!("{points_per_period:.1} points per period; need at least 200"),
        );
    }
    let v: Vec<f64> = series.samples.iter().map(|s| s.zeta_min).collect();
    let mut minima = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if v[i] < v[i - 1] && v[i] < v[i + 1] {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let offset = if denom > 0.0 {
                0.5 * (v[i - 1] - v[i + 1]) / denom
            } else {
                0.0
            };
            minima.push(series.samples[i].t + offset * series.dt);
        }
    }
    if minima.len() < 3 {
        return Err(Error::TooFewPeriods {
            found: minima.len(),
            needed: 3,
        });
    }
    let spans: Vec<f64> = minima.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(spans.iter().sum::<f64>() / spans.len() as f64)
}

/// Exact excitation frequency next to its leading-order expansion
/// `2 sqrt(delta) sqrt(omega^3 / (omega^2 - N^2 epsilon^2))` in the
/// distance from the unbounded boundary. The ratio tends to one as
/// `delta` tends to zero.
pub fn omega_a_expansion(template: &ParamTemplate, delta: f64) -> Result<(f64, f64)> {
    let omega = template.omega;
    let n_eps = template.epsilon * template.n_qubits as f64;
    let denom = omega * omega - n_eps * n_eps;
    if denom <= 0.0 {
        return Error::domain_err(
            "leading-order expansion",
            format!("omega^2 - (N epsilon)^2 = {denom} must be positive"),
        );
    }
    let p = template.with_g(omega / 2.0 - delta)?;
    let phase = classify_phase(&p);
    if phase.tag == PhaseTag::Normal {
        return Err(Error::NotSuperradiant {
            detail: format!("delta = {delta} lands at or below g_t = {}", phase.g_t),
        });
    }
    let s = solve_mean_field(&p, Branch::Plus)?;
    let leading = 2.0 * delta.sqrt() * (omega.powi(3) / denom).sqrt();
    Ok((s.omega_a, leading))
}

fn solve_for_n_eps(
    omega: f64,
    n_qubits: u64,
    rule: GRule,
    n_eps: f64,
) -> Result<MeanFieldSolution> {
    let epsilon = n_eps * omega / n_qubits as f64;
    // g_t = omega sqrt(n_eps) / 2 in units where n_eps is given over omega.
    let g_t = omega * n_eps.sqrt() / 2.0;
    let g = rule.resolve(omega, g_t);
    let p = ModelParams::new(omega, epsilon, n_qubits, g)?;
    solve_mean_field(&p, Branch::Plus)
}

/// Minimum squeezing at a fixed time as `N epsilon` varies, with the
/// coupling chosen per point by `rule`. Every point must be superradiant.
pub fn epsilon_sweep(
    omega: f64,
    n_qubits: u64,
    rule: GRule,
    n_eps_values: &[f64],
    t_fixed: f64,
) -> Result<SweepResult> {
    ensure_increasing_positive(n_eps_values, "n_eps values")?;
    if !(t_fixed >= 0.0) {
        return Error::domain_err("t", format!("time must be non-negative, got {t_fixed}"));
    }
    let zeta_min = par::try_map(n_eps_values, |&n_eps| {
        let s = solve_for_n_eps(omega, n_qubits, rule, n_eps)?;
        if s.phase.tag == PhaseTag::Normal {
            return Err(Error::NotSuperradiant {
                detail: format!(
                    "N epsilon = {n_eps} with {rule} gives g = {} <= g_t = {}",
                    s.params.g(),
                    s.phase.g_t
                ),
            });
        }
        Ok(min_squeezing(&coefficients(&s, t_fixed)?))
    })?;
    Ok(SweepResult {
        axis: SweepAxis::NEps,
        values: n_eps_values.to_vec(),
        zeta_min,
        fixed: SweepContext {
            omega,
            n_qubits,
            epsilon: None,
            rule: Some(rule),
            t_fixed: Some(t_fixed),
        },
    })
}

/// Minimum squeezing over a `(N epsilon, t)` grid. Normal-phase rows are
/// filled with ones (no squeezing there); couplings that land in the
/// unbounded region propagate as errors.
pub fn time_epsilon_surface(
    omega: f64,
    n_qubits: u64,
    rule: GRule,
    n_eps_values: &[f64],
    times: &[f64],
) -> Result<SqueezingSurface> {
    ensure_increasing_positive(n_eps_values, "n_eps values")?;
    ensure_increasing(times, "times")?;
    if times.first().copied().unwrap_or(0.0) < 0.0 {
        return Error::domain_err("times", "times must be non-negative");
    }
    let rows = par::try_map(n_eps_values, |&n_eps| {
        let s = solve_for_n_eps(omega, n_qubits, rule, n_eps)?;
        if s.phase.tag == PhaseTag::Normal {
            return Ok(vec![1.0; times.len()]);
        }
        times
            .iter()
            .map(|&t| Ok(min_squeezing(&coefficients(&s, t)?)))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(SqueezingSurface {
        n_eps_values: n_eps_values.to_vec(),
        times: times.to_vec(),
        zeta_min: rows.concat(),
        fixed: SweepContext {
            omega,
            n_qubits,
            epsilon: None,
            rule: Some(rule),
            t_fixed: None,
        },
    })
}

fn ensure_increasing(values: &[f64], what: &'static str) -> Result<()> {
    if values.is_empty() {
        return Error::domain_err(what, "must not be empty");
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Error::domain_err(what, "must be strictly increasing");
    }
    Ok(())
}

fn ensure_increasing_positive(values: &[f64], what: &'static str) -> Result<()> {
    ensure_increasing(values, what)?;
    if values[0] <= 0.0 {
        return Error::domain_err(what, "must be positive");
    }
    Ok(())
}

/// `count` log-spaced values between `lo` and `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln();
    (0..count)
        .map(|i| lo * (ratio * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// `count` linearly spaced values between `lo` and `hi` inclusive.
pub fn lin_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}
