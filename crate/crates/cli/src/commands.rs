//! Implementations of the six subcommands.

use std::f64::consts::PI;

use dicke2p::analysis::{
    delta_sweep, epsilon_sweep, fit_through_origin, global_min_squeezing, lin_spaced,
    omega_a_expansion, period_measurement, phase_diagram, time_epsilon_surface, ParamTemplate,
    SweepAxis, SweepContext, SweepResult,
};
use dicke2p::dynamics::{coefficients, quadrature_series};
use dicke2p::model::{solve_mean_field, Branch, MeanFieldSolution, ModelParams};
use dicke2p::oracle::{evolve_covariance, minimize_energy_bruteforce, moments_from_covariance};

use crate::config::{range_values, Resolved, Spacing};
use crate::output::{emit, suffixed_path, Table};
use crate::{CliError, OracleCheckArgs, PhaseDiagramArgs, ScalingArgs, SeriesArgs, SweepArgs};

fn model_params(r: &Resolved, g: f64) -> Result<ModelParams, CliError> {
    ModelParams::new(r.omega, r.epsilon, r.n_qubits, g).map_err(CliError::from)
}

/// `solve`: the mean-field report for both order-parameter branches.
pub fn run_solve(r: &Resolved) -> Result<(), CliError> {
    let g = r.resolve_g()?;
    let params = model_params(r, g)?;
    let mut table = Table::new(
        "solve",
        vec![
            "branch", "phase", "g_t", "beta0", "g_beta", "theta_a", "omega_a", "e_g",
        ],
    );
    r.stamp(&mut table, Some(g));
    for branch in [Branch::Plus, Branch::Minus] {
        let s = solve_mean_field(&params, branch)?;
        table.row(vec![
            branch.to_string().into(),
            s.phase.tag.to_string().into(),
            s.phase.g_t.into(),
            s.beta0.into(),
            s.g_beta.into(),
            s.theta_a.into(),
            s.omega_a.into(),
            s.e_g.into(),
        ]);
    }
    emit(&table, r.format, r.out.as_deref())
}

fn series_table(
    r: &Resolved,
    s: &MeanFieldSolution,
    args: &SeriesArgs,
    branch: Branch,
) -> Result<Table, CliError> {
    let t_max = args.resolved_t_max(r)?;
    let resolution = args.resolved_resolution(r)?;
    let series = quadrature_series(s, t_max, resolution)?;
    let mut table = Table::new(
        "series",
        vec![
            "t", "a_q", "b_q", "c_q", "zeta_x", "zeta_p", "zeta_min", "phi_min",
        ],
    );
    r.stamp(&mut table, Some(s.params.g()));
    table.meta("branch", branch.to_string());
    table.meta("t_max", t_max);
    table.meta("resolution", resolution);
    table.meta("dt", series.dt);
    for smp in &series.samples {
        let c = coefficients(s, smp.t)?;
        table.row(vec![
            smp.t.into(),
            c.a_q.into(),
            c.b_q.into(),
            c.c_q.into(),
            smp.zeta_x.into(),
            smp.zeta_p.into(),
            smp.zeta_min.into(),
            smp.phi_min.into(),
        ]);
    }
    Ok(table)
}

/// `series`: squeezing time series; `--branch both` writes `+`/`-` files.
pub fn run_series(r: &Resolved, args: &SeriesArgs) -> Result<(), CliError> {
    let g = r.resolve_g()?;
    let params = model_params(r, g)?;
    let branches = r.branch.branches();
    if branches.len() == 2 {
        let Some(out) = &r.out else {
            return Err(CliError::Config(
                "--branch both writes two files; --out is required".into(),
            ));
        };
        for branch in branches {
            let s = solve_mean_field(&params, branch)?;
            let table = series_table(r, &s, args, branch)?;
            let path = suffixed_path(out, &branch.to_string());
            emit(&table, r.format, Some(&path))?;
        }
        Ok(())
    } else {
        let s = solve_mean_field(&params, branches[0])?;
        let table = series_table(r, &s, args, branches[0])?;
        emit(&table, r.format, r.out.as_deref())
    }
}

/// `sweep`: minimum squeezing against N epsilon, at a fixed time or over
/// a time grid (long format: `axis_name,axis_value,t,zeta_min`).
pub fn run_sweep(r: &Resolved, args: &SweepArgs) -> Result<(), CliError> {
    let rule = r.rule().ok_or_else(|| {
        CliError::Config("sweep requires --g-rule (near-half-omega or near-gt)".into())
    })?;
    let n_eps_range = args.resolved_n_eps_range(r)?;
    let n_eps = range_values(&n_eps_range, Spacing::Linear)?;
    let t_fixed = args.resolved_t(r)?;
    let t_range = args.resolved_t_range(r)?;

    let mut table = Table::new("sweep", vec!["axis_name", "axis_value", "t", "zeta_min"]);
    r.stamp(&mut table, None);
    table.meta("n_eps_range", n_eps_range.to_string());

    match (t_fixed, t_range) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "--t and --t-range are mutually exclusive".into(),
            ))
        }
        (Some(t), None) => {
            table.meta("t", t);
            let sweep = epsilon_sweep(r.omega, r.n_qubits, rule, &n_eps, t)?;
            for (value, zeta) in sweep.values.iter().zip(&sweep.zeta_min) {
                table.row(vec![
                    "n_eps".into(),
                    (*value).into(),
                    t.into(),
                    (*zeta).into(),
                ]);
            }
        }
        (None, Some(range)) => {
            table.meta("t_range", range.to_string());
            let times = range_values(&range, Spacing::Linear)?;
            let surface = time_epsilon_surface(r.omega, r.n_qubits, rule, &n_eps, &times)?;
            for (i, value) in surface.n_eps_values.iter().enumerate() {
                for (j, t) in surface.times.iter().enumerate() {
                    table.row(vec![
                        "n_eps".into(),
                        (*value).into(),
                        (*t).into(),
                        surface.at(i, j).into(),
                    ]);
                }
            }
        }
        (None, None) => {
            return Err(CliError::Config(
                "sweep needs either --t (fixed time) or --t-range".into(),
            ))
        }
    }
    emit(&table, r.format, r.out.as_deref())
}

/// `phase-diagram`: per-cell phase tags plus the boundary curve, written
/// as a second file (or second table on stdout).
pub fn run_phase_diagram(r: &Resolved, args: &PhaseDiagramArgs) -> Result<(), CliError> {
    let g_range = args.resolved_g_range(r)?;
    let n_eps_range = args.resolved_n_eps_range(r)?;
    let g = range_values(&g_range, Spacing::Linear)?;
    let n_eps = range_values(&n_eps_range, Spacing::Linear)?;
    let diagram = phase_diagram(r.omega, r.n_qubits, &g, &n_eps)?;

    let mut cells = Table::new("phase-diagram", vec!["n_eps", "g", "phase"]);
    r.stamp(&mut cells, None);
    cells.meta("g_range", g_range.to_string());
    cells.meta("n_eps_range", n_eps_range.to_string());
    for (i, ne) in diagram.n_eps_values.iter().enumerate() {
        for (j, gv) in diagram.g_values.iter().enumerate() {
            cells.row(vec![
                (*ne).into(),
                (*gv).into(),
                diagram.cell(i, j).to_string().into(),
            ]);
        }
    }

    let mut boundary = Table::new("phase-diagram-boundary", vec!["n_eps", "g_t"]);
    r.stamp(&mut boundary, None);
    for (ne, gt) in &diagram.boundary {
        boundary.row(vec![(*ne).into(), (*gt).into()]);
    }

    match &r.out {
        Some(out) => {
            emit(&cells, r.format, Some(out))?;
            emit(&boundary, r.format, Some(&suffixed_path(out, ".boundary")))
        }
        None => {
            emit(&cells, r.format, None)?;
            emit(&boundary, r.format, None)
        }
    }
}

/// `scaling`: zeta_min^2, measured period, and the excitation-frequency
/// expansion per delta, with the origin fit in the metadata block.
pub fn run_scaling(r: &Resolved, args: &ScalingArgs) -> Result<(), CliError> {
    if args.self_test {
        return run_scaling_self_test();
    }
    let range = args.resolved_delta_range(r)?;
    let spacing = args.resolved_spacing(r)?;
    let deltas = range_values(&range, spacing)?;
    let template = ParamTemplate {
        omega: r.omega,
        epsilon: r.epsilon,
        n_qubits: r.n_qubits,
    };

    let sweep = delta_sweep(&template, &deltas)?;
    let fit = fit_through_origin(&sweep)?;

    let mut rows = Vec::with_capacity(deltas.len());
    let mut period_law = Vec::with_capacity(deltas.len());
    for (&delta, &zeta) in sweep.values.iter().zip(&sweep.zeta_min) {
        let s = solve_mean_field(
            &template.with_g(template.omega / 2.0 - delta)?,
            Branch::Plus,
        )?;
        let series = quadrature_series(&s, 3.6 * PI / s.omega_a, 200)?;
        let t_measured = period_measurement(&series)?;
        let (exact, leading) = omega_a_expansion(&template, delta)?;
        period_law.push(t_measured * delta.sqrt());
        rows.push([delta, zeta * zeta, t_measured, exact, leading]);
    }
    let period_law_constant = period_law.iter().sum::<f64>() / period_law.len() as f64;

    let mut table = Table::new(
        "scaling",
        vec![
            "delta",
            "zeta_min_sq",
            "t_measured",
            "omega_a_exact",
            "omega_a_leading",
        ],
    );
    r.stamp(&mut table, None);
    table.meta("delta_range", range.to_string());
    table.meta(
        "spacing",
        match spacing {
            Spacing::Log => "log",
            Spacing::Linear => "linear",
        },
    );
    table.meta("summary_slope_m", fit.slope_m);
    table.meta("summary_r_squared", fit.r_squared);
    table.meta("summary_max_rel_residual", fit.max_rel_residual);
    table.meta("summary_period_law_constant", period_law_constant);
    for row in rows {
        table.row(row.iter().map(|&v| v.into()).collect());
    }
    emit(&table, r.format, r.out.as_deref())
}

/// `scaling --self-test`: the origin fit must recover an injected exact
/// line to 1e-6.
fn run_scaling_self_test() -> Result<(), CliError> {
    let deltas = lin_spaced(1e-4, 1e-2, 20);
    let sweep = SweepResult {
        axis: SweepAxis::Delta,
        values: deltas.clone(),
        zeta_min: deltas.iter().map(|d| (3.0 * d).sqrt()).collect(),
        fixed: SweepContext {
            omega: 1.0,
            n_qubits: 1000,
            epsilon: None,
            rule: None,
            t_fixed: None,
        },
    };
    let fit = fit_through_origin(&sweep)?;
    let err = (fit.slope_m - 3.0).abs();
    if err > 1e-6 {
        return Err(CliError::OracleMismatch(format!(
            "self-test slope {} deviates from the injected 3.0 by {err:.3e} (> 1e-6)",
            fit.slope_m
        )));
    }
    println!(
        "self-test ok: m = {} (|m - 3| = {err:.3e}), r_squared = {}",
        fit.slope_m, fit.r_squared
    );
    Ok(())
}

struct Check {
    name: String,
    parameter: f64,
    closed: f64,
    oracle: f64,
    /// Denominator of the comparison; 1 for absolute checks,
    /// max(1, |oracle|) for the relative order-parameter check.
    scale: f64,
    tolerance: f64,
}

impl Check {
    fn diff(&self) -> f64 {
        (self.closed - self.oracle).abs() / self.scale
    }

    fn passes(&self) -> bool {
        self.diff() <= self.tolerance
    }
}

/// `oracle-check`: regenerates the derived regression values and verifies
/// every closed form against its oracle; exit 4 on any tolerance breach.
pub fn run_oracle_check(r: &Resolved, args: &OracleCheckArgs) -> Result<(), CliError> {
    let perturb = args.perturb_gbeta.unwrap_or(0.0);
    let template = ParamTemplate {
        omega: r.omega,
        epsilon: r.epsilon,
        n_qubits: r.n_qubits,
    };
    let mut checks: Vec<Check> = Vec::new();

    // Order parameter: closed form against the energy-scan minimizer,
    // relative to max(1, |beta0|).
    for g in [0.45, 0.46, 0.47, 0.48, 0.49] {
        let p = template.with_g(g * r.omega)?;
        let closed = dicke2p::model::order_parameter(&p, Branch::Plus)?;
        let oracle = minimize_energy_bruteforce(&p)?.argmin;
        checks.push(Check {
            name: "order_parameter".into(),
            parameter: g,
            closed,
            oracle,
            scale: oracle.abs().max(1.0),
            tolerance: 1e-6,
        });
    }

    // Squeezing coefficients against covariance evolution, including the
    // optional perturbation hook on the closed-form side.
    for g in [0.45, 0.47, 0.49] {
        let p = template.with_g(g * r.omega)?;
        let s = solve_mean_field(&p, Branch::Plus)?;
        let mut closed_side = s;
        closed_side.g_beta += perturb;
        let dt = 2e-4 * PI / s.omega_a;
        let mut worst = 0.0f64;
        let mut det_worst = 0.0f64;
        for t in lin_spaced(0.0, 200.0, 201) {
            let closed = coefficients(&closed_side, t)?;
            let cov = evolve_covariance(&s, t, dt)?;
            let oracle = moments_from_covariance(&cov);
            worst = worst
                .max((closed.a_q - oracle.a_q).abs())
                .max((closed.b_q - oracle.b_q).abs())
                .max((closed.c_q - oracle.c_q).abs());
            det_worst = det_worst.max((cov.det() - 0.25).abs());
        }
        checks.push(Check {
            name: "coefficients_max_dev".into(),
            parameter: g,
            closed: worst,
            oracle: 0.0,
            scale: 1.0,
            tolerance: 1e-8,
        });
        checks.push(Check {
            name: "covariance_det".into(),
            parameter: g,
            closed: det_worst,
            oracle: 0.0,
            scale: 1.0,
            tolerance: 1e-8,
        });
    }

    // Global minimum squeezing against the minimum covariance eigenvalue
    // at the deepest point of the cycle.
    {
        let p = template.with_g(0.49 * r.omega)?;
        let s = solve_mean_field(&p, Branch::Plus)?;
        let mut closed_side = s;
        closed_side.g_beta += perturb;
        let zeta_sq = global_min_squeezing(&closed_side).powi(2);
        let t = PI / (2.0 * s.omega_a);
        let cov = evolve_covariance(&s, t, 2e-4 * PI / s.omega_a)?;
        checks.push(Check {
            name: "global_min_squeezing_sq".into(),
            parameter: 0.49,
            closed: zeta_sq,
            oracle: 2.0 * cov.min_eigenvalue(),
            scale: 1.0,
            tolerance: 1e-8,
        });
    }

    // Oscillation period of the measured series against pi / omega_a.
    // A normal-phase series is constant and has no period to measure.
    {
        let p = template.with_g(0.49 * r.omega)?;
        let s = solve_mean_field(&p, Branch::Plus)?;
        if s.g_beta != 0.0 {
            let series = quadrature_series(&s, 3.6 * PI / s.omega_a, 256)?;
            let measured = period_measurement(&series)?;
            let expected = PI / s.omega_a;
            checks.push(Check {
                name: "period_over_expected".into(),
                parameter: 0.49,
                closed: measured / expected,
                oracle: 1.0,
                scale: 1.0,
                tolerance: 1e-3,
            });
        }
    }

    let mut table = Table::new(
        "oracle-check",
        vec![
            "check",
            "parameter",
            "closed_form",
            "oracle",
            "diff",
            "tolerance",
            "status",
        ],
    );
    r.stamp(&mut table, None);
    table.meta("perturb_gbeta", perturb);
    for c in &checks {
        table.row(vec![
            c.name.as_str().into(),
            c.parameter.into(),
            c.closed.into(),
            c.oracle.into(),
            c.diff().into(),
            c.tolerance.into(),
            if c.passes() { "ok" } else { "FAIL" }.into(),
        ]);
    }
    emit(&table, r.format, r.out.as_deref())?;

    let worst = checks
        .iter()
        .max_by(|a, b| {
            (a.diff() / a.tolerance)
                .partial_cmp(&(b.diff() / b.tolerance))
                .expect("ratios are finite")
        })
        .expect("at least one check ran");
    if !worst.passes() {
        return Err(CliError::OracleMismatch(format!(
            "{} at parameter {}: |closed - oracle| = {:.3e} exceeds tolerance {:.1e}",
            worst.name,
            worst.parameter,
            worst.diff(),
            worst.tolerance
        )));
    }
    eprintln!(
        "oracle-check ok: {} checks, worst margin {:.3e} of tolerance",
        checks.len(),
        worst.diff() / worst.tolerance
    );
    Ok(())
}
