//! The four subcommands. Each writes into the output directory and returns on the first error.

use std::path::Path;

use serde_json::json;

use crate::initial_data::{InitialData, Viscosity};
use crate::par;
use crate::quadrature::QuadratureSpec;
use crate::variational::{interfaces, limit_U, Interfaces, Side};
use crate::verify::jumps::TRACE_OFFSET;
use crate::verify::{
    convergence_study, flux_jump_at_source, interface_entropy_measure, inviscid_weak_residual, rankine_hugoniot_at_interface,
    CheckRecord, LimitField, VerifyError, VerifyReport,
};
use crate::verify::inviscid::INVISCID_GRID;
use crate::viscous::{boundary_g, field_point, pde_residual_theta, velocity, viscous_weak_residual, BoundaryTrace, ViscousError};

use super::config::{CheckConfig, CheckKind, RunConfig};
use super::output::{num, write_csv, write_json};
use super::CliError;

/// Half-width of the symmetric average used for the viscous velocity on the axis.
const AXIS_STEP: f64 = 1e-4;

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn data_of(cfg: &RunConfig) -> Result<InitialData, CliError> {
    cfg.data().map_err(CliError::Config)
}

fn missing(section: &str) -> CliError {
    CliError::Config(format!("missing [{section}] section"))
}

/// viscous_field.csv and boundary_trace.csv over the configured grid, one trace per viscosity.
pub fn cmd_viscous(cfg: &RunConfig, hash: &str, out: &Path) -> Result<(), CliError> {
    let v = cfg.viscous.as_ref().ok_or_else(|| missing("viscous"))?;
    let data = data_of(cfg)?;
    let q = &cfg.quadrature;
    let (xs, ts) = (v.x.points(), v.t.points());
    let points: Vec<(f64, f64)> = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect();
    let mut field_rows = Vec::with_capacity(points.len() * v.eps.len());
    let mut trace_rows = Vec::with_capacity(ts.len() * v.eps.len());
    for &e in &v.eps {
        let eps = Viscosity::new(e).map_err(|err| CliError::Config(err.to_string()))?;
        let trace = BoundaryTrace::new(&data, eps, v.t.max, q).map_err(numerical)?;
        let rows = par::try_map(&points, |&(x, t)| -> Result<Vec<String>, ViscousError> {
            let (log_theta, u) = if x == 0.0 {
                let g = boundary_g(&trace, t)?;
                let u = 0.5 * (velocity(&data, &trace, AXIS_STEP, t, q)? + velocity(&data, &trace, -AXIS_STEP, t, q)?);
                (g.ln(), u)
            } else {
                let p = field_point(&data, &trace, x, t, q)?;
                (p.theta.log_mag, p.u)
            };
            Ok(vec![num(x), num(t), num(e), num(log_theta), num(u)])
        })
        .map_err(numerical)?;
        field_rows.extend(rows);
        for &t in &ts {
            let g = boundary_g(&trace, t).map_err(numerical)?;
            trace_rows.push(vec![num(e), num(t), num(g), num(trace.f(t))]);
        }
    }
    write_csv(out, "viscous_field.csv", hash, &["x", "t", "eps", "theta_log", "u_eps"], &field_rows)?;
    write_csv(out, "boundary_trace.csv", hash, &["eps", "t", "g", "f"], &trace_rows)
}

/// limit_field.csv plus the interface files for the same time grid. Points on the axis are
/// evaluated just to the right of it, at x = 1e-5.
pub fn cmd_limit(cfg: &RunConfig, hash: &str, out: &Path) -> Result<(), CliError> {
    let l = cfg.limit.as_ref().ok_or_else(|| missing("limit"))?;
    let data = data_of(cfg)?;
    let s = &cfg.search;
    let ts = l.t.points();
    let points: Vec<(f64, f64)> = ts.iter().flat_map(|&t| l.x.points().into_iter().map(move |x| (x, t))).collect();
    let rows = par::try_map(&points, |&(x, t)| {
        let x = if x == 0.0 { TRACE_OFFSET } else { x };
        let side = Side::of(x).unwrap();
        let sol = limit_U(side, &data, x, t, s)?;
        let a = sol.active_result().argmin;
        Ok::<_, crate::variational::VariationalError>(vec![
            num(x),
            num(t),
            num(sol.value),
            num(sol.u),
            sol.active.label(),
            num(a.tau),
            num(a.u),
            num(a.xi),
            sol.tie.to_string(),
        ])
    })
    .map_err(numerical)?;
    write_csv(out, "limit_field.csv", hash, &["x", "t", "U", "u", "branch", "tau", "u_inner", "xi", "tie"], &rows)?;
    write_interfaces(&data, cfg, &ts, hash, out)
}

/// interfaces_right.csv (t, x2, x1) and interfaces_left.csv (t, y1, y2).
pub fn cmd_interfaces(cfg: &RunConfig, hash: &str, out: &Path) -> Result<(), CliError> {
    let i = cfg.interfaces.as_ref().ok_or_else(|| missing("interfaces"))?;
    let data = data_of(cfg)?;
    write_interfaces(&data, cfg, &i.t.points(), hash, out)
}

fn write_interfaces(data: &InitialData, cfg: &RunConfig, ts: &[f64], hash: &str, out: &Path) -> Result<(), CliError> {
    let s = &cfg.search;
    let both = par::try_map(ts, |&t| -> Result<(Interfaces, Interfaces), _> {
        Ok((interfaces(Side::Right, data, t, s)?, interfaces(Side::Left, data, t, s)?))
    })
    .map_err(|e: crate::variational::VariationalError| numerical(e))?;
    let right: Vec<Vec<String>> = both.iter().map(|(r, _)| vec![num(r.t), num(r.inner), num(r.outer)]).collect();
    let left: Vec<Vec<String>> = both.iter().map(|(_, l)| vec![num(l.t), num(l.outer), num(l.inner)]).collect();
    write_csv(out, "interfaces_right.csv", hash, &["t", "x2", "x1"], &right)?;
    write_csv(out, "interfaces_left.csv", hash, &["t", "y1", "y2"], &left)
}

/// Run every configured check and write verify_report.json.
pub fn cmd_verify(cfg: &RunConfig, hash: &str, out: &Path) -> Result<VerifyReport, CliError> {
    let data = data_of(cfg)?;
    let checks = cfg.verify.as_ref().map_or(&[][..], |v| &v.checks[..]);
    let mut records = Vec::with_capacity(checks.len());
    for (k, c) in checks.iter().enumerate() {
        records.push(run_check(cfg, &data, k, c).map_err(numerical)?);
    }
    let report = VerifyReport::new(hash.to_string(), records);
    write_json(out, "verify_report.json", &report)?;
    Ok(report)
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> Option<f64> {
    v.into_iter().map(f64::abs).reduce(f64::max)
}

fn run_check(cfg: &RunConfig, data: &InitialData, k: usize, c: &CheckConfig) -> Result<CheckRecord, VerifyError> {
    let q = &cfg.quadrature;
    let s = &cfg.search;
    let kind = c.kind.label();
    let (passed, tolerance, measured, detail) = match &c.kind {
        CheckKind::Convergence { points, eps, final_gap_tol } => {
            let reports = points
                .iter()
                .map(|p| convergence_study(data, p[0], p[1], eps, q, s))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = max_abs(reports.iter().map(|r| r.final_gap));
            let ok = reports.iter().all(|r| r.strictly_decreasing != Some(false) && r.final_gap <= *final_gap_tol);
            (ok, Some(*final_gap_tol), worst, json!(reports))
        }
        CheckKind::FluxJump { times, tol } => {
            let jumps = par::try_map(times, |&t| flux_jump_at_source(data, t, s))?;
            let worst = max_abs(jumps.iter().map(|j| j - 1.0));
            let ok = worst.is_none_or(|w| w <= *tol);
            (ok, Some(*tol), worst, json!({ "times": times, "jumps": jumps }))
        }
        CheckKind::RankineHugoniot { times, side, which, dt, tol } => {
            let side = Side::from(*side);
            let mut rows = Vec::new();
            let mut worst: Option<f64> = None;
            for &t in times {
                match rankine_hugoniot_at_interface(data, t, side, *which, *dt, s) {
                    Ok((fd, rh)) => {
                        let diff = (fd - rh).abs();
                        worst = Some(worst.map_or(diff, |w| w.max(diff)));
                        rows.push(json!({ "t": t, "fd_speed": fd, "rh_speed": rh, "diff": diff }));
                    }
                    Err(VerifyError::NotAShock { t, left, right }) => {
                        rows.push(json!({ "t": t, "not_a_shock": true, "left": left, "right": right }));
                    }
                    Err(e) => return Err(e),
                }
            }
            let ok = worst.is_none_or(|w| w <= *tol);
            (ok, Some(*tol), worst, json!({ "side": format!("{side:?}").to_lowercase(), "which": which, "dt": dt, "times": rows }))
        }
        CheckKind::InviscidWeak { test_functions, tol } => {
            let field = LimitField::new(data, *s);
            let r = test_functions
                .iter()
                .map(|phi| inviscid_weak_residual(data, &field, phi, INVISCID_GRID))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = max_abs(r.iter().copied());
            (worst.is_none_or(|w| w <= *tol), Some(*tol), worst, json!({ "residuals": r }))
        }
        CheckKind::PdeResidual { eps, points, hx, ht, tol } => {
            let e = Viscosity::new(*eps)?;
            let t_end = points.iter().map(|p| p[1]).fold(0.0, f64::max) + ht;
            // a trace coarser than the stencil puts its interpolation error into the second difference
            let fine = QuadratureSpec { time_nodes: q.time_nodes.max((2.0 / hx.min(*ht)).ceil() as usize), ..*q };
            let trace = BoundaryTrace::new(data, e, t_end, &fine)?;
            let r = par::try_map(points, |p| pde_residual_theta(data, &trace, p[0], p[1], *hx, *ht, &fine))?;
            let worst = max_abs(r.iter().copied());
            (worst.is_none_or(|w| w <= *tol), Some(*tol), worst, json!({ "eps": eps, "points": points, "residuals": r }))
        }
        CheckKind::ViscousWeak { eps, test_functions, tol, .. } => {
            let e = Viscosity::new(*eps)?;
            let t_end = test_functions.iter().map(|f| f.t_hi).fold(0.0, f64::max);
            let trace = BoundaryTrace::new(data, e, t_end, q)?;
            let grid = c.kind.weak_grid();
            let r = test_functions
                .iter()
                .map(|phi| viscous_weak_residual(data, &trace, phi, q, grid))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = max_abs(r.iter().copied());
            (worst.is_none_or(|w| w <= *tol), Some(*tol), worst, json!({ "eps": eps, "residuals": r }))
        }
        CheckKind::EntropyMeasure { times } => {
            let m = interface_entropy_measure(data, times, s)?;
            (true, None, Some(m), json!({ "times": times }))
        }
    };
    Ok(CheckRecord {
        name: c.name.clone().unwrap_or_else(|| format!("{kind}_{k}")),
        kind: kind.to_string(),
        acceptance: c.acceptance.unwrap_or_else(|| c.kind.default_acceptance()),
        passed,
        tolerance,
        measured,
        detail,
    })
}
