//! Jump conditions of the inviscid limit: the source at x = 0 and the moving interfaces.

use serde::{Deserialize, Serialize};

use crate::initial_data::InitialData;
use crate::variational::{interfaces, limit_U, SearchSpec, Side};

use super::VerifyError;

/// Distance from x = 0 at which one-sided values are sampled.
pub const TRACE_OFFSET: f64 = 1e-5;
/// One-sided values closer than this count as continuous.
pub const SHOCK_THRESHOLD: f64 = 1e-3;
/// Sign tolerance for the entropy diagnostic.
const SIGN_TOL: f64 = 1e-6;

/// (u(0+, t), u(0-, t)), linearly extrapolated from |x| = 1e-5 and 2e-5.
pub fn one_sided_limits(data: &InitialData, t: f64, search: &SearchSpec) -> Result<(f64, f64), VerifyError> {
    let at = |side: Side, x: f64| -> Result<f64, VerifyError> { Ok(limit_U(side, data, x, t, search)?.u) };
    let d = TRACE_OFFSET;
    let plus = 2.0 * at(Side::Right, d)? - at(Side::Right, 2.0 * d)?;
    let minus = 2.0 * at(Side::Left, -d)? - at(Side::Left, -2.0 * d)?;
    Ok((plus, minus))
}

/// u(0+)^2/2 - u(0-)^2/2; the unit source forces this to 1.
pub fn flux_jump_at_source(data: &InitialData, t: f64, search: &SearchSpec) -> Result<f64, VerifyError> {
    let (p, m) = one_sided_limits(data, t, search)?;
    Ok(0.5 * p * p - 0.5 * m * m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Inner,
    Outer,
}

fn interface_at(data: &InitialData, side: Side, which: Which, t: f64, search: &SearchSpec) -> Result<(f64, bool), VerifyError> {
    let ifc = interfaces(side, data, t, search)?;
    Ok(match which {
        Which::Inner => (ifc.inner, ifc.inner_degenerate),
        Which::Outer => (ifc.outer, ifc.outer == 0.0),
    })
}

/// (speed from differencing the interface in time, speed (u- + u+)/2 from the jump condition).
pub fn rankine_hugoniot_at_interface(
    data: &InitialData,
    t: f64,
    side: Side,
    which: Which,
    dt: f64,
    search: &SearchSpec,
) -> Result<(f64, f64), VerifyError> {
    if !(dt > 0.0 && dt < t) {
        return Err(VerifyError::Domain(format!("need 0 < dt < t, got dt = {dt}, t = {t}")));
    }
    let (x, degenerate) = interface_at(data, side, which, t, search)?;
    let d = TRACE_OFFSET;
    let on_side = |y: f64| Side::of(y) == Some(side);
    if degenerate || !on_side(x - d) || !on_side(x + d) {
        return Err(VerifyError::NotAShock { t, left: f64::NAN, right: f64::NAN });
    }
    let left = limit_U(side, data, x - d, t, search)?.u;
    let right = limit_U(side, data, x + d, t, search)?.u;
    if (left - right).abs() <= SHOCK_THRESHOLD {
        return Err(VerifyError::NotAShock { t, left, right });
    }
    let later = interface_at(data, side, which, t + dt, search)?.0;
    let earlier = interface_at(data, side, which, t - dt, search)?.0;
    Ok(((later - earlier) / (2.0 * dt), 0.5 * (left + right)))
}

/// Fraction of times with u(0+) > 0 and u(0-) < 0.
pub fn interface_entropy_measure(data: &InitialData, t_grid: &[f64], search: &SearchSpec) -> Result<f64, VerifyError> {
    if t_grid.is_empty() {
        return Ok(0.0);
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || !(t_grid[0] > 0.0) {
        return Err(VerifyError::Domain("time grid must be positive and increasing".into()));
    }
    let mut hits = 0usize;
    for &t in t_grid {
        let (p, m) = one_sided_limits(data, t, search)?;
        if p > SIGN_TOL && m < -SIGN_TOL {
            hits += 1;
        }
    }
    Ok(hits as f64 / t_grid.len() as f64)
}
