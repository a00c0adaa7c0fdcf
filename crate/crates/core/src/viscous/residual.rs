//! Consistency checks of the viscous solution: PDE residual of theta and the weak form in u.

use crate::initial_data::InitialData;
use crate::par;
use crate::quadrature::{GaussLegendre, QuadratureSpec};
use crate::verify::TestFunction;

use super::field::{heat, velocity};
use super::trace::BoundaryTrace;
use super::ViscousError;

/// Central-difference residual of theta_t = eps theta_xx - H(x) theta / (2 eps), divided by theta.
pub fn pde_residual_theta(
    data: &InitialData,
    trace: &BoundaryTrace,
    x: f64,
    t: f64,
    hx: f64,
    ht: f64,
    q: &QuadratureSpec,
) -> Result<f64, ViscousError> {
    if x == 0.0 || !(hx > 0.0 && hx < x.abs()) || !(ht > 0.0 && ht < t) {
        return Err(ViscousError::Domain(format!("bad stencil at ({x}, {t}) with steps ({hx}, {ht})")));
    }
    let e = trace.eps().get();
    let c = heat(data, trace, x, t, q)?.log_mag;
    let r = |xx: f64, tt: f64| -> Result<f64, ViscousError> { Ok((heat(data, trace, xx, tt, q)?.log_mag - c).exp()) };
    let theta_t = (r(x, t + ht)? - r(x, t - ht)?) / (2.0 * ht);
    let theta_xx = (r(x + hx, t)? - 2.0 + r(x - hx, t)?) / (hx * hx);
    let source = if x > 0.0 { 1.0 / (2.0 * e) } else { 0.0 };
    Ok(theta_t - e * theta_xx + source)
}

/// Tensor Gauss-Legendre layout: each direction cut into `panels` equal pieces of `nodes` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakGrid {
    pub panels: usize,
    pub nodes: usize,
}

impl Default for WeakGrid {
    fn default() -> Self {
        WeakGrid { panels: 4, nodes: 12 }
    }
}

/// Step for the central difference of u in x.
const VELOCITY_STEP: f64 = 1e-4;

/// int int [u phi_t + u^2/2 phi_x - eps u_x phi_x] dx dt + int phi(0, t) dt + int u0 phi(x, 0) dx.
pub fn viscous_weak_residual(
    data: &InitialData,
    trace: &BoundaryTrace,
    phi: &TestFunction,
    q: &QuadratureSpec,
    grid: WeakGrid,
) -> Result<f64, ViscousError> {
    let (t_lo, t_hi) = phi.time_range();
    if t_hi > trace.end() {
        return Err(ViscousError::OutOfRange { t: t_hi, end: trace.end() });
    }
    let e = trace.eps().get();
    let gl = GaussLegendre::new(grid.nodes);
    let x_cuts = panel_cuts(phi.x_lo, phi.x_hi, grid.panels, &[0.0], &data_cuts(data));
    let t_cuts = panel_cuts(t_lo, t_hi, grid.panels, &[], &[]);
    let mut points = Vec::new();
    for tw in t_cuts.windows(2) {
        for (t, wt) in gl.mapped(tw[0], tw[1]) {
            for xw in x_cuts.windows(2) {
                for (x, wx) in gl.mapped(xw[0], xw[1]) {
                    points.push((x, t, wx * wt));
                }
            }
        }
    }
    let terms = par::try_map(&points, |&(x, t, w)| -> Result<f64, ViscousError> {
        let (px, pt) = (phi.dx(x, t), phi.dt(x, t));
        if px == 0.0 && pt == 0.0 {
            return Ok(0.0);
        }
        let h = VELOCITY_STEP.min(0.25 * x.abs());
        let u = velocity(data, trace, x, t, q)?;
        let ux = (velocity(data, trace, x + h, t, q)? - velocity(data, trace, x - h, t, q)?) / (2.0 * h);
        Ok(w * (u * pt + 0.5 * u * u * px - e * ux * px))
    })?;
    let bulk: f64 = terms.iter().sum();
    let source: f64 = t_cuts.windows(2).map(|w| gl.integrate(w[0], w[1], |t| phi.value(0.0, t))).sum();
    let initial = initial_term(data, phi, &gl, grid.panels);
    Ok(bulk + source + initial)
}

/// int u0(x) phi(x, 0) dx, split at the jumps of u0.
pub fn initial_term(data: &InitialData, phi: &TestFunction, gl: &GaussLegendre, panels: usize) -> f64 {
    if phi.t_lo >= 0.0 {
        return 0.0;
    }
    let cuts = panel_cuts(phi.x_lo, phi.x_hi, panels, &[], &data_cuts(data));
    cuts.windows(2)
        .map(|w| {
            let v = data.value_at(0.5 * (w[0] + w[1]));
            v * gl.integrate(w[0], w[1], |x| phi.value(x, 0.0))
        })
        .sum()
}

fn data_cuts(data: &InitialData) -> Vec<f64> {
    data.breakpoints().to_vec()
}

/// Equal panels on [lo, hi], refined at every interior cut.
pub fn panel_cuts(lo: f64, hi: f64, panels: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=panels).map(|k| lo + (hi - lo) * k as f64 / panels as f64).collect();
    v.extend(a.iter().chain(b).copied().filter(|&c| c > lo && c < hi));
    v.sort_by(f64::total_cmp);
    v.dedup_by(|p, c| (*p - *c).abs() <= 1e-14 * (1.0 + c.abs()));
    v
}
