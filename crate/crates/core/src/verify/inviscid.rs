//! Weak-form residual of u_t + (u^2/2)_x = delta(x) for a piecewise smooth field.

use crate::initial_data::InitialData;
use crate::par;
use crate::quadrature::GaussLegendre;
use crate::variational::{interfaces, limit_U, SearchSpec, Side};
use crate::viscous::residual::{initial_term, panel_cuts};
use crate::viscous::WeakGrid;

use super::test_function::TestFunction;
use super::VerifyError;

/// A velocity field together with the places where quadrature cells must be cut.
pub trait InviscidField: Sync {
    fn u(&self, x: f64, t: f64) -> Result<f64, VerifyError>;

    /// Discontinuities and kinks of u(., t) inside (lo, hi).
    fn cuts(&self, t: f64, lo: f64, hi: f64) -> Result<Vec<f64>, VerifyError>;
}

/// Closed-form field with known cut positions.
pub struct PiecewiseField<U, C> {
    pub u: U,
    pub cuts: C,
}

impl<U, C> InviscidField for PiecewiseField<U, C>
where
    U: Fn(f64, f64) -> f64 + Sync,
    C: Fn(f64) -> Vec<f64> + Sync,
{
    fn u(&self, x: f64, t: f64) -> Result<f64, VerifyError> {
        Ok((self.u)(x, t))
    }

    fn cuts(&self, t: f64, lo: f64, hi: f64) -> Result<Vec<f64>, VerifyError> {
        Ok((self.cuts)(t).into_iter().filter(|&c| c > lo && c < hi).collect())
    }
}

/// Default layout for the inviscid residual; the field is rough, so panels are finer than for the viscous one.
pub const INVISCID_GRID: WeakGrid = WeakGrid { panels: 8, nodes: 12 };

/// Jump size below which a scan interval is not refined.
pub const JUMP_THRESHOLD: f64 = 1e-3;
const CUT_WIDTH: f64 = 1e-9;

/// The inviscid limit from the variational module.
pub struct LimitField<'a> {
    pub data: &'a InitialData,
    pub search: SearchSpec,
    /// points per unit length in the jump scan, between 100 and 400 per call
    pub scan: usize,
}

impl<'a> LimitField<'a> {
    pub fn new(data: &'a InitialData, search: SearchSpec) -> Self {
        LimitField { data, search, scan: 200 }
    }
}

impl InviscidField for LimitField<'_> {
    fn u(&self, x: f64, t: f64) -> Result<f64, VerifyError> {
        let side = Side::of(x).ok_or_else(|| VerifyError::Domain("the limit field is two-valued at x = 0".into()))?;
        Ok(limit_U(side, self.data, x, t, &self.search)?.u)
    }

    fn cuts(&self, t: f64, lo: f64, hi: f64) -> Result<Vec<f64>, VerifyError> {
        let mut out = Vec::new();
        for side in [Side::Left, Side::Right] {
            let ifc = interfaces(side, self.data, t, &self.search)?;
            out.extend([ifc.inner, ifc.outer].into_iter().filter(|&c| c != 0.0 && c > lo && c < hi));
        }
        out.extend(detect_jumps(|x| self.u(x, t), lo, hi, self.scan)?);
        Ok(out)
    }
}

/// Scan u on (lo, hi) and bisect intervals whose increment stands out from both neighbours.
pub fn detect_jumps(u: impl Fn(f64) -> Result<f64, VerifyError>, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, VerifyError> {
    let n = n.clamp(100, 400);
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).filter(|&x| x != 0.0).collect();
    let us = xs.iter().map(|&x| u(x)).collect::<Result<Vec<_>, _>>()?;
    let du: Vec<f64> = us.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut out = Vec::new();
    for k in 0..du.len() {
        let (mut a, mut b) = (xs[k], xs[k + 1]);
        if a < 0.0 && b > 0.0 {
            continue;
        }
        let prev = if k > 0 { du[k - 1] } else { 0.0 };
        let next = du.get(k + 1).copied().unwrap_or(0.0);
        if du[k] <= JUMP_THRESHOLD + 2.0 * prev.min(next) {
            continue;
        }
        let (mut ua, mut ub) = (us[k], us[k + 1]);
        while b - a > CUT_WIDTH {
            let m = 0.5 * (a + b);
            let um = u(m)?;
            if (um - ua).abs() >= (ub - um).abs() {
                b = m;
                ub = um;
            } else {
                a = m;
                ua = um;
            }
        }
        if (ub - ua).abs() > JUMP_THRESHOLD {
            out.push(0.5 * (a + b));
        }
    }
    Ok(out)
}

/// int int [u phi_t + u^2/2 phi_x] dx dt + int phi(0, t) dt + int u0 phi(x, 0) dx.
pub fn inviscid_weak_residual(
    data: &InitialData,
    field: &impl InviscidField,
    phi: &TestFunction,
    grid: WeakGrid,
) -> Result<f64, VerifyError> {
    let (t_lo, t_hi) = phi.time_range();
    let gl = GaussLegendre::new(grid.nodes);
    let t_nodes: Vec<(f64, f64)> = panel_cuts(t_lo, t_hi, grid.panels, &[], &[])
        .windows(2)
        .flat_map(|w| gl.mapped(w[0], w[1]).collect::<Vec<_>>())
        .collect();
    let rows = par::try_map(&t_nodes, |&(t, wt)| -> Result<f64, VerifyError> {
        let cuts = field.cuts(t, phi.x_lo, phi.x_hi)?;
        let cells = panel_cuts(phi.x_lo, phi.x_hi, grid.panels, &[0.0], &cuts);
        let mut row = 0.0;
        for c in cells.windows(2) {
            for (x, wx) in gl.mapped(c[0], c[1]) {
                let (px, pt) = (phi.dx(x, t), phi.dt(x, t));
                if px == 0.0 && pt == 0.0 {
                    continue;
                }
                let u = field.u(x, t)?;
                row += wx * (u * pt + 0.5 * u * u * px);
            }
        }
        Ok(wt * row)
    })?;
    let bulk: f64 = rows.iter().sum();
    let source: f64 = panel_cuts(t_lo, t_hi, grid.panels, &[], &[])
        .windows(2)
        .map(|w| gl.integrate(w[0], w[1], |t| phi.value(0.0, t)))
        .sum();
    Ok(bulk + source + initial_term(data, phi, &gl, grid.panels))
}
