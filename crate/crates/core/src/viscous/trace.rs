//! Source kernel f(t) and boundary value g(t) = theta(0, t), tabulated on a grid uniform in sqrt(t).
//!
//! A jump of u0 at the origin puts a sqrt(t) term in both f and g; in r = sqrt(t) they are smooth.

use std::f64::consts::PI;

use crate::initial_data::{Direction, InitialData, Piece, Viscosity};
use crate::quadrature::{cut_points, integrate, QuadratureSpec};
use crate::specfun::besseli0_scaled;

use super::kernel::centered_moment_minus_one;
use super::ViscousError;

/// Monotone cubic (Fritsch-Carlson) interpolant on a uniform grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    dt: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(dt: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        assert!(n >= 2);
        let delta: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / dt).collect();
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            let (a, b) = (delta[k - 1], delta[k]);
            // equal spacing: weighted harmonic mean reduces to the plain one
            d[k] = if a * b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 };
        }
        d[0] = Self::edge(delta[0], if n > 2 { delta[1] } else { delta[0] });
        d[n - 1] = Self::edge(delta[n - 2], if n > 2 { delta[n - 3] } else { delta[n - 2] });
        Pchip { dt, y, d }
    }

    // three-point one-sided slope, limited to keep shape
    fn edge(d0: f64, d1: f64) -> f64 {
        let s = (3.0 * d0 - d1) / 2.0;
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    }

    pub fn end(&self) -> f64 {
        self.dt * (self.y.len() - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.y.len();
        let pos = (t / self.dt).clamp(0.0, (n - 1) as f64);
        let k = (pos.floor() as usize).min(n - 2);
        let s = pos - k as f64;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s).powi(2),
            s * (1.0 - s).powi(2),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * self.y[k] + h10 * self.dt * self.d[k] + h01 * self.y[k + 1] + h11 * self.dt * self.d[k + 1]
    }
}

/// f(t) for t > 0. The unit-boundary-value part is folded into the xi-integrals as (theta0 - 1).
pub fn source_kernel_f(data: &InitialData, eps: Viscosity, t: f64, q: &QuadratureSpec) -> Result<f64, ViscousError> {
    if !(t > 0.0) {
        return Err(ViscousError::Domain(format!("source kernel needs t > 0, got {t}")));
    }
    let fwd = data.pieces(Direction::Forward);
    let bwd = data.pieces(Direction::Backward);
    source_kernel_pieces(&fwd, &bwd, eps.get(), t, q)
}

fn source_kernel_pieces(fwd: &[Piece], bwd: &[Piece], e: f64, t: f64, q: &QuadratureSpec) -> Result<f64, ViscousError> {
    let right = centered_moment_minus_one(fwd, e, t, q)?;
    let left = centered_moment_minus_one(bwd, e, t, q)?;
    let v = ((-t / (2.0 * e)).exp() * right + left) / (2.0 * (e * t).powf(1.5));
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ViscousError::Overflow { what: "source kernel", t })
    }
}

/// lim_{t -> 0+} f(t): only the jump of u0 across the origin survives.
pub fn source_kernel_at_zero(data: &InitialData, eps: Viscosity) -> f64 {
    let left = data.value_at(-f64::MIN_POSITIVE);
    let right = data.value_at(0.0);
    PI.sqrt() * (left - right) / (2.0 * eps.get())
}

// (eps^{3/2}/pi) int_0^t (1 - e^{-tau/2eps}) tau^{-3/2} f(t - tau), with tau = s^2
fn convolution(f: &impl Fn(f64) -> f64, e: f64, t: f64, q: &QuadratureSpec) -> Result<f64, ViscousError> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let top = t.sqrt();
    let scale = (2.0 * e).sqrt();
    let breaks = cut_points(0.0, top, [scale, 4.0 * scale, 16.0 * scale]);
    let v = integrate(
        |s| {
            let kern = if s == 0.0 { 1.0 / e } else { -2.0 * (-(s * s) / (2.0 * e)).exp_m1() / (s * s) };
            kern * f((t - s * s).max(0.0))
        },
        &breaks,
        q.rel_tol,
        q.max_subdivisions,
    )?;
    Ok(e.powf(1.5) / PI * v)
}

/// Tabulated f and g for one viscosity and datum.
#[derive(Debug, Clone)]
pub struct BoundaryTrace {
    eps: Viscosity,
    t_end: f64,
    dr: f64,
    f: Pchip,
    g: Pchip,
    log_g_range: f64,
    quadrature: QuadratureSpec,
}

impl BoundaryTrace {
    /// The widest time step, at t_end, is min(1/time_nodes, eps/20) so the e^{-t/2eps} and
    /// I0(t/4eps) scales stay resolved.
    pub fn new(data: &InitialData, eps: Viscosity, t_end: f64, q: &QuadratureSpec) -> Result<Self, ViscousError> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(ViscousError::Domain(format!("trace horizon must be positive, got {t_end}")));
        }
        let e = eps.get();
        let step = (1.0 / q.time_nodes as f64).min(e / 20.0);
        // t_k = (k dr)^2, widest spacing 2 t_end / n
        let n = (2.0 * t_end / step).ceil().max(2.0) as usize;
        let dr = t_end.sqrt() / n as f64;
        let fwd = data.pieces(Direction::Forward);
        let bwd = data.pieces(Direction::Backward);
        let mut fv = Vec::with_capacity(n + 1);
        fv.push(source_kernel_at_zero(data, eps));
        for k in 1..=n {
            fv.push(source_kernel_pieces(&fwd, &bwd, e, (k as f64 * dr).powi(2), q)?);
        }
        let f = Pchip::new(dr, fv);
        let f_of_t = |t: f64| f.eval(t.sqrt());
        let mut gv = Vec::with_capacity(n + 1);
        gv.push(1.0);
        for k in 1..=n {
            let t = (k as f64 * dr).powi(2);
            let g = besseli0_scaled(t / (4.0 * e)) + convolution(&f_of_t, e, t, q)?;
            if !(g > 0.0) || !g.is_finite() {
                return Err(ViscousError::NonPositiveTrace { t, value: g });
            }
            gv.push(g);
        }
        let (lo, hi) = gv.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &g| (lo.min(g.ln()), hi.max(g.ln())));
        let g = Pchip::new(dr, gv);
        Ok(BoundaryTrace { eps, t_end, dr, f, g, log_g_range: hi - lo, quadrature: *q })
    }

    pub fn eps(&self) -> Viscosity {
        self.eps
    }

    pub fn end(&self) -> f64 {
        self.t_end
    }

    /// Spacing of the grid in sqrt(t).
    pub fn root_step(&self) -> f64 {
        self.dr
    }

    /// Tabulation times.
    pub fn grid(&self) -> Vec<f64> {
        (0..self.g.values().len()).map(|k| (k as f64 * self.dr).powi(2)).collect()
    }

    pub fn f_values(&self) -> &[f64] {
        self.f.values()
    }

    pub fn g_values(&self) -> &[f64] {
        self.g.values()
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    /// Spread of log g over the grid, used to size boundary-integral windows.
    pub fn log_g_range(&self) -> f64 {
        self.log_g_range
    }

    /// Interpolated f.
    pub fn f(&self, t: f64) -> f64 {
        self.f.eval(t.max(0.0).sqrt())
    }

    /// Interpolated g, the boundary density used by the field evaluators.
    pub fn g(&self, t: f64) -> f64 {
        self.g.eval(t.max(0.0).sqrt())
    }

    fn check_range(&self, t: f64) -> Result<(), ViscousError> {
        if !(t >= 0.0) || t > self.end() * (1.0 + 1e-12) {
            return Err(ViscousError::OutOfRange { t, end: self.end() });
        }
        Ok(())
    }
}

/// g(t) evaluated directly: scaled I0 plus the convolution against interpolated f.
pub fn boundary_g(trace: &BoundaryTrace, t: f64) -> Result<f64, ViscousError> {
    trace.check_range(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let e = trace.eps.get();
    Ok(besseli0_scaled(t / (4.0 * e)) + convolution(&|s| trace.f(s), e, t, &trace.quadrature)?)
}
