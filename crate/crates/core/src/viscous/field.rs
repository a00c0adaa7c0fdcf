//! theta = R (x > 0) or L (x < 0) and the velocity u = -2 eps theta_x / theta.
//!
//! Both half-lines share one shape in a = |x|:
//!   theta = D_t P(a) + Q(a),
//!   P(a) = (4 pi eps t)^{-1/2} int_0^inf e^{-(xi-a)^2/4eps t} (1 - e^{-a xi/eps t}) theta0(+-xi) dxi,
//!   Q(a) = (2/sqrt pi) int_{z0}^inf g(t - s) D(s) e^{-z^2} dz,  s = a^2/(4 eps z^2), z0 = a/(2 sqrt(eps t)),
//! with D(s) = e^{-s/2eps} on the damped right half-line and 1 on the left.

use std::f64::consts::PI;

use crate::initial_data::{Direction, InitialData, Viscosity};
use crate::quadrature::{cut_points, integrate_log, QuadratureSpec};
use crate::specfun::{log_add, SignedLog};

use super::kernel::gauss_pieces;
use super::trace::BoundaryTrace;
use super::ViscousError;

/// theta(x, t) as sign * exp(log_mag).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogHeatValue {
    pub sign: f64,
    pub log_mag: f64,
}

impl LogHeatValue {
    /// -2 eps log theta; meaningful only for positive theta.
    pub fn potential(&self, eps: Viscosity) -> f64 {
        -2.0 * eps.get() * self.log_mag
    }

    pub fn as_signed(&self) -> SignedLog {
        SignedLog::new(self.sign, self.log_mag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Right,
    Left,
}

impl HalfLine {
    pub fn of(x: f64) -> Option<Self> {
        if x > 0.0 {
            Some(HalfLine::Right)
        } else if x < 0.0 {
            Some(HalfLine::Left)
        } else {
            None
        }
    }

    fn direction(self) -> Direction {
        match self {
            HalfLine::Right => Direction::Forward,
            HalfLine::Left => Direction::Backward,
        }
    }

    fn damped(self) -> bool {
        self == HalfLine::Right
    }
}

/// theta and d theta / da on one half-line, both in log form.
#[derive(Debug, Clone, Copy)]
pub struct HalfLineParts {
    pub initial: SignedLog,
    pub boundary: SignedLog,
    pub initial_da: SignedLog,
    pub boundary_da: SignedLog,
}

// inner rel tolerance for pieces that feed a larger sum
fn tight(q: &QuadratureSpec) -> f64 {
    q.rel_tol * 0.1
}

fn initial_part(
    data: &InitialData,
    side: HalfLine,
    e: f64,
    a: f64,
    t: f64,
    q: &QuadratureSpec,
    derivative: bool,
) -> Result<SignedLog, ViscousError> {
    let pieces = data.pieces(side.direction());
    let k = a / (e * t);
    let raw = if derivative {
        gauss_pieces(&pieces, a, e, t, q, tight(q), |xi| ((xi - a) + (xi + a) * (-k * xi).exp()) / (2.0 * e * t))?
    } else {
        gauss_pieces(&pieces, a, e, t, q, tight(q), |xi| -(-k * xi).exp_m1())?
    };
    let damp = if side.damped() { -t / (2.0 * e) } else { 0.0 };
    Ok(raw.scale(damp - (4.0 * PI * e * t).sqrt().ln()))
}

fn boundary_part(
    trace: &BoundaryTrace,
    side: HalfLine,
    a: f64,
    t: f64,
    q: &QuadratureSpec,
    derivative: bool,
) -> Result<SignedLog, ViscousError> {
    let e = trace.eps().get();
    let z0 = a / (2.0 * (e * t).sqrt());
    let zc = if side.damped() { (a / (2.0 * 2f64.sqrt() * e)).sqrt().max(z0) } else { z0 };
    let k = q.xi_cutoff_sigmas;
    let top = (zc * zc + k * k + trace.log_g_range()).sqrt() + 1.0;
    let mut cuts = vec![zc, zc + 1.0];
    if derivative {
        cuts.push(std::f64::consts::FRAC_1_SQRT_2);
    }
    let breaks = cut_points(z0, top, cuts);
    let damped = side.damped();
    let r = integrate_log(
        |z| {
            let s = if z > 0.0 { a * a / (4.0 * e * z * z) } else { f64::INFINITY };
            let tau = (t - s).max(0.0);
            let g = trace.g(tau);
            let mut l = g.ln() - z * z;
            if damped {
                l -= s / (2.0 * e);
            }
            if derivative {
                let w = 1.0 - 2.0 * z * z;
                SignedLog::new(w.signum(), l + w.abs().ln())
            } else {
                SignedLog::new(1.0, l)
            }
        },
        &breaks,
        tight(q),
        q.max_subdivisions,
    )?;
    let pref = if derivative { 2.0 / (PI.sqrt() * a) } else { 2.0 / PI.sqrt() };
    Ok(r.scale(pref.ln()))
}

fn check_point(trace: &BoundaryTrace, x: f64, t: f64) -> Result<HalfLine, ViscousError> {
    let side = HalfLine::of(x).ok_or_else(|| ViscousError::Domain("x = 0 is the source location".into()))?;
    if !(t > 0.0) || t > trace.end() * (1.0 + 1e-12) {
        return Err(ViscousError::OutOfRange { t, end: trace.end() });
    }
    Ok(side)
}

/// All four integrals behind theta and theta_x at (x, t).
pub fn half_line_parts(
    data: &InitialData,
    trace: &BoundaryTrace,
    x: f64,
    t: f64,
    q: &QuadratureSpec,
    with_derivative: bool,
) -> Result<HalfLineParts, ViscousError> {
    let side = check_point(trace, x, t)?;
    let e = trace.eps().get();
    let a = x.abs();
    let initial = initial_part(data, side, e, a, t, q, false)?;
    let boundary = boundary_part(trace, side, a, t, q, false)?;
    let (initial_da, boundary_da) = if with_derivative {
        (initial_part(data, side, e, a, t, q, true)?, boundary_part(trace, side, a, t, q, true)?)
    } else {
        (SignedLog::ZERO, SignedLog::ZERO)
    };
    Ok(HalfLineParts { initial, boundary, initial_da, boundary_da })
}

fn theta(data: &InitialData, trace: &BoundaryTrace, x: f64, t: f64, q: &QuadratureSpec) -> Result<LogHeatValue, ViscousError> {
    let p = half_line_parts(data, trace, x, t, q, false)?;
    let v = log_add(p.initial, p.boundary);
    if v.sign < 0.0 || v.is_zero() || !v.log_mag.is_finite() {
        return Err(ViscousError::InvalidSign { x, t });
    }
    Ok(LogHeatValue { sign: v.sign, log_mag: v.log_mag })
}

/// theta on the right half-line (damped heat equation).
pub fn heat_right(data: &InitialData, trace: &BoundaryTrace, x: f64, t: f64, q: &QuadratureSpec) -> Result<LogHeatValue, ViscousError> {
    if !(x > 0.0) {
        return Err(ViscousError::Domain(format!("heat_right needs x > 0, got {x}")));
    }
    theta(data, trace, x, t, q)
}

/// theta on the left half-line (pure heat equation).
pub fn heat_left(data: &InitialData, trace: &BoundaryTrace, x: f64, t: f64, q: &QuadratureSpec) -> Result<LogHeatValue, ViscousError> {
    if !(x < 0.0) {
        return Err(ViscousError::Domain(format!("heat_left needs x < 0, got {x}")));
    }
    theta(data, trace, x, t, q)
}

/// theta on whichever half-line holds x.
pub fn heat(data: &InitialData, trace: &BoundaryTrace, x: f64, t: f64, q: &QuadratureSpec) -> Result<LogHeatValue, ViscousError> {
    theta(data, trace, x, t, q)
}

/// theta and u at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub theta: LogHeatValue,
    pub u: f64,
}

/// theta and u = -2 eps theta_x / theta from one set of integrals.
pub fn field_point(data: &InitialData, trace: &BoundaryTrace, x: f64, t: f64, q: &QuadratureSpec) -> Result<FieldPoint, ViscousError> {
    let p = half_line_parts(data, trace, x, t, q, true)?;
    let th = log_add(p.initial, p.boundary);
    // the log form never underflows, so only an exact zero is unusable
    if th.is_zero() {
        return Err(ViscousError::DivisionUnstable { x, t });
    }
    if th.sign < 0.0 || !th.log_mag.is_finite() {
        return Err(ViscousError::InvalidSign { x, t });
    }
    let da = log_add(p.initial_da, p.boundary_da);
    // d/dx = d/da on the right and -d/da on the left
    let dir = if x > 0.0 { 1.0 } else { -1.0 };
    let ratio = dir * da.sign * (da.log_mag - th.log_mag).exp();
    let e = trace.eps().get();
    Ok(FieldPoint { theta: LogHeatValue { sign: th.sign, log_mag: th.log_mag }, u: -2.0 * e * ratio })
}

/// u(x, t) for x != 0.
pub fn velocity(data: &InitialData, trace: &BoundaryTrace, x: f64, t: f64, q: &QuadratureSpec) -> Result<f64, ViscousError> {
    Ok(field_point(data, trace, x, t, q)?.u)
}
