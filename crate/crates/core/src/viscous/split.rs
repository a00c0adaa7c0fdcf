//! Seven-term decomposition of theta that exposes the exponential rates of each part.
//!
//! Right: R = e^{-t/2eps} (I1 - I2 + I3 + I4 + I5 - I6 - I7); left: L = -J1 + J2 + J3 + J4 + J5 - J6 - J7.
//! Terms 4-7 carry the f-convolution. Their theta-averaged kernels are closed form:
//!   A(u) = (2eps/u)(e^{u/2eps} - 1),  B(u) = (2eps/u)(1 - e^{-u/2eps}).
//! The time integral uses z with t - tau = x^2/(4 eps z^2), the inner lag integral u = tau sin^2(phi).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::initial_data::{Direction, InitialData, Piece, Viscosity};
use crate::quadrature::{cut_points, integrate_log, QuadratureSpec};
use crate::specfun::{besseli0_scaled, log_sum_exp, SignedLog};

use super::field::HalfLine;
use super::kernel::gauss_pieces;
use super::ViscousError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitTerms {
    pub side: HalfLine,
    /// I1..I7 on the right, J1..J7 on the left.
    pub terms: [SignedLog; 7],
}

impl SplitTerms {
    const RIGHT_SIGNS: [f64; 7] = [1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0];
    const LEFT_SIGNS: [f64; 7] = [-1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0];

    /// The signed sum that should reproduce theta.
    pub fn recombine(&self, eps: Viscosity, t: f64) -> SignedLog {
        let signs = match self.side {
            HalfLine::Right => Self::RIGHT_SIGNS,
            HalfLine::Left => Self::LEFT_SIGNS,
        };
        let terms: Vec<SignedLog> = self
            .terms
            .iter()
            .zip(signs)
            .map(|(v, s)| if s < 0.0 { -*v } else { *v })
            .collect();
        let sum = log_sum_exp(&terms);
        match self.side {
            HalfLine::Right => sum.scale(-t / (2.0 * eps.get())),
            HalfLine::Left => sum,
        }
    }

    /// I1 - I2 on the right, J2 - J1 on the left: the initial-data part.
    pub fn initial_combination(&self) -> SignedLog {
        match self.side {
            HalfLine::Right => log_sum_exp(&[self.terms[0], -self.terms[1]]),
            HalfLine::Left => log_sum_exp(&[self.terms[1], -self.terms[0]]),
        }
    }

    /// I3 - I6 - I7 (or the J analogue).
    pub fn boundary_combination(&self) -> SignedLog {
        log_sum_exp(&[self.terms[2], -self.terms[5], -self.terms[6]])
    }
}

// ln A(u) and ln B(u) without overflow or 0/0
fn log_a(u: f64, e: f64) -> f64 {
    let r = u / (2.0 * e);
    if r == 0.0 {
        0.0
    } else {
        r + (-(-r).exp_m1() / r).ln()
    }
}

fn log_b(u: f64, e: f64) -> f64 {
    let r = u / (2.0 * e);
    if r == 0.0 {
        0.0
    } else {
        (-(-r).exp_m1() / r).ln()
    }
}

#[derive(Clone, Copy)]
enum Lag {
    A,
    B,
}

struct Ctx<'a> {
    e: f64,
    a: f64,
    t: f64,
    q: &'a QuadratureSpec,
}

impl Ctx<'_> {
    fn z0(&self) -> f64 {
        self.a / (2.0 * (self.e * self.t).sqrt())
    }

    fn tau(&self, z: f64) -> f64 {
        (self.t - self.a * self.a / (4.0 * self.e * z * z)).max(0.0)
    }

    // (2/sqrt(pi))-free z-integral of e^{-z^2} exp(inner(tau(z)))
    fn time_integral(&self, growth: bool, inner: impl Fn(f64) -> Result<SignedLog, ViscousError>) -> Result<SignedLog, ViscousError> {
        let z0 = self.z0();
        let zc = if growth { (self.a / (2.0 * 2f64.sqrt() * self.e)).sqrt().max(z0) } else { z0 };
        let top = zc + self.q.xi_cutoff_sigmas + 1.0;
        let breaks = cut_points(z0, top, [zc, zc + 1.0]);
        let err = std::cell::RefCell::new(None);
        let r = integrate_log(
            |z| match inner(self.tau(z)) {
                Ok(v) => v.scale(-z * z),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    SignedLog::ZERO
                }
            },
            &breaks,
            self.q.rel_tol * 0.1,
            self.q.max_subdivisions,
        )?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(r)
    }

    // int_0^{pi/2} 2 Lag(u) [M(d)/d] dphi with u = tau sin^2, d = tau cos^2; M omitted when None
    fn lag_integral(&self, tau: f64, lag: Lag, moment: Option<&[Piece]>) -> Result<SignedLog, ViscousError> {
        if tau <= 0.0 {
            return Ok(SignedLog::ZERO);
        }
        let e = self.e;
        let err = std::cell::RefCell::new(None);
        let r = integrate_log(
            |phi| {
                let (s, c) = phi.sin_cos();
                let (u, d) = (tau * s * s, tau * c * c);
                let mut l = 2f64.ln()
                    + match lag {
                        Lag::A => log_a(u, e),
                        Lag::B => log_b(u, e),
                    };
                if let Some(pieces) = moment {
                    if d <= 0.0 {
                        // M(d)/d -> 2 eps theta0(0) = 2 eps
                        l += (2.0 * e).ln();
                    } else {
                        match gauss_pieces(pieces, 0.0, e, d, self.q, self.q.rel_tol * 0.01, |xi| xi) {
                            Ok(m) => l += m.log_mag - d.ln(),
                            Err(x) => {
                                err.borrow_mut().get_or_insert(ViscousError::from(x));
                                return SignedLog::ZERO;
                            }
                        }
                    }
                }
                SignedLog::new(1.0, l)
            },
            &[0.0, FRAC_PI_2],
            self.q.rel_tol * 0.05,
            self.q.max_subdivisions,
        )?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(r)
    }
}

fn split_terms(data: &InitialData, eps: Viscosity, side: HalfLine, x: f64, t: f64, q: &QuadratureSpec) -> Result<SplitTerms, ViscousError> {
    if !(t > 0.0) {
        return Err(ViscousError::Domain(format!("split terms need t > 0, got {t}")));
    }
    let e = eps.get();
    let a = x.abs();
    let ctx = Ctx { e, a, t, q };
    let own = match side {
        HalfLine::Right => Direction::Forward,
        HalfLine::Left => Direction::Backward,
    };
    // the initial-data terms always read theta0 on the side's own half-line
    let own_pieces = data.pieces(own);
    let heat_norm = -(4.0 * PI * e * t).sqrt().ln();
    let (first, second) = match side {
        // I1 centred at x, I2 at -x
        HalfLine::Right => (a, -a),
        // J1 centred at x < 0, J2 at -x
        HalfLine::Left => (-a, a),
    };
    let t1 = gauss_pieces(&own_pieces, first, e, t, q, q.rel_tol * 0.1, |_| 1.0)?.scale(heat_norm);
    let t2 = gauss_pieces(&own_pieces, second, e, t, q, q.rel_tol * 0.1, |_| 1.0)?.scale(heat_norm);

    let fwd = data.pieces(Direction::Forward);
    let bwd = data.pieces(Direction::Backward);
    let right = side == HalfLine::Right;
    let two_over_sqrt_pi = (2.0 / PI.sqrt()).ln();

    // term 3: i0e(tau/4eps) times e^{tau/2eps} on the right
    let t3 = ctx
        .time_integral(right, |tau| {
            let g = besseli0_scaled(tau / (4.0 * e)).ln();
            Ok(SignedLog::new(1.0, if right { g + tau / (2.0 * e) } else { g }))
        })?
        .scale(two_over_sqrt_pi);

    // terms 4, 5 carry the xi-moment; 6, 7 do not
    let c45 = -(2.0 * PI.powf(1.5) * e).ln();
    let c67 = -(PI.powf(1.5)).ln();
    // (lag kernel, moment pieces, extra e^{+-tau/2eps})
    let plan: [(Lag, Option<&[Piece]>, f64, f64); 4] = if right {
        [
            (Lag::A, Some(&fwd), 0.0, c45),
            (Lag::B, Some(&bwd), 1.0, c45),
            (Lag::A, None, 0.0, c67),
            (Lag::B, None, 1.0, c67),
        ]
    } else {
        [
            (Lag::A, Some(&fwd), -1.0, c45),
            (Lag::B, Some(&bwd), 0.0, c45),
            (Lag::A, None, -1.0, c67),
            (Lag::B, None, 0.0, c67),
        ]
    };
    let mut rest = [SignedLog::ZERO; 4];
    for (slot, (lag, moment, tau_power, coef)) in rest.iter_mut().zip(plan) {
        *slot = ctx
            .time_integral(right, |tau| Ok(ctx.lag_integral(tau, lag, moment)?.scale(tau_power * tau / (2.0 * e))))?
            .scale(coef);
    }
    Ok(SplitTerms { side, terms: [t1, t2, t3, rest[0], rest[1], rest[2], rest[3]] })
}

pub fn split_terms_right(data: &InitialData, eps: Viscosity, x: f64, t: f64, q: &QuadratureSpec) -> Result<SplitTerms, ViscousError> {
    if !(x > 0.0) {
        return Err(ViscousError::Domain(format!("right split needs x > 0, got {x}")));
    }
    split_terms(data, eps, HalfLine::Right, x, t, q)
}

pub fn split_terms_left(data: &InitialData, eps: Viscosity, x: f64, t: f64, q: &QuadratureSpec) -> Result<SplitTerms, ViscousError> {
    if !(x < 0.0) {
        return Err(ViscousError::Domain(format!("left split needs x < 0, got {x}")));
    }
    split_terms(data, eps, HalfLine::Left, x, t, q)
}
