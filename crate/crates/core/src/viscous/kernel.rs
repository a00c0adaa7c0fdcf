//! Gaussian-weighted xi-integrals over the linear pieces of V.

use crate::initial_data::Piece;
use crate::quadrature::{cut_points, integrate, QuadError, QuadratureSpec};
use crate::specfun::SignedLog;

/// Exponents further than this below the running maximum are dropped.
const NEGLIGIBLE: f64 = 745.0;

/// int_0^inf mult(xi) exp(-(xi - c)^2 / (4 eps t) - W(xi) / (2 eps)) dxi, with W given by `pieces`.
/// The peak exponent is found exactly on every piece and factored out.
pub fn gauss_pieces(
    pieces: &[Piece],
    c: f64,
    eps: f64,
    t: f64,
    q: &QuadratureSpec,
    rel_tol: f64,
    mult: impl Fn(f64) -> f64,
) -> Result<SignedLog, QuadError> {
    let sigma = (2.0 * eps * t).sqrt();
    let width = q.xi_cutoff_sigmas * sigma;
    let expo = |p: &Piece, xi: f64| -(xi - c).powi(2) / (4.0 * eps * t) - p.value(xi) / (2.0 * eps);
    let peaks: Vec<f64> = pieces.iter().map(|p| (c - t * p.slope).clamp(p.lo, p.hi)).collect();
    let top = pieces.iter().zip(&peaks).map(|(p, &pk)| expo(p, pk)).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Ok(SignedLog::ZERO);
    }
    let mut sum = 0.0;
    for (p, &pk) in pieces.iter().zip(&peaks) {
        if expo(p, pk) < top - NEGLIGIBLE {
            continue;
        }
        let lo = p.lo.max(pk - width);
        let hi = p.hi.min(pk + width);
        if hi <= lo {
            continue;
        }
        let breaks = cut_points(lo, hi, [pk]);
        sum += integrate(|xi| mult(xi) * (expo(p, xi) - top).exp(), &breaks, rel_tol, q.max_subdivisions)?;
    }
    Ok(SignedLog::from_f64(sum).scale(top))
}

/// int_0^inf xi exp(-xi^2 / (4 eps s)) (exp(-W(xi) / (2 eps)) - 1) dxi in plain f64, free of the
/// cancellation a separate evaluation of both parts would suffer at small s.
pub fn centered_moment_minus_one(
    pieces: &[Piece],
    eps: f64,
    s: f64,
    q: &QuadratureSpec,
) -> Result<f64, QuadError> {
    let sigma = (2.0 * eps * s).sqrt();
    let width = q.xi_cutoff_sigmas * sigma;
    let mut total = 0.0;
    for p in pieces {
        let pk = (-s * p.slope).clamp(p.lo, p.hi);
        // both parts are negligible once past both peaks by the cutoff
        let hi = p.hi.min(pk.max(0.0) + width);
        if hi <= p.lo {
            continue;
        }
        let breaks = cut_points(p.lo, hi, [pk - width, pk, width]);
        total += integrate(
            |xi| {
                let gauss = -xi * xi / (4.0 * eps * s);
                let a = -p.value(xi) / (2.0 * eps);
                if a.abs() < 1.0 {
                    xi * gauss.exp() * a.exp_m1()
                } else {
                    xi * ((gauss + a).exp() - gauss.exp())
                }
            },
            &breaks,
            q.rel_tol,
            q.max_subdivisions,
        )?;
    }
    Ok(total)
}
