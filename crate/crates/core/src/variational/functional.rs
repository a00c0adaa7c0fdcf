//! The six branch functionals and their exact inner minimization over xi.

use serde::{Deserialize, Serialize};

use crate::initial_data::{Direction, InitialData, Piece};

use super::VariationalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn of(x: f64) -> Option<Side> {
        if x > 0.0 {
            Some(Side::Right)
        } else if x < 0.0 {
            Some(Side::Left)
        } else {
            None
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// One of R1, R2, R3, L1, L2, L3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch {
    side: Side,
    index: u8,
}

impl Branch {
    pub fn new(side: Side, index: u8) -> Result<Self, VariationalError> {
        if !(1..=3).contains(&index) {
            return Err(VariationalError::Domain(format!("branch index must be 1, 2 or 3, got {index}")));
        }
        Ok(Branch { side, index })
    }

    pub fn side(self) -> Side {
        self.side
    }

    pub fn index(self) -> u8 {
        self.index
    }

    pub fn all(side: Side) -> [Branch; 3] {
        [1, 2, 3].map(|index| Branch { side, index })
    }

    pub fn label(self) -> String {
        format!("{}{}", self.side.letter(), self.index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizerPoint {
    pub tau: f64,
    pub u: f64,
    pub xi: f64,
}

/// xi^2 / (2 d) on the closure d >= 0: 0 at xi = 0, infinite otherwise when d = 0.
pub fn ratio(xi: f64, d: f64) -> f64 {
    if d > 0.0 {
        xi * xi / (2.0 * d)
    } else if xi == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn pieces_for(data: &InitialData, dir: Direction) -> Vec<Piece> {
    data.pieces(dir)
}

/// Integrand of the branch minimum at one feasible point.
pub fn functional_value(
    branch: Branch,
    data: &InitialData,
    x: f64,
    t: f64,
    p: MinimizerPoint,
) -> Result<f64, VariationalError> {
    if !(t > 0.0) {
        return Err(VariationalError::InfeasiblePoint(format!("t must be positive, got {t}")));
    }
    if !(p.xi >= 0.0) {
        return Err(VariationalError::InfeasiblePoint(format!("xi must be nonnegative, got {}", p.xi)));
    }
    if branch.index != 3 {
        if !(p.tau >= 0.0 && p.tau < t) {
            return Err(VariationalError::InfeasiblePoint(format!("need 0 <= tau < t, got tau = {}", p.tau)));
        }
        if branch.index == 1 && !(p.u >= 0.0 && p.u <= p.tau) {
            return Err(VariationalError::InfeasiblePoint(format!("need 0 <= u <= tau, got u = {}", p.u)));
        }
    }
    let arrival = if x == 0.0 { 0.0 } else { x * x / (2.0 * (t - p.tau)) };
    let v = |s: f64| data.cumulative(s);
    Ok(match (branch.side, branch.index) {
        (Side::Right, 1) => arrival + ratio(p.xi, p.tau - p.u) - p.u + v(p.xi),
        (Side::Right, 2) => arrival + ratio(p.xi, p.tau) - p.tau + v(-p.xi),
        (Side::Right, _) => (x - p.xi).powi(2) / (2.0 * t) + v(p.xi),
        (Side::Left, 1) => arrival + ratio(p.xi, p.tau - p.u) + p.tau - p.u + v(p.xi),
        (Side::Left, 2) => arrival + ratio(p.xi, p.tau) + v(-p.xi),
        (Side::Left, _) => (x + p.xi).powi(2) / (2.0 * t) + v(-p.xi),
    })
}

/// min over xi >= 0 of (xi - c)^2 / (2 d) + W(xi), W piecewise linear. Returns (value, argmin);
/// exact ties go to the smaller xi.
pub fn profile_min(pieces: &[Piece], c: f64, d: f64) -> (f64, f64) {
    if d <= 0.0 {
        // only xi = c is finite; callers use c = 0 here
        let xi = c.max(0.0);
        let w = pieces.iter().find(|p| xi >= p.lo && xi <= p.hi).map_or(0.0, |p| p.value(xi));
        return (if xi == c { w } else { f64::INFINITY }, xi);
    }
    let mut best = (f64::INFINITY, 0.0);
    for p in pieces {
        let xi = (c - d * p.slope).clamp(p.lo, p.hi);
        let val = (xi - c).powi(2) / (2.0 * d) + p.value(xi);
        if val < best.0 {
            best = (val, xi);
        }
    }
    best
}

/// Pieces of V(xi) and V(-xi) for xi >= 0, computed once per datum.
#[derive(Debug, Clone)]
pub struct Profiles {
    pub forward: Vec<Piece>,
    pub backward: Vec<Piece>,
}

impl Profiles {
    pub fn new(data: &InitialData) -> Self {
        Profiles { forward: pieces_for(data, Direction::Forward), backward: pieces_for(data, Direction::Backward) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(tau: f64, u: f64, xi: f64) -> MinimizerPoint {
        MinimizerPoint { tau, u, xi }
    }

    #[test]
    fn functional_examples() {
        let z = InitialData::zero();
        let r = |i| Branch::new(Side::Right, i).unwrap();
        let l = |i| Branch::new(Side::Left, i).unwrap();
        assert_eq!(functional_value(r(3), &z, 1.0, 2.0, pt(0.0, 0.0, 1.0)).unwrap(), 0.0);
        let tau = 2.0 - 0.5f64.sqrt();
        let v = functional_value(r(1), &z, 1.0, 2.0, pt(tau, tau, 0.0)).unwrap();
        assert!((v - (2f64.sqrt() - 2.0)).abs() < 1e-14);
        let v = functional_value(l(2), &z, -1.0, 2.0, pt(1e-12, 0.0, 0.0)).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
    }

    #[test]
    fn closure_convention() {
        assert_eq!(ratio(0.0, 0.0), 0.0);
        assert_eq!(ratio(0.5, 0.0), f64::INFINITY);
        let z = InitialData::zero();
        let b = Branch::new(Side::Right, 1).unwrap();
        assert_eq!(functional_value(b, &z, 1.0, 2.0, pt(1.0, 1.0, 0.3)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn infeasible_points_rejected() {
        let z = InitialData::zero();
        let b = Branch::new(Side::Right, 1).unwrap();
        assert!(functional_value(b, &z, 1.0, 2.0, pt(2.0, 0.0, 0.0)).is_err());
        assert!(functional_value(b, &z, 1.0, 2.0, pt(1.0, 1.5, 0.0)).is_err());
        assert!(functional_value(b, &z, 1.0, 2.0, pt(1.0, 0.5, -0.1)).is_err());
        assert!(Branch::new(Side::Left, 4).is_err());
    }

    #[test]
    fn profile_min_matches_dense_scan() {
        let d = InitialData::new(vec![-1.0, 0.5, 2.0], vec![2.0, -1.5, 0.8, -0.3]).unwrap();
        let prof = Profiles::new(&d);
        for (pieces, sgn) in [(&prof.forward, 1.0), (&prof.backward, -1.0)] {
            for &(c, dd) in &[(0.0, 0.3), (1.2, 1.0), (-0.7, 2.0), (3.0, 0.05)] {
                let (v, xi) = profile_min(pieces, c, dd);
                let mut scan = f64::INFINITY;
                for k in 0..=200_000 {
                    let s = 8.0 * k as f64 / 200_000.0;
                    scan = scan.min((s - c).powi(2) / (2.0 * dd) + d.cumulative(sgn * s));
                }
                assert!(v <= scan + 1e-12 && v >= scan - 1e-6, "c={c} d={dd}: {v} vs {scan}");
                let at = (xi - c).powi(2) / (2.0 * dd) + d.cumulative(sgn * xi);
                assert!((at - v).abs() < 1e-12);
            }
        }
    }
}
