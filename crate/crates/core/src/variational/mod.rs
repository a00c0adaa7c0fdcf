//! Inviscid limit as a three-branch minimization on each half-line.
//!
//! The inner minimization over xi is done exactly: V is piecewise linear, so xi^2/2d + V(+-xi) is a
//! convex quadratic on every piece. On the right the arrival cost x^2/2(t - tau) - tau is convex in
//! tau with minimizer t - |x|/sqrt 2, which leaves one free duration per branch.

pub mod functional;
pub mod search;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::initial_data::InitialData;

pub use functional::{functional_value, profile_min, ratio, Branch, MinimizerPoint, Profiles, Side};
use search::minimize_1d;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VariationalError {
    #[error("infeasible point: {0}")]
    InfeasiblePoint(String),
    #[error("tied branches {branches:?} give different velocities {velocities:?}")]
    AmbiguousMinimizer { branches: Vec<String>, velocities: Vec<f64> },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchSpec {
    pub grid_nodes: usize,
    pub tie_tol: f64,
    pub velocity_tie_tol: f64,
    pub bisection_tol: f64,
    pub interface_scan: usize,
    pub probes: usize,
    pub seed: u64,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            grid_nodes: 64,
            tie_tol: 1e-9,
            velocity_tie_tol: 1e-6,
            bisection_tol: 1e-6,
            interface_scan: 64,
            probes: 64,
            seed: 0x5eed,
        }
    }
}

impl SearchSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.grid_nodes < 4 || self.interface_scan < 4 {
            return Err("grid_nodes and interface_scan must be at least 4".into());
        }
        for (name, v) in [("tie_tol", self.tie_tol), ("velocity_tie_tol", self.velocity_tie_tol), ("bisection_tol", self.bisection_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizerResult {
    pub branch: Branch,
    pub value: f64,
    pub argmin: MinimizerPoint,
    pub tie: bool,
    pub oracle_gap: Option<f64>,
}

fn check_query(side: Side, x: f64, t: f64) -> Result<(), VariationalError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(VariationalError::Domain(format!("t must be positive, got {t}")));
    }
    if Side::of(x) != Some(side) || !x.is_finite() {
        return Err(VariationalError::Domain(format!("x = {x} is not on the {side:?} half-line")));
    }
    Ok(())
}

/// Branch minimum with its argmin; `tie` is filled in by `limit_u`.
pub fn minimize_branch(
    branch: Branch,
    data: &InitialData,
    x: f64,
    t: f64,
    search: &SearchSpec,
) -> Result<MinimizerResult, VariationalError> {
    check_query(branch.side(), x, t)?;
    let prof = Profiles::new(data);
    Ok(minimize_with(branch, data, &prof, x, t, search))
}

fn minimize_with(branch: Branch, data: &InitialData, prof: &Profiles, x: f64, t: f64, search: &SearchSpec) -> MinimizerResult {
    let n = search.grid_nodes;
    let arrival = |tau: f64| x * x / (2.0 * (t - tau));
    let argmin = match (branch.side(), branch.index()) {
        (Side::Right, 1) => {
            // for fixed d = tau - u the best tau is max(d, t - |x|/sqrt 2)
            let tau0 = (t - x.abs() / 2f64.sqrt()).max(0.0);
            let obj = |d: f64| {
                let tau = d.max(tau0);
                arrival(tau) - tau + d + profile_min(&prof.forward, 0.0, d).0
            };
            let d = minimize_1d(obj, 0.0, t, n).arg;
            let tau = d.max(tau0);
            MinimizerPoint { tau, u: tau - d, xi: profile_min(&prof.forward, 0.0, d).1 }
        }
        (Side::Right, 2) => {
            let obj = |tau: f64| arrival(tau) - tau + profile_min(&prof.backward, 0.0, tau).0;
            let tau = minimize_1d(obj, 0.0, t, n).arg;
            MinimizerPoint { tau, u: 0.0, xi: profile_min(&prof.backward, 0.0, tau).1 }
        }
        (Side::Left, 1) => {
            // the arrival cost grows with tau, so tau = d and u = 0
            let obj = |d: f64| arrival(d) + d + profile_min(&prof.forward, 0.0, d).0;
            let d = minimize_1d(obj, 0.0, t, n).arg;
            MinimizerPoint { tau: d, u: 0.0, xi: profile_min(&prof.forward, 0.0, d).1 }
        }
        (Side::Left, 2) => {
            let obj = |tau: f64| arrival(tau) + profile_min(&prof.backward, 0.0, tau).0;
            let tau = minimize_1d(obj, 0.0, t, n).arg;
            MinimizerPoint { tau, u: 0.0, xi: profile_min(&prof.backward, 0.0, tau).1 }
        }
        (Side::Right, _) => MinimizerPoint { tau: 0.0, u: 0.0, xi: profile_min(&prof.forward, x, t).1 },
        (Side::Left, _) => MinimizerPoint { tau: 0.0, u: 0.0, xi: profile_min(&prof.backward, -x, t).1 },
    };
    let value = functional_value(branch, data, x, t, argmin).unwrap_or(f64::INFINITY);
    MinimizerResult { branch, value, argmin, tie: false, oracle_gap: None }
}

/// Outcome of checking a minimizer against random feasible points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub probes: usize,
    pub violations: usize,
    /// Largest value - probe excess; negative when every probe is worse.
    pub worst: f64,
}

/// Compare a result with `search.probes` random feasible points; xi is drawn from [0, xi_max].
pub fn certify(result: &MinimizerResult, data: &InitialData, x: f64, t: f64, search: &SearchSpec) -> Result<Certificate, VariationalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let xi_max = xi_box(data, x, t);
    let mut cert = Certificate { probes: search.probes, violations: 0, worst: f64::NEG_INFINITY };
    for _ in 0..search.probes {
        let tau = rng.gen_range(0.0..t);
        let u = match result.branch.index() {
            1 => rng.gen_range(0.0..=tau),
            _ => 0.0,
        };
        let p = MinimizerPoint { tau, u, xi: rng.gen_range(0.0..=xi_max) };
        let f = functional_value(result.branch, data, x, t, p)?;
        let excess = result.value - f;
        cert.worst = cert.worst.max(excess);
        if excess > 1e-12 * (1.0 + f.abs()) {
            cert.violations += 1;
        }
    }
    Ok(cert)
}

/// |x| + (1 + M) t + 1
pub fn xi_box(data: &InitialData, x: f64, t: f64) -> f64 {
    x.abs() + (1.0 + data.bound()) * t + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitSolution {
    pub side: Side,
    pub x: f64,
    pub t: f64,
    /// U_R or U_L
    pub value: f64,
    /// velocity from the active branch's argmin
    pub u: f64,
    pub active: Branch,
    pub tie: bool,
    pub branches: [MinimizerResult; 3],
}

impl LimitSolution {
    pub fn active_result(&self) -> &MinimizerResult {
        &self.branches[self.active.index() as usize - 1]
    }

    /// Branches within the tie tolerance of the minimum.
    pub fn tied(&self, tie_tol: f64) -> Vec<&MinimizerResult> {
        let m = self.branches.iter().map(|b| b.value).fold(f64::INFINITY, f64::min);
        self.branches.iter().filter(|b| b.value <= m + tie_tol).collect()
    }
}

const RIGHT_PRIORITY: [u8; 3] = [2, 1, 3];
const LEFT_PRIORITY: [u8; 3] = [1, 2, 3];

fn branch_velocity(r: &MinimizerResult, x: f64, t: f64) -> f64 {
    match (r.branch.side(), r.branch.index()) {
        (Side::Right, 3) => (x - r.argmin.xi) / t,
        (Side::Left, 3) => (x + r.argmin.xi) / t,
        _ => x / (t - r.argmin.tau),
    }
}

#[allow(non_snake_case)]
pub fn limit_U(side: Side, data: &InitialData, x: f64, t: f64, search: &SearchSpec) -> Result<LimitSolution, VariationalError> {
    check_query(side, x, t)?;
    Ok(limit_with(side, data, &Profiles::new(data), x, t, search))
}

fn limit_with(side: Side, data: &InitialData, prof: &Profiles, x: f64, t: f64, search: &SearchSpec) -> LimitSolution {
    let mut branches = Branch::all(side).map(|b| minimize_with(b, data, prof, x, t, search));
    let m = branches.iter().map(|b| b.value).fold(f64::INFINITY, f64::min);
    let within: Vec<bool> = branches.iter().map(|b| b.value <= m + search.tie_tol).collect();
    let tie = within.iter().filter(|w| **w).count() > 1;
    for (b, w) in branches.iter_mut().zip(&within) {
        b.tie = tie && *w;
    }
    let priority = match side {
        Side::Right => RIGHT_PRIORITY,
        Side::Left => LEFT_PRIORITY,
    };
    // priority settles ties whose velocities agree; otherwise the smallest value wins
    let tied: Vec<u8> = priority.into_iter().filter(|&i| within[i as usize - 1]).collect();
    let v: Vec<f64> = tied.iter().map(|&i| branch_velocity(&branches[i as usize - 1], x, t)).collect();
    let spread = v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min);
    let pick = if spread > search.velocity_tie_tol {
        tied.iter().copied().min_by(|&a, &b| branches[a as usize - 1].value.total_cmp(&branches[b as usize - 1].value)).unwrap()
    } else {
        tied[0]
    };
    let active = branches[pick as usize - 1];
    let shift = if side == Side::Right { t } else { 0.0 };
    LimitSolution {
        side,
        x,
        t,
        value: m + shift,
        u: branch_velocity(&active, x, t),
        active: active.branch,
        tie,
        branches,
    }
}

/// u = U_x from the active branch; fails when tied branches disagree on it.
pub fn limit_velocity(side: Side, data: &InitialData, x: f64, t: f64, search: &SearchSpec) -> Result<f64, VariationalError> {
    let sol = limit_U(side, data, x, t, search)?;
    velocity_of(&sol, search)
}

fn velocity_of(sol: &LimitSolution, search: &SearchSpec) -> Result<f64, VariationalError> {
    if sol.tie {
        let tied = sol.tied(search.tie_tol);
        let v: Vec<f64> = tied.iter().map(|r| branch_velocity(r, sol.x, sol.t)).collect();
        let spread = v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min);
        if spread > search.velocity_tie_tol {
            return Err(VariationalError::AmbiguousMinimizer {
                branches: tied.iter().map(|r| r.branch.label()).collect(),
                velocities: v,
            });
        }
    }
    Ok(sol.u)
}

/// Interface positions at one time; `inner` is x2 (y2), `outer` is x1 (y1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interfaces {
    pub t: f64,
    pub inner: f64,
    pub outer: f64,
    /// inner collapsed onto the axis: branch 2 (right) or 1 (left) never strictly wins
    pub inner_degenerate: bool,
}

/// Regions from the axis outward: right 2, 1, 3; left 1, 2, 3.
pub fn interfaces(side: Side, data: &InitialData, t: f64, search: &SearchSpec) -> Result<Interfaces, VariationalError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(VariationalError::Domain(format!("t must be positive, got {t}")));
    }
    let prof = Profiles::new(data);
    let sgn = if side == Side::Right { 1.0 } else { -1.0 };
    let tol = search.tie_tol;
    let vals = |a: f64| {
        let s = limit_with(side, data, &prof, sgn * a, t, search);
        [s.branches[0].value, s.branches[1].value, s.branches[2].value]
    };
    let outer_wins = |a: f64| {
        let v = vals(a);
        v[2] < v[0].min(v[1]) - tol
    };
    // the near-axis branch strictly beats the middle one
    let inner_wins = |a: f64| {
        let v = vals(a);
        let (near, mid) = match side {
            Side::Right => (v[1], v[0]),
            Side::Left => (v[0], v[1]),
        };
        near < mid - tol && !(v[2] < v[0].min(v[1]) - tol)
    };

    let a_max = 2.0 * (1.0 + data.bound()) * t + 1.0 + data.support_radius();
    let n = search.interface_scan;
    let grid: Vec<f64> = (1..=n).map(|k| a_max * k as f64 / n as f64).collect();

    let outer = match grid.iter().position(|&a| outer_wins(a)) {
        Some(k) => {
            let lo = if k == 0 { 0.0 } else { grid[k - 1] };
            bisect(&outer_wins, lo, grid[k], search.bisection_tol)
        }
        None => a_max,
    };

    let mut probes = vec![outer * 1e-6];
    probes.extend(grid.iter().copied().filter(|&a| a < outer));
    probes.push(outer);
    let inside: Vec<bool> = probes.iter().map(|&a| a < outer && inner_wins(a)).collect();
    let inner = match inside.iter().rposition(|w| *w) {
        None => 0.0,
        Some(k) => bisect(&|a| !inner_wins(a) || a >= outer, probes[k], probes[k + 1], search.bisection_tol),
    };
    Ok(Interfaces { t, inner: sgn * inner, outer: sgn * outer, inner_degenerate: inner == 0.0 })
}

// first point of [lo, hi] where pred holds, given !pred(lo) and pred(hi); lo = 0 stands for the axis
fn bisect(pred: &impl Fn(f64) -> bool, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if lo == 0.0 {
        0.0
    } else {
        0.5 * (lo + hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FiniteDiff {
    Value(f64),
    /// the stencil straddles a kink of U
    Skipped,
}

/// Distance from an interface below which the difference quotient is not attempted.
pub const KINK_GUARD: f64 = 1e-3;
/// Velocity change across the stencil that marks a shock inside a branch.
const JUMP_GUARD: f64 = 1e-2;

/// [U(x + h) - U(x - h)] / 2h, skipped near interfaces and velocity jumps.
#[allow(non_snake_case)]
pub fn finite_diff_check_U(side: Side, data: &InitialData, x: f64, t: f64, h: f64, search: &SearchSpec) -> Result<FiniteDiff, VariationalError> {
    if !(h > 0.0) || Side::of(x - h) != Some(side) || Side::of(x + h) != Some(side) {
        return Err(VariationalError::Domain(format!("stencil x +- h = {x} +- {h} leaves the {side:?} half-line")));
    }
    check_query(side, x, t)?;
    let ifc = interfaces(side, data, t, search)?;
    // inclusive, with room for the rounding in x - interface
    let guard = KINK_GUARD.max(h) * (1.0 + 1e-9);
    if (x - ifc.outer).abs() <= guard || (!ifc.inner_degenerate && (x - ifc.inner).abs() <= guard) {
        return Ok(FiniteDiff::Skipped);
    }
    let prof = Profiles::new(data);
    let lo = limit_with(side, data, &prof, x - h, t, search);
    let hi = limit_with(side, data, &prof, x + h, t, search);
    if (lo.u - hi.u).abs() > JUMP_GUARD {
        return Ok(FiniteDiff::Skipped);
    }
    Ok(FiniteDiff::Value((hi.value - lo.value) / (2.0 * h)))
}
