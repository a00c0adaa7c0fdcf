//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use burgers_source::variational::{Branch, Side};
use burgers_source::InitialData;

/// (name, datum) for the six fixture data.
pub fn fixture_data() -> Vec<(&'static str, InitialData)> {
    vec![
        ("zero", InitialData::zero()),
        ("plus_one", InitialData::constant(1.0).unwrap()),
        ("minus_one", InitialData::constant(-1.0).unwrap()),
        ("riemann_-1_+1", InitialData::riemann(-1.0, 1.0).unwrap()),
        ("riemann_0_-1", InitialData::riemann(0.0, -1.0).unwrap()),
        ("rectangle_3", InitialData::rectangle(-1.0, 1.0, 3.0, 0.0).unwrap()),
    ]
}

/// V(x) = int_0^x u0 by direct summation over the constant pieces, independent of the library.
pub fn primitive(bps: &[f64], vals: &[f64], x: f64) -> f64 {
    // u0 = vals[k] on [bps[k-1], bps[k]), vals[0] left of bps[0]
    let (lo, hi, sgn) = if x >= 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
    let mut sum = 0.0;
    for (k, &v) in vals.iter().enumerate() {
        let a = if k == 0 { f64::NEG_INFINITY } else { bps[k - 1] };
        let b = if k == bps.len() { f64::INFINITY } else { bps[k] };
        let (a, b) = (a.max(lo), b.min(hi));
        if b > a {
            sum += v * (b - a);
        }
    }
    sgn * sum
}

fn ratio(xi: f64, d: f64) -> f64 {
    if d > 0.0 {
        xi * xi / (2.0 * d)
    } else if xi == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// The branch integrand written out from the displayed formulas.
pub fn integrand(branch: Branch, v: &impl Fn(f64) -> f64, x: f64, t: f64, tau: f64, u: f64, xi: f64) -> f64 {
    let arr = x * x / (2.0 * (t - tau));
    match (branch.side(), branch.index()) {
        (Side::Right, 1) => arr + ratio(xi, tau - u) - u + v(xi),
        (Side::Right, 2) => arr + ratio(xi, tau) - tau + v(-xi),
        (Side::Right, _) => (x - xi).powi(2) / (2.0 * t) + v(xi),
        (Side::Left, 1) => arr + ratio(xi, tau - u) + tau - u + v(xi),
        (Side::Left, 2) => arr + ratio(xi, tau) + v(-xi),
        (Side::Left, _) => (x + xi).powi(2) / (2.0 * t) + v(-xi),
    }
}

/// Coordinates searched for a branch: (tau, s = u/tau, xi), with u and tau dropped where unused.
fn coords(branch: Branch) -> usize {
    match branch.index() {
        1 => 3,
        2 => 2,
        _ => 1,
    }
}

/// Brute-force grid minimum over a box of (tau, s, xi) with `n` points per dimension.
/// Returns the best `keep` points and their values.
fn grid_pass(
    branch: Branch,
    f: &impl Fn(&[f64]) -> f64,
    boxes: &[(f64, f64, bool)],
    n: usize,
    keep: usize,
) -> Vec<(f64, Vec<f64>)> {
    let dims = coords(branch);
    // tau axis excludes its upper end when it is t itself
    let axis = |d: usize, k: usize| {
        let (lo, hi, open) = boxes[d];
        let m = if open { n } else { n - 1 };
        lo + (hi - lo) * k as f64 / m as f64
    };
    let mut best: Vec<(f64, Vec<f64>)> = Vec::new();
    let total = n.pow(dims as u32);
    let mut p = vec![0.0; dims];
    for flat in 0..total {
        let mut r = flat;
        for (d, slot) in p.iter_mut().enumerate() {
            *slot = axis(d, r % n);
            r /= n;
        }
        let v = f(&p);
        if best.len() < keep || v < best[best.len() - 1].0 {
            best.push((v, p.clone()));
            best.sort_by(|a, b| a.0.total_cmp(&b.0));
            best.truncate(keep);
        }
    }
    best
}

/// Grid-search oracle: one pass of `n` points per dimension over the full feasible box, then
/// `zooms` passes of the same grid around each of the best coarse points.
/// Returns (coarse minimum, refined minimum).
pub fn brute_force(branch: Branch, bps: &[f64], vals: &[f64], x: f64, t: f64, n: usize, zooms: usize) -> (f64, f64) {
    let m = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let xi_max = x.abs() + (1.0 + m) * t + 1.0;
    let v = |s: f64| primitive(bps, vals, s);
    let f = |p: &[f64]| match branch.index() {
        1 => integrand(branch, &v, x, t, p[0], p[0] * p[1], p[2]),
        2 => integrand(branch, &v, x, t, p[0], 0.0, p[1]),
        _ => integrand(branch, &v, x, t, 0.0, 0.0, p[0]),
    };
    let full: Vec<(f64, f64, bool)> = match branch.index() {
        1 => vec![(0.0, t, true), (0.0, 1.0, false), (0.0, xi_max, false)],
        2 => vec![(0.0, t, true), (0.0, xi_max, false)],
        _ => vec![(0.0, xi_max, false)],
    };
    let coarse = grid_pass(branch, &f, &full, n, 3);
    let mut refined = coarse[0].0;
    for (_, start) in &coarse {
        let mut centre = start.clone();
        let mut half: Vec<f64> = full.iter().map(|&(lo, hi, _)| 2.0 * (hi - lo) / (n - 1) as f64).collect();
        for _ in 0..zooms {
            let b: Vec<(f64, f64, bool)> = full
                .iter()
                .zip(&centre)
                .zip(&half)
                .map(|((&(lo, hi, open), &c), &h)| ((c - h).max(lo), (c + h).min(hi), open && c + h >= hi))
                .collect();
            let r = grid_pass(branch, &f, &b, n, 1);
            refined = refined.min(r[0].0);
            centre = r[0].1.clone();
            half = b.iter().map(|&(lo, hi, _)| 2.0 * (hi - lo) / (n - 1) as f64).collect();
        }
    }
    (coarse[0].0, refined)
}
