//! Grid bracketing plus golden-section refinement on a half-open interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_STEPS: usize = 200;
/// Grid local minima refined per search.
const CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Found {
    pub arg: f64,
    pub value: f64,
}

fn better(a: Found, b: Found) -> Found {
    if b.value < a.value || (b.value == a.value && b.arg < a.arg) {
        b
    } else {
        a
    }
}

/// Golden section on the open interval (a, b); `seed` is the best endpoint value already known.
pub fn golden(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, seed: Found, x_tol: f64) -> Found {
    let mut best = seed;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    best = better(best, Found { arg: c, value: fc });
    best = better(best, Found { arg: d, value: fd });
    for _ in 0..MAX_GOLDEN_STEPS {
        if b - a <= x_tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best = better(best, Found { arg: c, value: fc });
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best = better(best, Found { arg: d, value: fd });
        }
    }
    best
}

/// Minimize f over [lo, hi): `nodes` grid points, then golden section around the lowest local minima.
pub fn minimize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, nodes: usize) -> Found {
    let n = nodes.max(2);
    let h = (hi - lo) / n as f64;
    let grid: Vec<Found> = (0..n)
        .map(|k| {
            let arg = lo + h * k as f64;
            Found { arg, value: f(arg) }
        })
        .collect();
    let val = |k: usize| if k < n { grid[k].value } else { f64::INFINITY };
    let mut minima: Vec<usize> = (0..n)
        .filter(|&k| (k == 0 || grid[k].value <= val(k - 1)) && grid[k].value <= val(k + 1))
        .collect();
    minima.sort_by(|&i, &j| grid[i].value.total_cmp(&grid[j].value).then(i.cmp(&j)));
    minima.truncate(CANDIDATES);
    let x_tol = 1e-15 * hi.abs().max(1.0);
    let mut best = grid.iter().copied().reduce(better).unwrap();
    for k in minima {
        let a = if k == 0 { lo } else { grid[k - 1].arg };
        let b = if k + 1 < n { grid[k + 1].arg } else { hi };
        best = better(best, golden(&f, a, b, grid[k], x_tol));
    }
    best
}
