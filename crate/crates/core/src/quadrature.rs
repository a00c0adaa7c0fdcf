//! Adaptive Gauss-Kronrod quadrature, Gauss-Legendre rules and log-domain integration.

use std::cell::Cell;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::SignedLog;

/// Settings shared by every numerical integral in the viscous evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Bisection budget per initial interval.
    pub max_subdivisions: usize,
    /// Half-width of Gaussian windows, in standard deviations.
    pub xi_cutoff_sigmas: f64,
    /// Trace grid nodes per unit time.
    pub time_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-8, max_subdivisions: 200, xi_cutoff_sigmas: 12.0, time_nodes: 400 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-2) {
            return Err(format!("rel_tol must be in (0, 1e-2), got {}", self.rel_tol));
        }
        if self.max_subdivisions == 0 || self.time_nodes == 0 {
            return Err("max_subdivisions and time_nodes must be positive".into());
        }
        if !(self.xi_cutoff_sigmas > 0.0) {
            return Err("xi_cutoff_sigmas must be positive".into());
        }
        Ok(())
    }

    /// Same spec with a different tolerance.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature did not converge: value {value:e}, error estimate {error:e} after {intervals} intervals")]
    NonConvergence { value: f64, error: f64, intervals: usize },
    #[error("integrand returned a non-finite value at {at}")]
    NonFinite { at: f64 },
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_977_048_334,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    abs: f64,
    error: f64,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment, QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite { at: c });
    }
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = (WGK[10] * fc).abs();
    let mut fv = [(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        if !f1.is_finite() {
            return Err(QuadError::NonFinite { at: c - dx });
        }
        if !f2.is_finite() {
            return Err(QuadError::NonFinite { at: c + dx });
        }
        fv[j] = (f1, f2);
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let (value, abs, resasc) = (resk * h, resabs * h.abs(), resasc * h.abs());
    let mut error = ((resk - resg) * h).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs);
    }
    Ok(Segment { a, b, value, abs, error })
}

/// Fraction of the L1 mass used as an absolute error floor once cancellation is heavy.
const CANCELLATION_FLOOR: f64 = 1e-4;

/// Adaptive Gauss-Kronrod 21 over consecutive intervals of `breaks` (sorted, finite).
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64, QuadError> {
    let mut segs = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            segs.push(gk21(&mut f, w[0], w[1])?);
        }
    }
    if segs.is_empty() {
        return Ok(0.0);
    }
    let budget = max_subdivisions * segs.len();
    let mut splits = 0;
    loop {
        let (mut total, mut abs_total, mut err_total) = (0.0, 0.0, 0.0);
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            total += s.value;
            abs_total += s.abs;
            err_total += s.error;
            if s.error > segs[worst].error {
                worst = i;
            }
        }
        let tol = rel_tol * total.abs().max(CANCELLATION_FLOOR * abs_total);
        if err_total <= tol || err_total <= 50.0 * f64::EPSILON * abs_total {
            return Ok(total);
        }
        if splits >= budget {
            return Err(QuadError::NonConvergence { value: total, error: err_total, intervals: segs.len() });
        }
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if !(mid > s.a && mid < s.b) {
            return Err(QuadError::NonConvergence { value: total, error: err_total, intervals: segs.len() + 1 });
        }
        segs.push(gk21(&mut f, s.a, mid)?);
        segs.push(gk21(&mut f, mid, s.b)?);
        splits += 1;
    }
}

/// Integrate sign * exp(log_mag) given pointwise in signed log form. The integrand is
/// rescaled by its largest sampled exponent before the adaptive pass.
pub fn integrate_log<F: FnMut(f64) -> SignedLog>(
    mut log_f: F,
    breaks: &[f64],
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<SignedLog, QuadError> {
    const SAMPLES: usize = 8;
    let mut shift = f64::NEG_INFINITY;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        for k in 0..=SAMPLES {
            let p = w[0] + (w[1] - w[0]) * (k as f64 + 0.5) / (SAMPLES as f64 + 1.0);
            let v = log_f(p);
            if v.log_mag.is_nan() {
                return Err(QuadError::NonFinite { at: p });
            }
            shift = shift.max(v.log_mag);
        }
    }
    if shift == f64::NEG_INFINITY {
        shift = 0.0;
    }
    // a rescale retry covers peaks the sampling missed by more than ~700 in log
    for _ in 0..4 {
        let seen = Cell::new(f64::NEG_INFINITY);
        let res = integrate(
            |p| {
                let v = log_f(p);
                if v.log_mag > seen.get() {
                    seen.set(v.log_mag);
                }
                if v.is_zero() {
                    0.0
                } else {
                    v.sign * (v.log_mag - shift).exp()
                }
            },
            breaks,
            rel_tol,
            max_subdivisions,
        );
        match res {
            Ok(v) if v.is_finite() => return Ok(SignedLog::from_f64(v).scale(shift)),
            Err(QuadError::NonFinite { .. }) | Ok(_) if seen.get() > shift + 600.0 && seen.get().is_finite() => {
                shift = seen.get();
            }
            Ok(_) => return Err(QuadError::NonFinite { at: f64::NAN }),
            Err(e) => return Err(e),
        }
    }
    Err(QuadError::NonFinite { at: f64::NAN })
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // three-term recurrence for P_n and its derivative
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Sorted, deduplicated union of cut points clipped to [lo, hi], endpoints included.
pub fn cut_points(lo: f64, hi: f64, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = extra.into_iter().filter(|p| *p > lo && *p < hi).collect();
    v.push(lo);
    v.push(hi);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}
