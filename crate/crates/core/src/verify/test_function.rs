//! Smooth compactly supported test functions for weak-form residuals.

use serde::{Deserialize, Serialize};

/// A phi(x, t) = A psi((x - xc)/rx) psi((t - tc)/rt), psi(s) = exp(1 - 1/(1 - s^2)) on |s| < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub amplitude: f64,
}

// psi and psi' at s
fn profile(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let w = 1.0 - s * s;
    let p = (1.0 - 1.0 / w).exp();
    (p, p * (-2.0 * s / (w * w)))
}

impl TestFunction {
    pub fn new(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64, amplitude: f64) -> Result<Self, String> {
        if !(x_lo < x_hi && t_lo < t_hi) || ![x_lo, x_hi, t_lo, t_hi, amplitude].iter().all(|v| v.is_finite()) {
            return Err(format!("invalid test-function box [{x_lo}, {x_hi}] x [{t_lo}, {t_hi}]"));
        }
        if t_hi <= 0.0 {
            return Err("test function must reach t > 0".into());
        }
        Ok(TestFunction { x_lo, x_hi, t_lo, t_hi, amplitude })
    }

    pub fn scaled(&self, a: f64) -> Self {
        TestFunction { amplitude: self.amplitude * a, ..*self }
    }

    fn coords(&self, x: f64, t: f64) -> (f64, f64, f64, f64) {
        let rx = 0.5 * (self.x_hi - self.x_lo);
        let rt = 0.5 * (self.t_hi - self.t_lo);
        ((x - self.x_lo) / rx - 1.0, (t - self.t_lo) / rt - 1.0, rx, rt)
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        let (sx, st, _, _) = self.coords(x, t);
        self.amplitude * profile(sx).0 * profile(st).0
    }

    pub fn dx(&self, x: f64, t: f64) -> f64 {
        let (sx, st, rx, _) = self.coords(x, t);
        self.amplitude * profile(sx).1 / rx * profile(st).0
    }

    pub fn dt(&self, x: f64, t: f64) -> f64 {
        let (sx, st, _, rt) = self.coords(x, t);
        self.amplitude * profile(sx).0 * profile(st).1 / rt
    }

    /// The part of the support box with t >= 0.
    pub fn time_range(&self) -> (f64, f64) {
        (self.t_lo.max(0.0), self.t_hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_differences() {
        let f = TestFunction::new(-1.0, 2.0, 0.2, 1.8, 1.7).unwrap();
        let h = 1e-6;
        for &(x, t) in &[(0.3, 0.9), (-0.5, 0.4), (1.6, 1.5)] {
            let dx = (f.value(x + h, t) - f.value(x - h, t)) / (2.0 * h);
            let dt = (f.value(x, t + h) - f.value(x, t - h)) / (2.0 * h);
            assert!((dx - f.dx(x, t)).abs() < 1e-7);
            assert!((dt - f.dt(x, t)).abs() < 1e-7);
        }
    }

    #[test]
    fn vanishes_on_and_outside_box() {
        let f = TestFunction::new(0.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(f.value(0.0, 0.5), 0.0);
        assert_eq!(f.value(0.5, 1.0), 0.0);
        assert_eq!(f.dx(1.2, 0.5), 0.0);
        assert!((f.value(0.5, 0.5) - 1.0).abs() < 1e-15);
        // first derivatives fade at the edge
        assert!(f.dx(1e-3, 0.5).abs() < 1e-100);
    }
}
