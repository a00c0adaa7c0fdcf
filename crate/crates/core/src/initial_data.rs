//! Piecewise-constant initial data and its exact antiderivative V(x) = int_0^x u0.

use thiserror::Error;

/// Smallest viscosity the viscous evaluators accept.
pub const MIN_VISCOSITY: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("breakpoints must be finite and strictly increasing")]
    Breakpoints,
    #[error("expected {expected} values for {breakpoints} breakpoints, got {got}")]
    ValueCount { expected: usize, breakpoints: usize, got: usize },
    #[error("values must be finite")]
    NonFiniteValue,
    #[error("viscosity {0} is below the supported floor {MIN_VISCOSITY}")]
    ViscosityFloor(f64),
    #[error("viscosity must be positive and finite, got {0}")]
    ViscosityInvalid(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Viscosity(f64);

impl Viscosity {
    pub fn new(eps: f64) -> Result<Self, DataError> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(DataError::ViscosityInvalid(eps));
        }
        if eps < MIN_VISCOSITY {
            return Err(DataError::ViscosityFloor(eps));
        }
        Ok(Viscosity(eps))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which half-line a xi-integral runs over: `Forward` reads V(xi), `Backward` reads V(-xi).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Linear piece of xi -> V(+-xi) on [lo, hi], xi >= 0. `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub v_lo: f64,
    pub slope: f64,
}

impl Piece {
    pub fn value(&self, xi: f64) -> f64 {
        self.v_lo + self.slope * (xi - self.lo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    bound: f64,
    // V at each breakpoint
    v_at: Vec<f64>,
}

impl InitialData {
    /// `values[k]` holds on (b[k-1], b[k]); values[0] left of b[0], the last right of the last breakpoint.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, DataError> {
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DataError::Breakpoints);
        }
        if values.len() != breakpoints.len() + 1 {
            return Err(DataError::ValueCount {
                expected: breakpoints.len() + 1,
                breakpoints: breakpoints.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DataError::NonFiniteValue);
        }
        let bound = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut data = InitialData { breakpoints, values, bound, v_at: Vec::new() };
        data.v_at = data.breakpoints.iter().map(|&b| data.integral_from_zero(b)).collect();
        Ok(data)
    }

    pub fn constant(c: f64) -> Result<Self, DataError> {
        Self::new(vec![], vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(0.0).expect("zero datum is valid")
    }

    /// `left` for x < 0, `right` for x > 0.
    pub fn riemann(left: f64, right: f64) -> Result<Self, DataError> {
        Self::new(vec![0.0], vec![left, right])
    }

    /// `inside` on (a, b), `outside` elsewhere.
    pub fn rectangle(a: f64, b: f64, inside: f64, outside: f64) -> Result<Self, DataError> {
        Self::new(vec![a, b], vec![outside, inside, outside])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// sup |u0|
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Largest |breakpoint|, 0 for constant data.
    pub fn support_radius(&self) -> f64 {
        self.breakpoints.iter().fold(0.0f64, |m, b| m.max(b.abs()))
    }

    fn interval_index(&self, x: f64) -> usize {
        // right-continuous: a breakpoint belongs to the interval on its right
        self.breakpoints.partition_point(|&b| b <= x)
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.values[self.interval_index(x)]
    }

    // plain per-interval sum, used once per breakpoint at construction
    fn integral_from_zero(&self, x: f64) -> f64 {
        let (lo, hi, sign) = if x >= 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend_from_slice(&self.breakpoints);
        edges.push(f64::INFINITY);
        let mut total = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            let a = edges[k].max(lo);
            let b = edges[k + 1].min(hi);
            if b > a {
                total += v * (b - a);
            }
        }
        sign * total
    }

    /// V(x) = int_0^x u0, with V(x) = -int_x^0 u0 for x < 0.
    pub fn cumulative(&self, x: f64) -> f64 {
        let k = self.interval_index(x);
        let k0 = self.interval_index(0.0);
        if k == k0 {
            return self.values[k] * x;
        }
        // anchor at the nearest breakpoint between 0 and x
        if x > 0.0 {
            let b = self.breakpoints[k - 1];
            self.v_at[k - 1] + self.values[k] * (x - b)
        } else {
            let b = self.breakpoints[k];
            self.v_at[k] - self.values[k] * (b - x)
        }
    }

    pub fn theta0_log(&self, eps: Viscosity, xi: f64) -> f64 {
        -self.cumulative(xi) / (2.0 * eps.get())
    }

    pub fn theta0(&self, eps: Viscosity, xi: f64) -> f64 {
        self.theta0_log(eps, xi).exp()
    }

    /// Linear pieces of xi -> V(xi) (Forward) or xi -> V(-xi) (Backward) on [0, inf).
    pub fn pieces(&self, dir: Direction) -> Vec<Piece> {
        let mut cuts: Vec<f64> = match dir {
            Direction::Forward => self.breakpoints.iter().copied().filter(|&b| b > 0.0).collect(),
            Direction::Backward => self.breakpoints.iter().rev().map(|&b| -b).filter(|&b| b > 0.0).collect(),
        };
        cuts.insert(0, 0.0);
        cuts.push(f64::INFINITY);
        let mut out = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (v_lo, slope) = match dir {
                Direction::Forward => (self.cumulative(lo), self.value_at(lo)),
                // d/dxi V(-xi) = -u0(-xi); take the value just left of -lo
                Direction::Backward => {
                    let probe = if hi.is_finite() { -(lo + hi) / 2.0 } else { -lo - 1.0 };
                    (self.cumulative(-lo), -self.value_at(probe))
                }
            };
            out.push(Piece { lo, hi, v_lo, slope });
        }
        out
    }
}
