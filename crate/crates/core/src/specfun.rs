//! Special functions: erfc, scaled erfc, scaled I0 and signed log-sum-exp.

use std::f64::consts::PI;

use thiserror::Error;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Below this |z| erfc comes from the erf power series, above it from the continued fraction.
pub const ERFC_SERIES_SWITCH: f64 = 2.0;

/// Below this |z| I0 comes from its power series. The asymptotic series only reaches
/// ~4e-8 at z = 7.75; at z = 20 its smallest term is below 1e-18.
pub const I0_SERIES_SWITCH: f64 = 20.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("erfcx requires z >= 0, got {0}")]
    NegativeArgument(f64),
}

/// Target accuracy and underflow floor for special-function callers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy { rel_tol: 1e-12, abs_floor: 1e-300 }
    }
}

// (2/sqrt(pi)) e^{-z^2} sum 2^n z^{2n+1} / (2n+1)!!, all terms positive
fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    loop {
        term *= 2.0 * z2 / (2.0 * n + 3.0);
        sum += term;
        n += 1.0;
        if term <= sum * 1e-17 {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * (-z2).exp() * sum
}

// sqrt(pi) e^{z^2} erfc(z) by modified Lentz on 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
fn erfc_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = n as f64 * 0.5;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// Complementary error function.
pub fn erfc(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < 0.0 {
        return 2.0 - erfc(-z);
    }
    if z < ERFC_SERIES_SWITCH {
        1.0 - erf_series(z)
    } else {
        (-z * z).exp() * erfc_fraction(z) * FRAC_1_SQRT_PI
    }
}

/// Scaled complementary error function e^{z^2} erfc(z), z >= 0.
pub fn erfcx(z: f64) -> Result<f64, SpecFunError> {
    if z.is_nan() || z < 0.0 {
        return Err(SpecFunError::NegativeArgument(z));
    }
    if z < ERFC_SERIES_SWITCH {
        Ok((z * z).exp() * erfc(z))
    } else {
        Ok(erfc_fraction(z) * FRAC_1_SQRT_PI)
    }
}

/// e^{-|z|} I0(z).
pub fn besseli0_scaled(z: f64) -> f64 {
    let z = z.abs();
    if z.is_nan() {
        return f64::NAN;
    }
    if z < I0_SERIES_SWITCH {
        let q = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= q / (k * k);
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        sum * (-z).exp()
    } else {
        // e^{-z} I0(z) ~ (2 pi z)^{-1/2} sum ((2k-1)!!)^2 / (k! (8z)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 0.0;
        loop {
            let next = term * (2.0 * k + 1.0).powi(2) / (8.0 * (k + 1.0) * z);
            if next > term || next < sum * 1e-17 {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * PI * z).sqrt()
    }
}

/// Real number stored as sign * exp(log_mag). Zero is (+1, -inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub log_mag: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 1.0, log_mag: f64::NEG_INFINITY };

    pub fn new(sign: f64, log_mag: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        SignedLog { sign: if sign < 0.0 { -1.0 } else { 1.0 }, log_mag }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            SignedLog::new(v.signum(), v.abs().ln())
        }
    }

    pub fn to_f64(self) -> f64 {
        self.sign * self.log_mag.exp()
    }


    /// Multiply by e^{shift}.
    pub fn scale(self, shift: f64) -> Self {
        SignedLog::new(self.sign, self.log_mag + shift)
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }
}

impl std::ops::Neg for SignedLog {
    type Output = SignedLog;

    fn neg(self) -> SignedLog {
        if self.is_zero() {
            self
        } else {
            SignedLog { sign: -self.sign, log_mag: self.log_mag }
        }
    }
}

impl std::ops::Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, other: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * other.sign, self.log_mag + other.log_mag)
    }
}

/// Signed log of sum_i s_i e^{L_i}. Terms are summed in a canonical order so the
/// result does not depend on their arrangement.
pub fn log_sum_exp(terms: &[SignedLog]) -> SignedLog {
    let mut sorted: Vec<SignedLog> = terms.iter().copied().filter(|t| !t.is_zero()).collect();
    if sorted.is_empty() {
        return SignedLog::ZERO;
    }
    sorted.sort_by(|a, b| {
        a.log_mag.total_cmp(&b.log_mag).then(a.sign.total_cmp(&b.sign))
    });
    let top = sorted.last().unwrap().log_mag;
    if top == f64::INFINITY {
        let s: f64 = sorted.iter().filter(|t| t.log_mag == f64::INFINITY).map(|t| t.sign).sum();
        return if s == 0.0 {
            SignedLog { sign: 1.0, log_mag: f64::NAN }
        } else {
            SignedLog::new(s, f64::INFINITY)
        };
    }
    let (mut pos, mut neg) = (0.0, 0.0);
    for t in &sorted {
        let w = (t.log_mag - top).exp();
        if t.sign > 0.0 {
            pos += w;
        } else {
            neg += w;
        }
    }
    let diff = pos - neg;
    if diff == 0.0 {
        SignedLog::ZERO
    } else {
        SignedLog::new(diff.signum(), top + diff.abs().ln())
    }
}

/// Signed log of a + b.
pub fn log_add(a: SignedLog, b: SignedLog) -> SignedLog {
    log_sum_exp(&[a, b])
}
