//! Distance between -2 eps log theta and the variational potential along a viscosity ladder.

use serde::{Deserialize, Serialize};

use crate::initial_data::{InitialData, Viscosity};
use crate::par;
use crate::quadrature::QuadratureSpec;
use crate::variational::{limit_U, SearchSpec, Side};
use crate::viscous::{heat, BoundaryTrace};

use super::VerifyError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub x: f64,
    pub t: f64,
    pub eps_list: Vec<f64>,
    /// -2 eps log theta per eps
    pub viscous_values: Vec<f64>,
    pub limit_value: f64,
    pub gaps: Vec<f64>,
    /// None for a single viscosity
    pub strictly_decreasing: Option<bool>,
    pub final_gap: f64,
}

pub fn convergence_study(
    data: &InitialData,
    x: f64,
    t: f64,
    eps_list: &[f64],
    q: &QuadratureSpec,
    search: &SearchSpec,
) -> Result<ConvergenceReport, VerifyError> {
    let side = Side::of(x).ok_or_else(|| VerifyError::Domain("convergence point must be off the axis".into()))?;
    if eps_list.is_empty() {
        return Err(VerifyError::Domain("empty viscosity list".into()));
    }
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(VerifyError::Domain("viscosities must be strictly decreasing".into()));
    }
    let viscs = eps_list.iter().map(|&e| Viscosity::new(e)).collect::<Result<Vec<_>, _>>()?;
    let limit = limit_U(side, data, x, t, search)?.value;
    let viscous_values = par::try_map(&viscs, |&eps| -> Result<f64, VerifyError> {
        let trace = BoundaryTrace::new(data, eps, t, q)?;
        Ok(heat(data, &trace, x, t, q)?.potential(eps))
    })?;
    let gaps: Vec<f64> = viscous_values.iter().map(|v| (v - limit).abs()).collect();
    let strictly_decreasing = (gaps.len() > 1).then(|| gaps.windows(2).all(|w| w[1] < w[0]));
    Ok(ConvergenceReport {
        x,
        t,
        eps_list: eps_list.to_vec(),
        viscous_values,
        limit_value: limit,
        final_gap: *gaps.last().unwrap(),
        gaps,
        strictly_decreasing,
    })
}
