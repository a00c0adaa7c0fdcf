//! TOML run configuration. Unknown keys are rejected; everything is validated before any work.

use serde::Deserialize;

use crate::initial_data::{InitialData, Viscosity};
use crate::quadrature::QuadratureSpec;
use crate::variational::{SearchSpec, Side};
use crate::verify::{TestFunction, Which};
use crate::viscous::WeakGrid;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub threads: Option<usize>,
    pub out_dir: Option<String>,
    pub initial_data: DataConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub search: SearchSpec,
    pub viscous: Option<ViscousConfig>,
    pub limit: Option<LimitConfig>,
    pub interfaces: Option<InterfacesConfig>,
    pub verify: Option<VerifyConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

/// n equally spaced points from min to max; n = 1 gives min.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        (0..self.n).map(|k| self.min + (self.max - self.min) * k as f64 / (self.n - 1) as f64).collect()
    }

    fn validate(&self, what: &str, positive: bool) -> Result<(), String> {
        if self.n == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(format!("{what}: need finite min <= max and n >= 1"));
        }
        if positive && !(self.min > 0.0) {
            return Err(format!("{what}: times must be positive, got min = {}", self.min));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscousConfig {
    pub eps: Vec<f64>,
    pub x: Grid,
    pub t: Grid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitConfig {
    pub x: Grid,
    pub t: Grid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfacesConfig {
    pub t: Grid,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
}

/// One `[[verify.checks]]` entry: optional `name` and `acceptance`, the rest selected by `kind`.
#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "toml::Table")]
pub struct CheckConfig {
    pub name: Option<String>,
    pub acceptance: Option<bool>,
    pub kind: CheckKind,
}

impl TryFrom<toml::Table> for CheckConfig {
    type Error = String;

    fn try_from(mut table: toml::Table) -> Result<Self, String> {
        let name = match table.remove("name") {
            None => None,
            Some(toml::Value::String(s)) => Some(s),
            Some(v) => return Err(format!("check name must be a string, got {v}")),
        };
        let acceptance = match table.remove("acceptance") {
            None => None,
            Some(toml::Value::Boolean(b)) => Some(b),
            Some(v) => return Err(format!("check acceptance must be a boolean, got {v}")),
        };
        let kind = CheckKind::deserialize(toml::Value::Table(table)).map_err(|e| e.to_string())?;
        Ok(CheckConfig { name, acceptance, kind })
    }
}

fn default_ladder() -> Vec<f64> {
    vec![0.2, 0.1, 0.05]
}
fn default_rh_dt() -> f64 {
    1e-2
}
fn default_step() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckKind {
    Convergence {
        points: Vec<[f64; 2]>,
        #[serde(default = "default_ladder")]
        eps: Vec<f64>,
        final_gap_tol: f64,
    },
    FluxJump {
        times: Vec<f64>,
        tol: f64,
    },
    RankineHugoniot {
        times: Vec<f64>,
        side: SideName,
        which: Which,
        #[serde(default = "default_rh_dt")]
        dt: f64,
        tol: f64,
    },
    InviscidWeak {
        test_functions: Vec<TestFunction>,
        tol: f64,
    },
    PdeResidual {
        eps: f64,
        points: Vec<[f64; 2]>,
        #[serde(default = "default_step")]
        hx: f64,
        #[serde(default = "default_step")]
        ht: f64,
        tol: f64,
    },
    ViscousWeak {
        eps: f64,
        test_functions: Vec<TestFunction>,
        tol: f64,
        panels: Option<usize>,
        nodes: Option<usize>,
    },
    EntropyMeasure {
        times: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideName {
    Left,
    Right,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Side {
        match s {
            SideName::Left => Side::Left,
            SideName::Right => Side::Right,
        }
    }
}

impl CheckKind {
    pub fn label(&self) -> &'static str {
        match self {
            CheckKind::Convergence { .. } => "convergence",
            CheckKind::FluxJump { .. } => "flux_jump",
            CheckKind::RankineHugoniot { .. } => "rankine_hugoniot",
            CheckKind::InviscidWeak { .. } => "inviscid_weak",
            CheckKind::PdeResidual { .. } => "pde_residual",
            CheckKind::ViscousWeak { .. } => "viscous_weak",
            CheckKind::EntropyMeasure { .. } => "entropy_measure",
        }
    }

    /// Entropy measure is a diagnostic; everything else gates the exit code by default.
    pub fn default_acceptance(&self) -> bool {
        !matches!(self, CheckKind::EntropyMeasure { .. })
    }

    pub fn weak_grid(&self) -> WeakGrid {
        match self {
            CheckKind::ViscousWeak { panels, nodes, .. } => {
                let d = WeakGrid::default();
                WeakGrid { panels: panels.unwrap_or(d.panels), nodes: nodes.unwrap_or(d.nodes) }
            }
            _ => WeakGrid::default(),
        }
    }
}

fn times_ok(what: &str, ts: &[f64]) -> Result<(), String> {
    if ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(format!("{what}: times must be positive and finite"));
    }
    Ok(())
}

fn tol_ok(what: &str, tol: f64) -> Result<(), String> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(format!("{what}: tolerance must be a nonnegative number, got {tol}"));
    }
    Ok(())
}

fn viscosity_ok(what: &str, e: f64) -> Result<(), String> {
    Viscosity::new(e).map(|_| ()).map_err(|err| format!("{what}: {err}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| format!("invalid config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn data(&self) -> Result<InitialData, String> {
        InitialData::new(self.initial_data.breakpoints.clone(), self.initial_data.values.clone()).map_err(|e| format!("initial_data: {e}"))
    }

    pub fn validate(&self) -> Result<(), String> {
        self.data()?;
        self.quadrature.validate().map_err(|e| format!("quadrature: {e}"))?;
        self.search.validate().map_err(|e| format!("search: {e}"))?;
        if self.threads == Some(0) {
            return Err("threads must be at least 1".into());
        }
        if let Some(v) = &self.viscous {
            if v.eps.is_empty() {
                return Err("viscous.eps: need at least one viscosity".into());
            }
            for &e in &v.eps {
                viscosity_ok("viscous.eps", e)?;
            }
            v.x.validate("viscous.x", false)?;
            v.t.validate("viscous.t", true)?;
        }
        if let Some(l) = &self.limit {
            l.x.validate("limit.x", false)?;
            l.t.validate("limit.t", true)?;
        }
        if let Some(i) = &self.interfaces {
            i.t.validate("interfaces.t", true)?;
        }
        if let Some(v) = &self.verify {
            for (k, c) in v.checks.iter().enumerate() {
                let what = format!("verify.checks[{k}] ({})", c.kind.label());
                match &c.kind {
                    CheckKind::Convergence { points, eps, final_gap_tol } => {
                        if eps.is_empty() || eps.windows(2).any(|w| !(w[1] < w[0])) {
                            return Err(format!("{what}: eps must be nonempty and strictly decreasing"));
                        }
                        for &e in eps {
                            viscosity_ok(&what, e)?;
                        }
                        if points.iter().any(|p| p[0] == 0.0 || !p[0].is_finite()) {
                            return Err(format!("{what}: points must be off the axis"));
                        }
                        times_ok(&what, &points.iter().map(|p| p[1]).collect::<Vec<_>>())?;
                        tol_ok(&what, *final_gap_tol)?;
                    }
                    CheckKind::FluxJump { times, tol } => {
                        times_ok(&what, times)?;
                        tol_ok(&what, *tol)?;
                    }
                    CheckKind::RankineHugoniot { times, dt, tol, .. } => {
                        times_ok(&what, times)?;
                        if times.iter().any(|t| !(*dt > 0.0 && dt < t)) {
                            return Err(format!("{what}: need 0 < dt < t"));
                        }
                        tol_ok(&what, *tol)?;
                    }
                    CheckKind::InviscidWeak { tol, .. } => tol_ok(&what, *tol)?,
                    CheckKind::PdeResidual { eps, points, hx, ht, tol } => {
                        viscosity_ok(&what, *eps)?;
                        if points.iter().any(|p| !(p[0].abs() > *hx && p[1] > *ht)) {
                            return Err(format!("{what}: stencils must stay off the axis and above t = 0"));
                        }
                        tol_ok(&what, *tol)?;
                    }
                    CheckKind::ViscousWeak { eps, tol, .. } => {
                        viscosity_ok(&what, *eps)?;
                        tol_ok(&what, *tol)?;
                        let g = c.kind.weak_grid();
                        if g.panels == 0 || g.nodes == 0 {
                            return Err(format!("{what}: panels and nodes must be positive"));
                        }
                    }
                    CheckKind::EntropyMeasure { times } => times_ok(&what, times)?,
                }
                if let CheckKind::InviscidWeak { test_functions, .. } | CheckKind::ViscousWeak { test_functions, .. } = &c.kind {
                    for f in test_functions {
                        TestFunction::new(f.x_lo, f.x_hi, f.t_lo, f.t_hi, f.amplitude).map_err(|e| format!("{what}: {e}"))?;
                    }
                }
            }
        }
        Ok(())
    }
}
