//! Run configuration: a flat JSON document validated into [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::GmresConfig;
use crate::presets::{InitialParams, Preset};
use crate::simm::PicardConfig;
use crate::systems::{EnergyParams, SystemKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Collocated finite volumes with explicit Runge–Kutta.
    Htc,
    /// Staggered semi-implicit mimetic scheme.
    Simm,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Htc => "htc",
            SchemeKind::Simm => "simm",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "htc" => Ok(SchemeKind::Htc),
            "simm" => Ok(SchemeKind::Simm),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected htc or simm)"
            ))),
        }
    }
}

/// Time step control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Fixed `Δt` (SIMM).
    Fixed(f64),
    /// CFL number (HTC).
    Cfl(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Record every `stride`-th step; the initial and final states are always
    /// recorded.
    pub stride: usize,
    pub snapshot_times: Vec<f64>,
}

/// Validated run configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub system: SystemKind,
    pub scheme: SchemeKind,
    pub nx: usize,
    pub ny: usize,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub t_end: f64,
    pub time_step: TimeStep,
    pub rk_order: usize,
    pub tableau_file: Option<PathBuf>,
    pub gauss_points: usize,
    pub picard: PicardConfig,
    pub energy: EnergyParams,
    pub initial: InitialParams,
    pub output: OutputConfig,
    /// Caps the SIMM `Δt` at this CFL number times the explicit limit.
    pub simm_cfl_cap: Option<f64>,
}

/// Raw document; every key optional so that missing keys can be listed
/// together.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    system: Option<String>,
    scheme: Option<String>,
    nx: Option<usize>,
    ny: Option<usize>,
    x_range: Option<[f64; 2]>,
    y_range: Option<[f64; 2]>,
    t_end: Option<f64>,
    dt: Option<f64>,
    cfl: Option<f64>,
    rk_order: Option<usize>,
    tableau_file: Option<PathBuf>,
    gauss_points: Option<usize>,
    picard_tol: Option<f64>,
    picard_increment_tol: Option<f64>,
    picard_max_iters: Option<usize>,
    krylov_tol: Option<f64>,
    krylov_max_iters: Option<usize>,
    krylov_restart: Option<usize>,
    gamma: Option<f64>,
    maxwell_eps: Option<f64>,
    mu0: Option<f64>,
    sigma: Option<f64>,
    b0: Option<[f64; 3]>,
    d0: Option<[f64; 3]>,
    p0: Option<f64>,
    background: Option<f64>,
    phi_amp: Option<f64>,
    psi_amp: Option<f64>,
    output_dir: Option<PathBuf>,
    stride: Option<usize>,
    snapshot_times: Option<Vec<f64>>,
    simm_cfl_cap: Option<f64>,
}

/// Parses and validates a JSON configuration. An empty document is treated
/// as `{}`.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = if text.trim().is_empty() {
        RawConfig::default()
    } else {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?
    };
    raw.validate()
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig> {
        let mut missing = vec![];
        if self.preset.is_none() {
            missing.push("preset");
        }
        if self.nx.is_none() {
            missing.push("nx");
        }
        if self.ny.is_none() {
            missing.push("ny");
        }
        if self.t_end.is_none() {
            missing.push("t_end");
        }
        if self.dt.is_none() && self.cfl.is_none() {
            missing.push("dt (simm) or cfl (htc)");
        }
        if !missing.is_empty() {
            return Err(Error::Config(format!("missing required keys: {}", missing.join(", "))));
        }

        let preset: Preset = self.preset.as_deref().unwrap_or_default().parse()?;
        let system = match self.system.as_deref() {
            None => preset.system(),
            Some(s) => {
                let s: SystemKind = s.parse()?;
                if s != preset.system() {
                    return Err(Error::Config(format!(
                        "preset {preset} is defined for system {}, not {s}",
                        preset.system()
                    )));
                }
                s
            }
        };

        let time_step = match (self.dt, self.cfl) {
            (Some(_), Some(_)) => return Err(Error::Config("set exactly one of dt and cfl".into())),
            (Some(dt), None) => TimeStep::Fixed(dt),
            (None, Some(cfl)) => TimeStep::Cfl(cfl),
            (None, None) => unreachable!("checked above"),
        };
        let implied = match time_step {
            TimeStep::Fixed(_) => SchemeKind::Simm,
            TimeStep::Cfl(_) => SchemeKind::Htc,
        };
        let scheme = match self.scheme.as_deref() {
            None => implied,
            Some(s) => {
                let s: SchemeKind = s.parse()?;
                if s != implied {
                    return Err(Error::Config(match s {
                        SchemeKind::Simm => "the simm scheme takes a fixed dt, not cfl".into(),
                        SchemeKind::Htc => "the htc scheme takes cfl, not a fixed dt".into(),
                    }));
                }
                s
            }
        };
        match time_step {
            TimeStep::Fixed(dt) if !(dt > 0.0 && dt.is_finite()) => {
                return Err(Error::Config(format!("dt must be positive, got {dt}")));
            }
            TimeStep::Cfl(c) if !(c > 0.0 && c <= 1.0) => {
                return Err(Error::Config(format!("cfl must be in (0, 1], got {c}")));
            }
            _ => {}
        }

        let (nx, ny) = (self.nx.unwrap_or_default(), self.ny.unwrap_or_default());
        if nx == 0 || ny == 0 {
            return Err(Error::Config(format!("nx and ny must be positive, got {nx}x{ny}")));
        }
        let t_end = self.t_end.unwrap_or_default();
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be non-negative, got {t_end}")));
        }
        let (dx, dy) = preset.domain();
        let x_range = self.x_range.unwrap_or(dx);
        let y_range = self.y_range.unwrap_or(dy);
        for r in [x_range, y_range] {
            if !(r[1] > r[0]) || !r[0].is_finite() || !r[1].is_finite() {
                return Err(Error::Config(format!("domain range {r:?} is empty")));
            }
        }

        let rk_order = self.rk_order.unwrap_or(4);
        if self.tableau_file.is_none() && !(1..=4).contains(&rk_order) {
            return Err(Error::Config(format!(
                "rk_order {rk_order} has no built-in tableau; give tableau_file"
            )));
        }
        let gauss_points = self.gauss_points.unwrap_or(3);
        if !(1..=crate::quadrature::MAX_POINTS).contains(&gauss_points) {
            return Err(Error::Config(format!(
                "gauss_points must be in 1..=64, got {gauss_points}"
            )));
        }

        let d = PicardConfig::default();
        let picard = PicardConfig {
            tol: self.picard_tol.unwrap_or(d.tol),
            increment_tol: self.picard_increment_tol.unwrap_or(d.increment_tol),
            max_iters: self.picard_max_iters.unwrap_or(d.max_iters),
            krylov: GmresConfig {
                restart: self.krylov_restart.unwrap_or(d.krylov.restart),
                tol: self.krylov_tol.unwrap_or(d.krylov.tol),
                max_iters: self.krylov_max_iters.unwrap_or(d.krylov.max_iters),
            },
        };
        picard.validate().map_err(|e| Error::Config(e.to_string()))?;

        let de = EnergyParams::default();
        let energy = EnergyParams {
            gamma: self.gamma.unwrap_or(de.gamma),
            maxwell_eps: self.maxwell_eps.unwrap_or(de.maxwell_eps),
            mu0: self.mu0.unwrap_or(de.mu0),
        };
        energy.validate().map_err(|e| Error::Config(e.to_string()))?;

        let di = preset.default_params();
        let initial = InitialParams {
            sigma: self.sigma.unwrap_or(di.sigma),
            b0: self.b0.unwrap_or(di.b0),
            d0: self.d0.unwrap_or(di.d0),
            p0: self.p0.unwrap_or(di.p0),
            background: self.background.unwrap_or(di.background),
            phi_amp: self.phi_amp.unwrap_or(di.phi_amp),
            psi_amp: self.psi_amp.unwrap_or(di.psi_amp),
        };
        initial.validate()?;
        preset.check_periodic(&initial, x_range, y_range)?;

        let stride = self.stride.unwrap_or(match scheme {
            SchemeKind::Simm => 1,
            SchemeKind::Htc => 10,
        });
        if stride == 0 {
            return Err(Error::Config("stride must be positive".into()));
        }
        let mut snapshot_times = self.snapshot_times.unwrap_or_else(|| vec![t_end]);
        if snapshot_times.iter().any(|t| !(*t >= 0.0 && *t <= t_end)) {
            return Err(Error::Config(format!("snapshot times must lie in [0, {t_end}]")));
        }
        snapshot_times.sort_by(f64::total_cmp);
        snapshot_times.dedup();

        if let Some(c) = self.simm_cfl_cap {
            if scheme != SchemeKind::Simm {
                return Err(Error::Config("simm_cfl_cap applies to the simm scheme only".into()));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("simm_cfl_cap must be positive, got {c}")));
            }
        }
        if scheme == SchemeKind::Simm && (self.rk_order.is_some() || self.tableau_file.is_some()) {
            return Err(Error::Config(
                "rk_order and tableau_file apply to the htc scheme only".into(),
            ));
        }

        Ok(RunConfig {
            preset,
            system,
            scheme,
            nx,
            ny,
            x_range,
            y_range,
            t_end,
            time_step,
            rk_order,
            tableau_file: self.tableau_file,
            gauss_points,
            picard,
            energy,
            initial,
            output: OutputConfig {
                dir: self.output_dir.unwrap_or_else(|| PathBuf::from("output")),
                stride,
                snapshot_times,
            },
            simm_cfl_cap: self.simm_cfl_cap,
        })
    }
}

impl RunConfig {
    /// Configuration for a preset with all defaults. `dt` selects SIMM,
    /// otherwise HTC runs with `cfl`.
    pub fn preset(preset: Preset, nx: usize, ny: usize, t_end: f64, time_step: TimeStep) -> Result<Self> {
        let mut doc = serde_json::Map::new();
        doc.insert("preset".into(), preset.name().into());
        doc.insert("nx".into(), nx.into());
        doc.insert("ny".into(), ny.into());
        doc.insert("t_end".into(), t_end.into());
        match time_step {
            TimeStep::Fixed(dt) => doc.insert("dt".into(), dt.into()),
            TimeStep::Cfl(c) => doc.insert("cfl".into(), c.into()),
        };
        parse_config(&serde_json::Value::Object(doc).to_string())
    }
}
