//! Built-in initial value problems.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::systems::SystemKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Gaussian pulse in `B3` and `D3` for the nonlinear Maxwell system.
    MaxwellGaussian,
    /// Gaussian density bump at rest on a constant background.
    AcousticGaussian,
    /// Planar sine wave along `x1 + x2` for the Maxwell-GLM system.
    GlmPlanar,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::MaxwellGaussian, Preset::AcousticGaussian, Preset::GlmPlanar];

    pub fn name(self) -> &'static str {
        match self {
            Preset::MaxwellGaussian => "maxwell_gaussian",
            Preset::AcousticGaussian => "acoustic_gaussian",
            Preset::GlmPlanar => "glm_planar",
        }
    }

    pub fn system(self) -> SystemKind {
        match self {
            Preset::MaxwellGaussian => SystemKind::Maxwell,
            Preset::AcousticGaussian => SystemKind::Acoustics,
            Preset::GlmPlanar => SystemKind::MaxwellGlm,
        }
    }

    /// Default `([x0, x1], [y0, y1])`.
    pub fn domain(self) -> ([f64; 2], [f64; 2]) {
        match self {
            Preset::MaxwellGaussian => ([-1.0, 1.0], [-1.0, 1.0]),
            Preset::AcousticGaussian => ([-0.5, 0.5], [-0.5, 0.5]),
            Preset::GlmPlanar => ([0.0, 1.0], [0.0, 1.0]),
        }
    }

    pub fn default_params(self) -> InitialParams {
        match self {
            Preset::MaxwellGaussian => InitialParams {
                sigma: 0.1,
                b0: [0.0, 0.0, 1e-2],
                d0: [0.0, 0.0, 1e-2],
                ..InitialParams::zero()
            },
            Preset::AcousticGaussian => InitialParams {
                sigma: 0.05,
                p0: 1.0,
                background: 4.0,
                ..InitialParams::zero()
            },
            Preset::GlmPlanar => InitialParams {
                b0: [0.125, 0.0, 0.5],
                d0: [0.25, 0.5, 0.0],
                phi_amp: 0.125,
                psi_amp: 0.25,
                ..InitialParams::zero()
            },
        }
    }

    /// Full state vector at `x`.
    pub fn evaluate(self, params: &InitialParams, x: [f64; 2]) -> Vec<f64> {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self {
            Preset::MaxwellGaussian => {
                let g = (-0.5 * r2 / (params.sigma * params.sigma)).exp();
                let mut q = vec![0.0; 6];
                for k in 0..3 {
                    q[k] = params.b0[k] * g;
                    q[3 + k] = params.d0[k] * g;
                }
                q
            }
            Preset::AcousticGaussian => {
                let rho = params.p0 * (-0.5 * r2 / (params.sigma * params.sigma)).exp() + params.background;
                vec![0.0, 0.0, 0.0, rho]
            }
            Preset::GlmPlanar => {
                let s = (std::f64::consts::TAU * (x[0] + x[1])).sin();
                vec![
                    params.b0[0] * s,
                    params.b0[1] * s,
                    params.b0[2] * s,
                    params.phi_amp * s,
                    params.d0[0] * s,
                    params.d0[1] * s,
                    params.d0[2] * s,
                    params.psi_amp * s,
                ]
            }
        }
    }

    /// Rejects profiles whose values differ on opposite domain edges.
    pub fn check_periodic(self, params: &InitialParams, x_range: [f64; 2], y_range: [f64; 2]) -> Result<()> {
        const SAMPLES: usize = 33;
        let mut scale: f64 = 0.0;
        let mut worst: f64 = 0.0;
        for k in 0..=SAMPLES {
            let t = k as f64 / SAMPLES as f64;
            let y = y_range[0] + t * (y_range[1] - y_range[0]);
            let x = x_range[0] + t * (x_range[1] - x_range[0]);
            for (a, b) in [([x_range[0], y], [x_range[1], y]), ([x, y_range[0]], [x, y_range[1]])] {
                let (qa, qb) = (self.evaluate(params, a), self.evaluate(params, b));
                for (u, v) in qa.iter().zip(&qb) {
                    scale = scale.max(u.abs()).max(v.abs());
                    worst = worst.max((u - v).abs());
                }
            }
        }
        // Interior values set the scale for the mismatch.
        let centre = [0.5 * (x_range[0] + x_range[1]), 0.5 * (y_range[0] + y_range[1])];
        for v in self.evaluate(params, centre) {
            scale = scale.max(v.abs());
        }
        let amplitude = params.b0.iter().chain(&params.d0).fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = scale
            .max(amplitude)
            .max(params.p0.abs())
            .max(params.phi_amp.abs())
            .max(params.psi_amp.abs());
        if worst > 1e-8 * scale {
            return Err(Error::Config(format!(
                "initial data of {} is not periodic on [{}, {}] x [{}, {}] (edge mismatch {worst:e})",
                self.name(),
                x_range[0],
                x_range[1],
                y_range[0],
                y_range[1]
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown preset '{s}' (expected one of maxwell_gaussian, acoustic_gaussian, glm_planar)"
            ))
        })
    }
}

/// Amplitudes and shape parameters of the initial data. Fields a preset
/// does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialParams {
    pub sigma: f64,
    pub b0: [f64; 3],
    pub d0: [f64; 3],
    pub p0: f64,
    pub background: f64,
    pub phi_amp: f64,
    pub psi_amp: f64,
}

impl InitialParams {
    fn zero() -> Self {
        Self {
            sigma: 1.0,
            b0: [0.0; 3],
            d0: [0.0; 3],
            p0: 0.0,
            background: 0.0,
            phi_amp: 0.0,
            psi_amp: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::Config(format!("sigma must be positive, got {}", self.sigma)));
        }
        let all = self
            .b0
            .iter()
            .chain(&self.d0)
            .chain([&self.p0, &self.background, &self.phi_amp, &self.psi_amp]);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("initial-data parameters must be finite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxwell_gaussian_peak() {
        let p = Preset::MaxwellGaussian;
        let q = p.evaluate(&p.default_params(), [0.0, 0.0]);
        assert_eq!(q, vec![0.0, 0.0, 1e-2, 0.0, 0.0, 1e-2]);
    }

    #[test]
    fn glm_planar_zero_line() {
        let p = Preset::GlmPlanar;
        let q = p.evaluate(&p.default_params(), [0.3, -0.3]);
        assert!(q.iter().all(|v| *v == 0.0));
        let q = p.evaluate(&p.default_params(), [0.125, 0.125]);
        assert!((q[3] - 0.125).abs() < 1e-15 && (q[7] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn acoustic_far_field_is_background() {
        let p = Preset::AcousticGaussian;
        let q = p.evaluate(&p.default_params(), [0.5, 0.5]);
        assert!((q[3] - 4.0).abs() < 1e-20);
        let q = p.evaluate(&p.default_params(), [0.0, 0.0]);
        assert_eq!(q[3], 5.0);
    }

    #[test]
    fn periodicity_check() {
        for p in Preset::ALL {
            let (x, y) = p.domain();
            p.check_periodic(&p.default_params(), x, y).unwrap();
        }
        let p = Preset::GlmPlanar;
        assert!(p.check_periodic(&p.default_params(), [0.0, 0.7], [0.0, 1.0]).is_err());
        let p = Preset::MaxwellGaussian;
        assert!(p.check_periodic(&p.default_params(), [0.0, 0.3], [-1.0, 1.0]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("nope".parse::<Preset>().is_err());
    }
}
