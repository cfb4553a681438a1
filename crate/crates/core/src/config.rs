//! Run configuration: parameter presets, tolerances and integrator limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::HamiltonianParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Coefficients with d = +1/8; the origin is not a saddle.
    PaperFigure,
    /// Same coefficients with d = -1/8, which makes the origin a saddle.
    Validated,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::PaperFigure => "paper-figure",
            Preset::Validated => "validated",
        }
    }

    pub fn params(self, epsilon: f64) -> HamiltonianParams {
        let d = match self {
            Preset::PaperFigure => 1.0 / 8.0,
            Preset::Validated => -1.0 / 8.0,
        };
        HamiltonianParams {
            epsilon,
            a: -5.0 / 3.0,
            b: -3.0 / 2.0,
            c: 1.0,
            d,
            preset_name: self.name().to_string(),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-figure" => Ok(Preset::PaperFigure),
            "validated" => Ok(Preset::Validated),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitParams {
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub surface_tol: f64,
    pub path_tol: f64,
    pub frame_tol: f64,
    pub orbit_tol: f64,
    pub crit_tol: f64,
    pub merge_tol: f64,
    pub level_tol: f64,
    pub degen_tol: f64,
    pub eig_tol: f64,
    pub lie_step: f64,
    pub gap_tol: f64,
    pub fd_tol: f64,
    pub resonance_tol: f64,
    pub asym_tol: f64,
    pub pairing_tol: f64,
    pub claim_tol: f64,
    pub sep_tol: f64,
    pub pole_tol: f64,
    pub wind_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            surface_tol: 1e-10,
            path_tol: 1e-7,
            frame_tol: 1e-8,
            orbit_tol: 1e-7,
            crit_tol: 1e-12,
            merge_tol: 1e-8,
            level_tol: 1e-8,
            degen_tol: 1e-6,
            eig_tol: 1e-8,
            lie_step: 1e-5,
            gap_tol: 1e-6,
            fd_tol: 1e-5,
            resonance_tol: 1e-6,
            asym_tol: 1e-6,
            pairing_tol: 1e-6,
            claim_tol: 1e-9,
            sep_tol: 1e-4,
            pole_tol: 0.05,
            wind_floor: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorLimits {
    pub tol: f64,
    pub min_step: f64,
    pub max_steps: usize,
    pub max_newton: usize,
    pub capture_radius: f64,
    pub no_return_horizon: f64,
}

impl Default for IntegratorLimits {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            min_step: 1e-14,
            max_steps: 5_000_000,
            max_newton: 50,
            capture_radius: 0.1,
            no_return_horizon: 1e4,
        }
    }
}

impl IntegratorLimits {
    pub fn ode_options(&self) -> crate::ode::OdeOptions {
        crate::ode::OdeOptions {
            tol: self.tol,
            min_step: self.min_step,
            max_step: f64::INFINITY,
            max_steps: self.max_steps,
        }
    }
}

/// JSON run configuration. Either `preset` (with optional `epsilon`) or
/// explicit `params` selects the Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub preset: Option<Preset>,
    pub params: Option<ExplicitParams>,
    pub epsilon: Option<f64>,
    pub tolerances: Tolerances,
    pub integrator: IntegratorLimits,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            preset: Some(Preset::Validated),
            params: None,
            epsilon: None,
            tolerances: Tolerances::default(),
            integrator: IntegratorLimits::default(),
            seed: 0,
        }
    }
}

pub const DEFAULT_EPSILON: f64 = 0.5;

impl Config {
    pub fn validated(epsilon: f64) -> Self {
        Self {
            preset: Some(Preset::Validated),
            epsilon: Some(epsilon),
            ..Self::default()
        }
    }

    pub fn paper_figure(epsilon: f64) -> Self {
        Self {
            preset: Some(Preset::PaperFigure),
            epsilon: Some(epsilon),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.params()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<HamiltonianParams> {
        let p = match (&self.params, self.preset) {
            (Some(e), _) => HamiltonianParams {
                epsilon: self.epsilon.unwrap_or(e.epsilon),
                a: e.a,
                b: e.b,
                c: e.c,
                d: e.d,
                preset_name: "explicit".to_string(),
            },
            (None, Some(preset)) => preset.params(self.epsilon.unwrap_or(DEFAULT_EPSILON)),
            (None, None) => return Err(Error::Config("config names neither a preset nor explicit params".into())),
        };
        if !(p.epsilon > 0.0) || !p.epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be positive, got {}", p.epsilon)));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_differ_only_in_d() {
        let v = Preset::Validated.params(0.5);
        let f = Preset::PaperFigure.params(0.5);
        assert_eq!((v.a, v.b, v.c), (f.a, f.b, f.c));
        assert_eq!(v.d, -f.d);
    }

    #[test]
    fn json_round_trip_and_overrides() {
        let cfg = Config::from_json(r#"{"preset":"paper-figure","epsilon":1.0,"tolerances":{"gap_tol":1e-5}}"#).unwrap();
        let p = cfg.params().unwrap();
        assert_eq!(p.epsilon, 1.0);
        assert_eq!(p.d, 0.125);
        assert_eq!(cfg.tolerances.gap_tol, 1e-5);
        assert_eq!(cfg.tolerances.surface_tol, 1e-10);
        let back = Config::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn explicit_params_and_bad_epsilon() {
        let cfg = Config::from_json(r#"{"preset":null,"params":{"epsilon":0.3,"a":1,"b":2,"c":3,"d":4}}"#).unwrap();
        assert_eq!(cfg.params().unwrap().d, 4.0);
        assert!(Config::from_json(r#"{"epsilon":-1.0}"#).is_err());
        assert!(Config::from_json(r#"{"preset":null}"#).is_err());
    }
}
