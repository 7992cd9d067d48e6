//! JSON scenario files.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use tomoscope_core::decoherence::{ChannelKind, ChannelParams};
use tomoscope_core::kerr::KerrParams;
use tomoscope_core::special::gcd;
use tomoscope_core::states::{
    CatParams, CoherentParams, InitialState, Parity, PhotonAddedParams, DEFAULT_DELTA,
};
use tomoscope_core::tomography::QuadratureGrid;

use crate::error::CliError;
use crate::expr::{eval, Symbols};

/// A real number given either literally or as a symbolic expression.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Number(f64),
    Expr(String),
}

impl Real {
    pub fn resolve(&self, field: &str, symbols: &Symbols) -> Result<f64, CliError> {
        match self {
            Real::Number(v) => Ok(*v),
            Real::Expr(s) => eval(s, symbols).map_err(|e| CliError::config(field, e.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    Coherent {
        mean_photon: f64,
        delta: Option<Real>,
    },
    PhotonAdded {
        mean_photon: f64,
        delta: Option<Real>,
        m: usize,
    },
    Cat {
        mean_photon: f64,
        delta: Option<Real>,
        h: u8,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t: Option<Real>,
    pub revival_fraction: Option<(u32, u32)>,
    pub collapse_irrational: Option<String>,
}

/// `scaled_time` is a number, an expression, or `"inf"` for the long-time limit.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    pub scaled_time: Real,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub thetas: Option<usize>,
    pub xs: Option<usize>,
    pub x_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Raster,
    Pgm,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub state: StateConfig,
    pub chi: Option<f64>,
    pub time: TimeConfig,
    pub channel: Option<ChannelConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: Vec<OutputConfig>,
}

/// A validated scenario with every symbolic value resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub state: InitialState,
    pub kerr: KerrParams,
    pub time: f64,
    pub channel: Option<ChannelParams>,
    pub grid: GridConfig,
    pub outputs: Vec<OutputConfig>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<Scenario, CliError> {
        let kerr = KerrParams::new(self.chi.unwrap_or(tomoscope_core::kerr::DEFAULT_CHI))
            .map_err(|e| CliError::config("chi", e.to_string()))?;
        let symbols = Symbols {
            t_rev: Some(PI / kerr.chi()),
        };
        let state = self.resolve_state(&symbols)?;
        let time = self.resolve_time(&kerr, &symbols)?;
        let channel = match &self.channel {
            None => None,
            Some(c) => {
                let tau = match &c.scaled_time {
                    Real::Expr(s) if s.trim() == "inf" => f64::INFINITY,
                    other => other.resolve("channel.scaled_time", &symbols)?,
                };
                Some(
                    ChannelParams::new(c.kind, tau)
                        .map_err(|e| CliError::config("channel.scaled_time", e.to_string()))?,
                )
            }
        };
        if let Some(x) = self.grid.x_max {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CliError::config("grid.x_max", format!("must be positive, got {x}")));
            }
        }
        Ok(Scenario {
            state,
            kerr,
            time,
            channel,
            grid: self.grid.clone(),
            outputs: self.outputs.clone(),
        })
    }

    fn resolve_state(&self, symbols: &Symbols) -> Result<InitialState, CliError> {
        let base = |mu: f64, delta: &Option<Real>| -> Result<CoherentParams, CliError> {
            let delta = match delta {
                Some(d) => d.resolve("state.delta", symbols)?,
                None => DEFAULT_DELTA,
            };
            CoherentParams::new(mu, delta).map_err(|e| CliError::config("state.mean_photon", e.to_string()))
        };
        match &self.state {
            StateConfig::Coherent { mean_photon, delta } => Ok(InitialState::Coherent(base(*mean_photon, delta)?)),
            StateConfig::PhotonAdded { mean_photon, delta, m } => Ok(InitialState::PhotonAdded(PhotonAddedParams {
                base: base(*mean_photon, delta)?,
                m: *m,
            })),
            StateConfig::Cat { mean_photon, delta, h } => {
                let parity = Parity::from_flag(*h).map_err(|e| CliError::config("state.h", e.to_string()))?;
                let p = CatParams {
                    base: base(*mean_photon, delta)?,
                    parity,
                };
                p.normalization().map_err(|e| CliError::config("state.h", e.to_string()))?;
                Ok(InitialState::Cat(p))
            }
        }
    }

    fn resolve_time(&self, kerr: &KerrParams, symbols: &Symbols) -> Result<f64, CliError> {
        let tc = &self.time;
        let forms = tc.t.is_some() as u8 + tc.revival_fraction.is_some() as u8 + tc.collapse_irrational.is_some() as u8;
        if forms != 1 {
            return Err(CliError::config(
                "time",
                "give exactly one of t, revival_fraction, collapse_irrational",
            ));
        }
        if let Some(t) = &tc.t {
            let t = t.resolve("time.t", symbols)?;
            if !t.is_finite() {
                return Err(CliError::config("time.t", "must be finite"));
            }
            return Ok(t);
        }
        if let Some((j, l)) = tc.revival_fraction {
            if l == 0 {
                return Err(CliError::config("time.revival_fraction", "denominator must be positive"));
            }
            if gcd(j as u64, l as u64) != 1 {
                return Err(CliError::config(
                    "time.revival_fraction",
                    format!("{j}/{l} is not in lowest terms"),
                ));
            }
            return Ok(PI * j as f64 / (l as f64 * kerr.chi()));
        }
        match tc.collapse_irrational.as_deref().map(str::trim) {
            Some("1/sqrt2") | Some("1/sqrt(2)") => Ok(PI / kerr.chi() / std::f64::consts::SQRT_2),
            Some(other) => Err(CliError::config(
                "time.collapse_irrational",
                format!("unsupported value '{other}', expected \"1/sqrt2\""),
            )),
            None => unreachable!("exactly one time form is present"),
        }
    }
}

impl Scenario {
    /// Configured lattice, defaulting X_max to cover a state with mean
    /// photon number `mean_photon`.
    pub fn quadrature_grid(&self, mean_photon: f64) -> Result<QuadratureGrid, CliError> {
        let default = QuadratureGrid::default_for(mean_photon).map_err(CliError::Core)?;
        QuadratureGrid::new(
            self.grid.thetas.unwrap_or(default.n_theta()),
            self.grid.xs.unwrap_or(default.n_x()),
            self.grid.x_max.unwrap_or(default.x_max()),
        )
        .map_err(|e| CliError::config("grid", e.to_string()))
    }

    pub fn channel_kind(&self) -> Option<ChannelKind> {
        self.channel.map(|c| c.kind())
    }
}
