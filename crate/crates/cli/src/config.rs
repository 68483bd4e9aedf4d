//! TOML run configuration.
//!
//! ```toml
//! [model.ehrenfest]          # or [model.vasicek] with k, theta, sigma, r0
//! N = 16
//! lambda = 0.5
//! alpha = 1.0
//! beta = 1.0
//! r_m = 0.02
//! r_M = 0.06
//!
//! [pricing]
//! t = 0.0
//! T = 1.0
//! r = 0.03
//! M = 10
//! H = 30
//!
//! [simulation]
//! horizon = 10.0
//! paths = 1
//! seed = 42
//!
//! [output]
//! path = "out.csv"
//! format = "csv"
//! ```
//!
//! All rates are decimals: `0.05` means five percent.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use ehrenfest_core::pricing::VasicekParams;
use ehrenfest_core::{EhrenfestParams, Error, ShortRateModel};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelSection>,
    #[serde(default)]
    pub pricing: PricingSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub ehrenfest: Option<EhrenfestSection>,
    pub vasicek: Option<VasicekSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EhrenfestSection {
    #[serde(rename = "N")]
    pub n: u32,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r_m: f64,
    #[serde(rename = "r_M")]
    pub r_max: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VasicekSection {
    pub k: f64,
    pub theta: f64,
    pub sigma: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricingSection {
    pub t: Option<f64>,
    #[serde(rename = "T")]
    pub maturity: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "M")]
    pub outer: Option<u32>,
    #[serde(rename = "H")]
    pub hyper: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub horizon: Option<f64>,
    pub paths: Option<u64>,
    pub seed: Option<u64>,
    /// Starting rate; falls back to `pricing.r`.
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// The model named by the config, validated.
#[derive(Debug, Clone, Copy)]
pub enum Model {
    Ehrenfest(ShortRateModel),
    Vasicek(VasicekParams),
}

/// A configuration problem, reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn field_error(section: &str, err: Error) -> ConfigError {
    match err {
        Error::Parameter { name, reason } => ConfigError(format!("{section}.{name}: {reason}")),
        other => ConfigError(format!("{section}: {other}")),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
            .map_err(|ConfigError(msg)| ConfigError(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string().trim_end().to_string()))
    }

    /// Requires exactly one of `[model.ehrenfest]` and `[model.vasicek]`.
    pub fn model(&self) -> Result<Model, ConfigError> {
        let section = self.model.as_ref().ok_or_else(|| {
            ConfigError("missing [model.ehrenfest] or [model.vasicek] section".into())
        })?;
        match (&section.ehrenfest, &section.vasicek) {
            (Some(e), None) => {
                let params = EhrenfestParams::new(e.n, e.lambda, e.alpha, e.beta)
                    .map_err(|err| field_error("model.ehrenfest", err))?;
                let model = ShortRateModel::new(params, e.r_m, e.r_max)
                    .map_err(|err| field_error("model.ehrenfest", err))?;
                Ok(Model::Ehrenfest(model))
            }
            (None, Some(v)) => VasicekParams::new(v.k, v.theta, v.sigma, v.r0)
                .map(Model::Vasicek)
                .map_err(|err| field_error("model.vasicek", err)),
            (Some(_), Some(_)) => Err(ConfigError(
                "model: give exactly one of [model.ehrenfest] and [model.vasicek], not both".into(),
            )),
            (None, None) => Err(ConfigError(
                "model: missing [model.ehrenfest] or [model.vasicek] section".into(),
            )),
        }
    }
}
