//! Declarative run configuration (TOML, `schema_version = 1`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::Quantity;
use crate::units::{preset, PhysicalParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Sweep,
    Threshold,
    Husimi,
    Phase,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::Threshold => "threshold",
            Command::Husimi => "husimi",
            Command::Phase => "phase",
        }
    }
}

/// Reduced: `D/J`, `gμ_B B/J`, `k_B T/J`. Physical: cm⁻¹, Tesla, Kelvin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Reduced,
    Physical,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Reduced => "reduced",
            Units::Physical => "physical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Gnuplot,
}

/// Either an explicit list or `count` evenly spaced points on `[min, max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub values: Option<Vec<f64>>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
}

impl Axis {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            values: Some(values),
            ..Self::default()
        }
    }

    pub fn points(&self, name: &str) -> Result<Vec<f64>, ConfigError> {
        let err = |m: &str| ConfigError::new(format!("grid.{name}: {m}"));
        let pts = match (&self.values, self.min, self.max, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(lo), Some(hi), Some(n)) => {
                if n == 0 {
                    return Err(err("count must be at least 1"));
                }
                if n == 1 {
                    if lo != hi {
                        return Err(err("count = 1 requires min = max"));
                    }
                    vec![lo]
                } else {
                    if hi < lo {
                        return Err(err("max must not be below min"));
                    }
                    let step = (hi - lo) / (n - 1) as f64;
                    (0..n)
                        .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
                        .collect()
                }
            }
            _ => return Err(err("give either `values` or all of `min`, `max`, `count`")),
        };
        if pts.is_empty() {
            return Err(err("no points"));
        }
        if let Some(x) = pts.iter().find(|x| !x.is_finite()) {
            return Err(err(&format!("non-finite value {x}")));
        }
        Ok(pts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub anisotropy: Option<Axis>,
    pub field: Option<Axis>,
    pub temperature: Option<Axis>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub preset: Option<String>,
    pub j_cm: Option<f64>,
    pub d_cm: Option<f64>,
    pub g: Option<f64>,
}

impl MaterialSpec {
    pub fn resolve(&self) -> Result<PhysicalParams, ConfigError> {
        let base = match &self.preset {
            Some(name) => preset(name).ok_or_else(|| ConfigError::new(format!("unknown material preset `{name}`")))?,
            None => PhysicalParams {
                j_cm: self
                    .j_cm
                    .ok_or_else(|| ConfigError::new("material needs `preset` or `j_cm`"))?,
                d_cm: 0.0,
                g: self
                    .g
                    .ok_or_else(|| ConfigError::new("material needs `preset` or `g`"))?,
                b_tesla: None,
                t_kelvin: None,
            },
        };
        let p = PhysicalParams {
            j_cm: self.j_cm.unwrap_or(base.j_cm),
            d_cm: self.d_cm.unwrap_or(base.d_cm),
            g: self.g.unwrap_or(base.g),
            ..base
        };
        p.validate().map_err(|e| ConfigError::new(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSpec {
    pub quantity: Quantity,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HusimiSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: Option<Format>,
    pub path: Option<String>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    pub command: Option<Command>,
    pub units: Option<Units>,
    pub material: Option<MaterialSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    pub quantities: Option<Vec<Quantity>>,
    pub threshold: Option<ThresholdSpec>,
    pub husimi: Option<HusimiSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: SweepConfig =
            toml::from_str(text).map_err(|e| ConfigError::new(format!("config parse error: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::new(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn command(&self) -> Command {
        self.command.unwrap_or_default()
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }

    /// Units must be stated explicitly, and material constants only make
    /// sense with physical units.
    pub fn units(&self) -> Result<Units, ConfigError> {
        let units = self.units.ok_or_else(|| {
            ConfigError::new(
                "units are ambiguous: set `units = \"reduced\"` or `units = \"physical\"` (or pass --units)",
            )
        })?;
        if units == Units::Reduced && self.material.is_some() {
            return Err(ConfigError::new(
                "units are ambiguous: a [material] section requires `units = \"physical\"`",
            ));
        }
        if units == Units::Physical && self.material.is_none() {
            return Err(ConfigError::new("physical units need a [material] section"));
        }
        Ok(units)
    }

    pub fn quantities(&self) -> Result<Vec<Quantity>, ConfigError> {
        let q = self.quantities.clone().unwrap_or_else(|| Quantity::DEFAULT.to_vec());
        if q.is_empty() {
            return Err(ConfigError::new("quantities must not be empty"));
        }
        Ok(q)
    }
}

pub(crate) fn recipes_text() -> &'static str {
    include_str!("recipes.toml")
}

/// Names of the embedded figure recipes.
pub fn recipe_names() -> Vec<String> {
    let table: toml::Table = toml::from_str(recipes_text()).expect("embedded recipes parse");
    table.keys().cloned().collect()
}

pub fn recipe(name: &str) -> Result<SweepConfig, ConfigError> {
    let table: toml::Table = toml::from_str(recipes_text()).expect("embedded recipes parse");
    let entry = table.get(name).ok_or_else(|| {
        ConfigError::new(format!(
            "unknown preset `{name}`; available: {}",
            table.keys().cloned().collect::<Vec<_>>().join(", ")
        ))
    })?;
    let text = toml::to_string(entry).map_err(|e| ConfigError::new(e.to_string()))?;
    SweepConfig::from_toml(&text)
}
