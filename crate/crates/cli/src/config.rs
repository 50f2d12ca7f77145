//! Sweep configuration files.

use std::fmt;
use std::path::{Path, PathBuf};

use relspin::IntegratorSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Momentum correlation of one sweep series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XValue {
    Correlation(f64),
    /// The `x → 1` limit, taken on the `q = p` manifold.
    Delta,
}

impl XValue {
    /// Position on the `x` axis, with the delta limit at 1.
    pub fn ordinal(self) -> f64 {
        match self {
            XValue::Correlation(x) => x,
            XValue::Delta => 1.0,
        }
    }
}

impl fmt::Display for XValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XValue::Correlation(x) => write!(f, "{x}"),
            XValue::Delta => f.write_str("delta"),
        }
    }
}

impl std::str::FromStr for XValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "delta" => Ok(XValue::Delta),
            t => t.parse().map(XValue::Correlation).map_err(|_| format!("x must be a number or \"delta\", got '{t}'")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawX {
    Number(f64),
    Text(String),
}

impl<'de> Deserialize<'de> for XValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawX::deserialize(d)? {
            RawX::Number(x) => Ok(XValue::Correlation(x)),
            RawX::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for XValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            XValue::Correlation(x) => s.serialize_f64(*x),
            XValue::Delta => s.serialize_str("delta"),
        }
    }
}

/// Inclusive rapidity grid `start, start + step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for XiGrid {
    fn default() -> Self {
        Self { start: 0.0, stop: 10.0, step: 0.25 }
    }
}

impl XiGrid {
    pub fn single(xi: f64) -> Self {
        Self { start: xi, stop: xi, step: 1.0 }
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err("xi_grid bounds must be finite".into());
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(format!("xi_grid step must be positive, got {}", self.step));
        }
        if self.stop < self.start {
            return Err(format!("xi_grid is empty: stop {} < start {}", self.stop, self.start));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sigma_over_m: Vec<f64>,
    pub x: Vec<XValue>,
    #[serde(default)]
    pub xi_grid: XiGrid,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    pub output_path: PathBuf,
    /// Fill the `wall_time_ms` column. Off by default so that repeated runs
    /// produce identical files.
    #[serde(default)]
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.sigma_over_m.is_empty() {
            return invalid("sigma_over_m is empty".into());
        }
        if let Some(s) = self.sigma_over_m.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return invalid(format!("sigma_over_m entries must be positive, got {s}"));
        }
        if self.x.is_empty() {
            return invalid("x is empty".into());
        }
        for x in &self.x {
            if let XValue::Correlation(v) = x {
                if !(0.0..1.0).contains(v) {
                    return invalid(format!("x entries must lie in [0, 1) or be \"delta\", got {v}"));
                }
            }
        }
        self.xi_grid.validate().map_err(ConfigError::Invalid)?;
        self.integrator.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.output_path.as_os_str().is_empty() {
            return invalid("output_path is empty".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, excluding `output_path`.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        value.as_object_mut().expect("object").remove("output_path");
        hex::encode(Sha256::digest(value.to_string().as_bytes()))
    }
}
