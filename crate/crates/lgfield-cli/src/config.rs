//! JSON run configuration: one document drives `compute`, `kernels` and
//! (with a `scan` block) `scan`. Unknown keys are rejected everywhere.

use lgfield::kernels::{FieldModel, StateSpec};
use lgfield::quasiprob::{
    Engine, ProjectionScheme, QuadratureConfig, QuasiProbQuery, Sign,
};
use lgfield::scanner::{AxisSpec, ScanBase};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config error: {0}")]
    Invalid(String),
    #[error("config i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<lgfield::kernels::DomainError> for ConfigError {
    fn from(e: lgfield::kernels::DomainError) -> Self {
        ConfigError::Invalid(e.0)
    }
}

/// Unit the `query` times are given in. Scan axes (`ellT2`, `t2_over_L`)
/// carry their own units and are unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    #[default]
    Natural,
    /// Multiples of `1/ell` (mode-frequency units).
    InverseEll,
    /// Multiples of the coarse-graining length `L`.
    CoarseLength,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryConfig {
    pub s1: i8,
    pub s2: i8,
    pub t1: f64,
    pub t2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanAxes {
    pub x: AxisSpec,
    pub y: AxisSpec,
}

/// The on-disk configuration document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: FieldModel,
    pub state: StateSpec,
    pub scheme: ProjectionScheme,
    pub query: QueryConfig,
    #[serde(default)]
    pub time_unit: TimeUnit,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanAxes>,
}

/// A validated configuration with times in natural units.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub base: ScanBase,
    pub output: Option<OutputSpec>,
    pub scan: Option<ScanAxes>,
}

impl ConfigFile {
    pub fn from_reader(r: impl std::io::Read) -> Result<ConfigFile, ConfigError> {
        Ok(serde_json::from_reader(r)?)
    }

    pub fn resolve(&self, engine_override: Option<Engine>) -> Result<ResolvedConfig, ConfigError> {
        let scale = match self.time_unit {
            TimeUnit::Natural => 1.0,
            TimeUnit::InverseEll => 1.0 / self.state.ell(),
            TimeUnit::CoarseLength => self.model.coarse_length(),
        };
        let s1 = Sign::try_from(self.query.s1)?;
        let s2 = Sign::try_from(self.query.s2)?;
        let query = QuasiProbQuery::new(s1, s2, self.query.t1 * scale, self.query.t2 * scale)?;
        let mut quadrature = self.quadrature;
        if let Some(engine) = engine_override {
            quadrature.engine = engine;
        }
        quadrature
            .validate()
            .map_err(|e| ConfigError::Invalid(e.0))?;
        self.scheme.validate().map_err(|e| ConfigError::Invalid(e.0))?;
        if let Some(axes) = &self.scan {
            if axes.x.parameter == axes.y.parameter {
                return Err(ConfigError::Invalid(
                    "scan.x and scan.y must bind distinct parameters".into(),
                ));
            }
        }
        Ok(ResolvedConfig {
            base: ScanBase {
                model: self.model,
                state: self.state,
                scheme: self.scheme,
                query,
                quadrature,
            },
            output: self.output.clone(),
            scan: self.scan,
        })
    }

    /// The same document with times already in natural units and any engine
    /// override folded in; re-running it reproduces the run byte for byte.
    pub fn canonical(&self, resolved: &ResolvedConfig) -> ConfigFile {
        ConfigFile {
            model: resolved.base.model,
            state: resolved.base.state,
            scheme: resolved.base.scheme,
            query: QueryConfig {
                s1: resolved.base.query.s1.into(),
                s2: resolved.base.query.s2.into(),
                t1: resolved.base.query.t1,
                t2: resolved.base.query.t2,
            },
            time_unit: TimeUnit::Natural,
            quadrature: resolved.base.quadrature,
            output: self.output.clone(),
            scan: resolved.scan,
        }
    }
}
