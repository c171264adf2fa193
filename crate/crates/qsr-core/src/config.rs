//! Engine configuration: relation thresholds plus loader-level knobs, with
//! TOML file support. Every field has a default; files may set any subset.

use crate::relations::{RelationConfig, RelationConfigError};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// All tunable parameters of the engine. Lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    /// Closeness threshold for IsClose/Near and pair pruning.
    pub closeness_t: f64,
    /// Contact tolerance for Touches.
    pub touch_eps: f64,
    /// Halfspace extrusion depth multiplier.
    pub halfspace_scale_s: f64,
    /// Relative tolerance on complete containment.
    pub containment_tol: f64,
    /// Relative shell growth for the partial-containment proxy.
    pub adjacency_delta: f64,
    /// Thickness given to wall/floor polygons when inflated into boxes.
    pub plane_thickness_tau: f64,
    /// Pair-pruning radius; falls back to `closeness_t` when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prune_t: Option<f64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            closeness_t: 0.5,
            touch_eps: 0.01,
            halfspace_scale_s: 2.0,
            containment_tol: 1e-3,
            adjacency_delta: 0.02,
            plane_thickness_tau: 0.02,
            prune_t: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Relation(#[from] RelationConfigError),
    #[error("{field} must be a finite positive number, got {value}")]
    NonPositive { field: &'static str, value: f64 },
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.relation().validate()?;
        if !self.plane_thickness_tau.is_finite() || self.plane_thickness_tau <= 0.0 {
            return Err(ConfigError::NonPositive {
                field: "plane_thickness_tau",
                value: self.plane_thickness_tau,
            });
        }
        if let Some(p) = self.prune_t {
            if !p.is_finite() || p <= 0.0 {
                return Err(ConfigError::NonPositive {
                    field: "prune_t",
                    value: p,
                });
            }
        }
        Ok(())
    }

    /// Effective pair-pruning radius.
    pub fn prune_threshold(&self) -> f64 {
        self.prune_t.unwrap_or(self.closeness_t)
    }

    /// The relation-evaluation slice of the configuration.
    pub fn relation(&self) -> RelationConfig {
        RelationConfig {
            closeness_t: self.closeness_t,
            touch_eps: self.touch_eps,
            halfspace_scale_s: self.halfspace_scale_s,
            containment_tol: self.containment_tol,
            adjacency_delta: self.adjacency_delta,
        }
    }
}

/// Load and validate a TOML config file. Missing fields take defaults;
/// unknown fields are rejected.
pub fn load_config(path: &Path) -> Result<EngineConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<EngineConfig, ConfigError> {
    let cfg: EngineConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}
