//! Scenario files: one JSON document describing terrain, flight plan,
//! camera, origin, optional attack, and optional detector configuration.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::AttackSpec;
use crate::detector::WindowConfig;
use crate::geo::GeoPoint;
use crate::simulator::{CameraSpec, FlightPlan, TerrainSpec};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scenario {path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub terrain: TerrainSpec,
    pub plan: FlightPlan,
    #[serde(default)]
    pub camera: CameraSpec,
    pub origin: GeoPoint,
    #[serde(default)]
    pub attack: Option<AttackSpec>,
    #[serde(default)]
    pub window: Option<WindowConfig>,
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    let scenario: Scenario = serde_json::from_str(&text).map_err(|e| ScenarioError::Invalid {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    scenario.plan.validate().map_err(|e| ScenarioError::Invalid {
        path: path.display().to_string(),
        message: format!("plan: {e}"),
    })?;
    GeoPoint::new(scenario.origin.lat, scenario.origin.lon, scenario.origin.alt).map_err(|e| {
        ScenarioError::Invalid { path: path.display().to_string(), message: format!("origin: {e}") }
    })?;
    if let Some(w) = &scenario.window {
        w.validate().map_err(|e| ScenarioError::Invalid {
            path: path.display().to_string(),
            message: format!("window: {e}"),
        })?;
    }
    Ok(scenario)
}
