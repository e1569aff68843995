//! GPS spoofing injectors.
//!
//! The threat model trusts the camera and distrusts the GPS: an attack
//! corrupts the reported location stream from some sample onward while the
//! frames stay untouched. Three canonical shapes are modeled: a rigid
//! constant offset, a drift that grows linearly along a heading, and a
//! frozen (replayed) fix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::Sample;
use crate::geo::{offset_point, GeoError};

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("attack start index {start} is beyond the stream of {len} samples")]
    StartBeyondStream { start: usize, len: usize },
    #[error("attack start index must be >= 1 (the first sample stays honest)")]
    StartTooEarly,
    #[error("constant offset must have nonzero magnitude")]
    ZeroOffset,
    #[error("drift rate {0} must be > 0")]
    BadDriftRate(f64),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AttackSpec {
    /// Reported position rigidly displaced by a fixed vector.
    ConstantOffset {
        start_index: usize,
        offset_north: f64,
        offset_east: f64,
    },
    /// Displacement grows at `drift_rate` m/s along `heading_deg`
    /// (degrees clockwise from north), starting from zero at attack onset.
    Drift {
        start_index: usize,
        drift_rate: f64,
        heading_deg: f64,
    },
    /// Reported position pinned to the last honest fix.
    Freeze { start_index: usize },
}

impl AttackSpec {
    pub fn start_index(&self) -> usize {
        match *self {
            AttackSpec::ConstantOffset { start_index, .. }
            | AttackSpec::Drift { start_index, .. }
            | AttackSpec::Freeze { start_index } => start_index,
        }
    }

    pub fn validate(&self, stream_len: usize) -> Result<(), AttackError> {
        let start = self.start_index();
        if start < 1 {
            return Err(AttackError::StartTooEarly);
        }
        if start >= stream_len {
            return Err(AttackError::StartBeyondStream { start, len: stream_len });
        }
        match *self {
            AttackSpec::ConstantOffset { offset_north, offset_east, .. } => {
                if offset_north == 0.0 && offset_east == 0.0 {
                    return Err(AttackError::ZeroOffset);
                }
            }
            AttackSpec::Drift { drift_rate, .. } => {
                if !(drift_rate > 0.0) {
                    return Err(AttackError::BadDriftRate(drift_rate));
                }
            }
            AttackSpec::Freeze { .. } => {}
        }
        Ok(())
    }
}

/// Apply the attack to a sample stream. The prefix before `start_index` is
/// returned unchanged; frames and timestamps are never modified.
pub fn inject(samples: &[Sample], spec: &AttackSpec) -> Result<Vec<Sample>, AttackError> {
    spec.validate(samples.len())?;
    let start = spec.start_index();
    let mut out = samples.to_vec();
    for sample in out.iter_mut().skip(start) {
        match *spec {
            AttackSpec::ConstantOffset { offset_north, offset_east, .. } => {
                sample.location = offset_point(sample.location, offset_north, offset_east)?;
            }
            AttackSpec::Drift { drift_rate, heading_deg, .. } => {
                let dt = sample.t - samples[start].t;
                let dist = drift_rate * dt;
                let heading = heading_deg.to_radians();
                sample.location =
                    offset_point(sample.location, dist * heading.cos(), dist * heading.sin())?;
            }
            AttackSpec::Freeze { .. } => {
                sample.location = samples[start - 1].location;
            }
        }
    }
    Ok(out)
}
