//! Detection of GPS spoofing attacks against drones by cross-validating the
//! camera video stream against reported GPS travel distance.
//!
//! The core idea: frame similarity to a recent anchor frame decays with
//! ground distance, so a short window of (similarity, GPS distance) pairs
//! fits a linear model that predicts how far the drone has traveled from
//! what the camera sees. When the GPS-reported distance stops matching that
//! prediction, the GPS is lying.
//!
//! The crate ships the detector itself ([`detector`]), a hermetic flight
//! simulator with procedural terrain ([`simulator`]), spoofing injectors
//! ([`attack`]), evaluation metrics and the window-size optimizer
//! ([`metrics`]), flight-log persistence ([`telemetry`]), and a CLI binary
//! tying them together.

pub mod attack;
pub mod detector;
pub mod geo;
pub mod imaging;
pub mod metrics;
pub mod plot;
pub mod scenario;
pub mod simulator;
pub mod telemetry;

pub use detector::{run_stream, Sample, Verdict, VerdictReason, WindowConfig};
pub use geo::GeoPoint;
pub use imaging::Frame;
