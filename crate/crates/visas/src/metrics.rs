//! Fit-quality and detection-quality metrics: RMSE / R² / MAE, per-window
//! prediction errors, FPR-vs-threshold curves, the window-size optimizer
//! e(α), and whole-flight fit evaluation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::{self, Sample, Verdict, VerdictReason, WindowConfig};
use crate::geo::haversine_distance;
use crate::imaging::similarity;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("observed and predicted lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    Empty,
    #[error("observed values are constant; R^2 is undefined")]
    ZeroVariance,
    #[error("stream of {len} samples is too short for window {n} + q {q} (need {need})")]
    StreamTooShort { len: usize, n: usize, q: usize, need: usize },
    #[error("flight fit failed: {0}")]
    FlightFit(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitMetrics {
    pub rmse: f64,
    pub r2: f64,
    pub mae: f64,
}

/// RMSE, R², and MAE of predictions against observations.
pub fn regression_metrics(observed: &[f64], predicted: &[f64]) -> Result<FitMetrics, MetricsError> {
    if observed.is_empty() {
        return Err(MetricsError::Empty);
    }
    if observed.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch(observed.len(), predicted.len()));
    }
    let n = observed.len() as f64;
    let mean = observed.iter().sum::<f64>() / n;
    let sse: f64 = observed.iter().zip(predicted).map(|(o, p)| (o - p).powi(2)).sum();
    let sae: f64 = observed.iter().zip(predicted).map(|(o, p)| (o - p).abs()).sum();
    let sst: f64 = observed.iter().map(|o| (o - mean).powi(2)).sum();
    if sst == 0.0 {
        return Err(MetricsError::ZeroVariance);
    }
    Ok(FitMetrics { rmse: (sse / n).sqrt(), r2: 1.0 - sse / sst, mae: sae / n })
}

/// Benign-stream evaluation of one window size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub window_size: usize,
    pub avg_prediction_error: f64,
    pub max_prediction_error: f64,
    /// (threshold meters, FPR), in threshold order.
    pub fpr_by_threshold: Vec<(f64, f64)>,
    /// Verified benign samples the statistics are over.
    pub verified: usize,
}

/// Run the detector over a benign stream once per window size, collecting
/// absolute prediction errors and the FPR each alert threshold would have
/// produced.
pub fn window_sweep(
    samples: &[Sample],
    sizes: &[usize],
    q: usize,
    thresholds: &[f64],
    base: &WindowConfig,
) -> Result<Vec<SweepResult>, MetricsError> {
    let largest = sizes.iter().copied().max().unwrap_or(0);
    let need = largest + q + 1;
    if samples.len() < need {
        return Err(MetricsError::StreamTooShort { len: samples.len(), n: largest, q, need });
    }
    let mut results = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let cfg = WindowConfig { n, q, ..*base };
        let verdicts = detector::run_stream(samples, &cfg);
        let errors: Vec<f64> = verdicts.iter().filter_map(|v| v.error.map(f64::abs)).collect();
        if errors.is_empty() {
            return Err(MetricsError::StreamTooShort { len: samples.len(), n, q, need });
        }
        let avg = errors.iter().sum::<f64>() / errors.len() as f64;
        let max = errors.iter().cloned().fold(0.0, f64::max);
        let fpr_by_threshold = thresholds
            .iter()
            .map(|&t| {
                let fp = errors.iter().filter(|&&e| e > t).count();
                (t, fp as f64 / errors.len() as f64)
            })
            .collect();
        results.push(SweepResult {
            window_size: n,
            avg_prediction_error: avg,
            max_prediction_error: max,
            fpr_by_threshold,
            verified: errors.len(),
        });
    }
    Ok(results)
}

/// e(α) = α·avg_error + (1−α)·max_error for one sweep result.
pub fn window_score(result: &SweepResult, alpha: f64) -> f64 {
    alpha * result.avg_prediction_error + (1.0 - alpha) * result.max_prediction_error
}

/// Window size minimizing e(α); ties break toward the smaller window.
pub fn optimal_window(results: &[SweepResult], alpha: f64) -> Option<usize> {
    results
        .iter()
        .map(|r| (r.window_size, window_score(r, alpha)))
        .fold(None, |best: Option<(usize, f64)>, (w, e)| match best {
            None => Some((w, e)),
            Some((bw, be)) => {
                if e < be || (e == be && w < bw) {
                    Some((w, e))
                } else {
                    Some((bw, be))
                }
            }
        })
        .map(|(w, _)| w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionStats {
    pub detected: bool,
    /// Samples between attack onset and the first flag, when detected.
    pub detection_delay: Option<usize>,
    /// FPR over verified samples before the attack started.
    pub fpr_pre_attack: f64,
}

/// Summarize one detector run against a known attack onset.
pub fn detection_stats(verdicts: &[Verdict], attack_start: usize) -> DetectionStats {
    let first_flag = verdicts
        .iter()
        .filter(|v| v.flagged && v.sample_index >= attack_start)
        .map(|v| v.sample_index)
        .min();
    let pre: Vec<&Verdict> = verdicts
        .iter()
        .filter(|v| {
            v.sample_index < attack_start
                && matches!(v.reason, VerdictReason::Benign | VerdictReason::SpoofSuspected)
        })
        .collect();
    let fp = pre.iter().filter(|v| v.flagged).count();
    DetectionStats {
        detected: first_flag.is_some(),
        detection_delay: first_flag.map(|i| i - attack_start),
        fpr_pre_attack: if pre.is_empty() { 0.0 } else { fp as f64 / pre.len() as f64 },
    }
}

/// Whole-flight fit in the style of the altitude/terrain/light experiments:
/// one regression of distance on similarity against the first frame, over
/// the in-scope prefix of the flight.
#[derive(Debug, Clone, Copy)]
pub struct FlightFit {
    pub slope: f64,
    pub intercept: f64,
    pub rmse: f64,
    pub r2: f64,
    pub mae: f64,
    /// Greatest anchor distance still in scope, meters.
    pub in_scope_range: f64,
    pub points: usize,
}

/// Evaluate a flight against its first frame until similarity falls below
/// `scope_floor` (percent), then fit distance on similarity.
pub fn evaluate_flight(samples: &[Sample], scope_floor: f64) -> Result<FlightFit, MetricsError> {
    if samples.len() < 3 {
        return Err(MetricsError::FlightFit("need at least 3 samples".into()));
    }
    let anchor = &samples[0];
    let mut pairs = Vec::new();
    for s in &samples[1..] {
        let corr = similarity(&anchor.frame, &s.frame)
            .map_err(|e| MetricsError::FlightFit(e.to_string()))?;
        if corr < scope_floor {
            break;
        }
        pairs.push((corr, haversine_distance(anchor.location, s.location)));
    }
    if pairs.len() < 3 {
        return Err(MetricsError::FlightFit(format!(
            "only {} in-scope samples before the similarity floor",
            pairs.len()
        )));
    }
    let model = detector::fit_pairs(&pairs, 0)
        .map_err(|e| MetricsError::FlightFit(e.to_string()))?;
    let in_scope_range = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(FlightFit {
        slope: model.slope,
        intercept: model.intercept,
        rmse: model.rmse,
        r2: model.r2,
        mae: model.mae,
        in_scope_range,
        points: pairs.len(),
    })
}

/// CSV export of a sweep: window_size, avg, max, then one FPR column per
/// threshold.
pub fn sweep_to_csv(results: &[SweepResult]) -> String {
    let mut out = String::from("window_size,avg_err_m,max_err_m");
    if let Some(first) = results.first() {
        for (t, _) in &first.fpr_by_threshold {
            out.push_str(&format!(",fpr_at_{t}m"));
        }
    }
    out.push('\n');
    for r in results {
        out.push_str(&format!(
            "{},{:.6},{:.6}",
            r.window_size, r.avg_prediction_error, r.max_prediction_error
        ));
        for (_, fpr) in &r.fpr_by_threshold {
            out.push_str(&format!(",{fpr:.6}"));
        }
        out.push('\n');
    }
    out
}
