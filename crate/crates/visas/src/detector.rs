//! The detection method: windowed correlation-vs-distance regression,
//! distance prediction, and spoofing verdicts.
//!
//! The stream is processed in cycles. An anchor sample is chosen, the next
//! `n` samples are used to fit a linear model mapping frame similarity (to
//! the anchor) to reported GPS travel distance (from the anchor), then the
//! next `q` samples are verified: the model predicts the distance implied by
//! the camera, and a mismatch with the reported GPS distance beyond the alert
//! threshold raises a spoofing verdict. When the drone leaves the ground area
//! covered by the anchor frame the similarity collapses and a new cycle
//! starts at the current sample.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{haversine_distance, GeoPoint};
use crate::imaging::{similarity, Frame, ImagingError};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("window needs at least two samples, got {0}")]
    WindowTooSmall(usize),
    #[error("all window correlations are equal; the regression is degenerate")]
    DegenerateWindow,
    #[error(transparent)]
    Imaging(#[from] ImagingError),
}

/// One time-stamped detector input: a frame plus its reported GPS fix.
#[derive(Debug, Clone)]
pub struct Sample {
    pub frame: Frame,
    pub location: GeoPoint,
    /// Seconds since flight start; strictly increasing within a stream.
    pub t: f64,
}

/// Window lifecycle parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Samples used to fit the model after the anchor.
    pub n: usize,
    /// Samples verified against the fitted model.
    pub q: usize,
    /// Prediction-vs-report mismatch (meters) that raises an alert.
    pub alert_threshold: f64,
    /// Similarity floor (percent). Below it the anchor is out of scope and
    /// the detector re-anchors.
    pub min_correlation: f64,
    /// Restore the literal one-sided rule (predicted > reported only).
    #[serde(default)]
    pub one_sided: bool,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            n: 4,
            q: 3,
            alert_threshold: 6.0,
            min_correlation: 10.0,
            one_sided: false,
        }
    }
}

impl WindowConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n < 2 {
            return Err(format!("window n must be >= 2, got {}", self.n));
        }
        if self.q < 1 {
            return Err(format!("verification q must be >= 1, got {}", self.q));
        }
        if !(self.alert_threshold > 0.0) {
            return Err(format!("alert threshold must be > 0, got {}", self.alert_threshold));
        }
        Ok(())
    }
}

/// Fitted linear map from similarity percentage to distance in meters, with
/// in-window fit quality.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CorrelationModel {
    /// Meters per similarity percent; negative on urban-like terrain.
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub rmse: f64,
    pub mae: f64,
    /// Stream index of the anchor sample the window was measured against.
    pub anchor_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictReason {
    Benign,
    SpoofSuspected,
    ModelReset,
    ZeroVarianceFrame,
}

impl std::fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictReason::Benign => "Benign",
            VerdictReason::SpoofSuspected => "SpoofSuspected",
            VerdictReason::ModelReset => "ModelReset",
            VerdictReason::ZeroVarianceFrame => "ZeroVarianceFrame",
        };
        f.write_str(s)
    }
}

/// Per-sample detector output.
#[derive(Debug, Clone, Copy)]
pub struct Verdict {
    pub sample_index: usize,
    pub t: f64,
    /// Similarity to the anchor frame, when it could be computed.
    pub corr: Option<f64>,
    /// Model prediction in meters; absent for reset/abstain verdicts.
    pub predicted_distance: Option<f64>,
    pub reported_distance: f64,
    /// predicted − reported.
    pub error: Option<f64>,
    pub flagged: bool,
    pub reason: VerdictReason,
}

impl Verdict {
    fn reset(index: usize, t: f64, corr: Option<f64>, reported: f64) -> Self {
        Verdict {
            sample_index: index,
            t,
            corr,
            predicted_distance: None,
            reported_distance: reported,
            error: None,
            flagged: false,
            reason: VerdictReason::ModelReset,
        }
    }

    fn abstain(index: usize, t: f64, reported: f64) -> Self {
        Verdict {
            sample_index: index,
            t,
            corr: None,
            predicted_distance: None,
            reported_distance: reported,
            error: None,
            flagged: false,
            reason: VerdictReason::ZeroVarianceFrame,
        }
    }
}

/// Ordinary least-squares fit of reported distance on similarity over
/// (similarity, distance) pairs already measured against an anchor.
pub fn fit_pairs(pairs: &[(f64, f64)], anchor_index: usize) -> Result<CorrelationModel, DetectorError> {
    let n = pairs.len();
    if n < 2 {
        return Err(DetectorError::WindowTooSmall(n));
    }
    let nf = n as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(DetectorError::DegenerateWindow);
    }
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let predicted: Vec<f64> = pairs.iter().map(|p| slope * p.0 + intercept).collect();
    let observed: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let sse: f64 = observed.iter().zip(&predicted).map(|(o, p)| (o - p).powi(2)).sum();
    let sae: f64 = observed.iter().zip(&predicted).map(|(o, p)| (o - p).abs()).sum();
    let sst: f64 = observed.iter().map(|o| (o - mean_y).powi(2)).sum();
    let r2 = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };

    Ok(CorrelationModel {
        slope,
        intercept,
        r2,
        rmse: (sse / nf).sqrt(),
        mae: sae / nf,
        anchor_index,
    })
}

/// Fit a model from an anchor and its following window of samples, measuring
/// similarity and reported distance against the anchor.
pub fn fit_model(
    anchor: &Sample,
    anchor_index: usize,
    window: &[Sample],
) -> Result<CorrelationModel, DetectorError> {
    let mut pairs = Vec::with_capacity(window.len());
    for s in window {
        let corr = similarity(&anchor.frame, &s.frame)?;
        let dist = haversine_distance(anchor.location, s.location);
        pairs.push((corr, dist));
    }
    fit_pairs(&pairs, anchor_index)
}

/// Predicted distance for a similarity value, clamped below at zero.
pub fn predict(model: &CorrelationModel, corr: f64) -> f64 {
    (model.slope * corr + model.intercept).max(0.0)
}

/// Verify one incoming sample against a fitted model.
pub fn judge(
    model: &CorrelationModel,
    anchor: &Sample,
    incoming: &Sample,
    incoming_index: usize,
    cfg: &WindowConfig,
) -> Verdict {
    let reported = haversine_distance(anchor.location, incoming.location);
    let corr = match similarity(&anchor.frame, &incoming.frame) {
        Ok(c) => c,
        Err(ImagingError::ZeroVariance) => {
            return Verdict::abstain(incoming_index, incoming.t, reported)
        }
        Err(_) => return Verdict::abstain(incoming_index, incoming.t, reported),
    };
    let predicted = predict(model, corr);
    let error = predicted - reported;
    let flagged = if cfg.one_sided {
        error > cfg.alert_threshold
    } else {
        error.abs() > cfg.alert_threshold
    };
    Verdict {
        sample_index: incoming_index,
        t: incoming.t,
        corr: Some(corr),
        predicted_distance: Some(predicted),
        reported_distance: reported,
        error: Some(error),
        flagged,
        reason: if flagged { VerdictReason::SpoofSuspected } else { VerdictReason::Benign },
    }
}

enum Phase {
    Collect { pairs: Vec<(f64, f64)> },
    Verify { model: CorrelationModel, verified: usize },
}

/// Run the full window lifecycle over an ordered sample stream.
///
/// Verdicts are emitted for verified samples, for early re-anchors (the
/// anchor went out of scope or the window was degenerate), and for
/// zero-variance frames the detector abstains on.
pub fn run_stream(samples: &[Sample], cfg: &WindowConfig) -> Vec<Verdict> {
    let mut verdicts = Vec::new();
    if samples.is_empty() {
        return verdicts;
    }

    let mut anchor_index = 0;
    let mut phase = Phase::Collect { pairs: Vec::with_capacity(cfg.n) };

    let mut i = 1;
    while i < samples.len() {
        let anchor = &samples[anchor_index];
        let sample = &samples[i];
        let reported = haversine_distance(anchor.location, sample.location);

        let corr = match similarity(&anchor.frame, &sample.frame) {
            Ok(c) => c,
            Err(_) => {
                verdicts.push(Verdict::abstain(i, sample.t, reported));
                i += 1;
                continue;
            }
        };

        if corr < cfg.min_correlation {
            // out of the anchor frame's scope: rebuild from here
            verdicts.push(Verdict::reset(i, sample.t, Some(corr), reported));
            anchor_index = i;
            phase = Phase::Collect { pairs: Vec::with_capacity(cfg.n) };
            i += 1;
            continue;
        }

        match &mut phase {
            Phase::Collect { pairs } => {
                pairs.push((corr, reported));
                if pairs.len() == cfg.n {
                    match fit_pairs(pairs, anchor_index) {
                        Ok(model) => phase = Phase::Verify { model, verified: 0 },
                        Err(_) => {
                            verdicts.push(Verdict::reset(i, sample.t, Some(corr), reported));
                            anchor_index = i;
                            phase = Phase::Collect { pairs: Vec::with_capacity(cfg.n) };
                        }
                    }
                }
            }
            Phase::Verify { model, verified } => {
                let verdict = judge(model, anchor, sample, i, cfg);
                verdicts.push(verdict);
                *verified += 1;
                if *verified == cfg.q {
                    // cycle complete: re-anchor at the current sample
                    anchor_index = i;
                    phase = Phase::Collect { pairs: Vec::with_capacity(cfg.n) };
                }
            }
        }
        i += 1;
    }
    verdicts
}

/// Serialize verdicts as CSV, one row per verdict.
pub fn verdicts_to_csv(verdicts: &[Verdict]) -> String {
    let mut out = String::from("sample_index,t,corr,reported_m,predicted_m,error_m,flagged,reason\n");
    for v in verdicts {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{:.3},{},{:.6},{},{},{},{}\n",
            v.sample_index,
            v.t,
            opt(v.corr),
            v.reported_distance,
            opt(v.predicted_distance),
            opt(v.error),
            v.flagged,
            v.reason,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::offset_point;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn exact_line_is_recovered() {
        // points exactly on distance = -2 * corr + 200
        let pairs: Vec<(f64, f64)> = (0..6).map(|i| {
            let corr = 100.0 - 10.0 * i as f64;
            (corr, -2.0 * corr + 200.0)
        }).collect();
        let m = fit_pairs(&pairs, 0).unwrap();
        assert!((m.slope + 2.0).abs() < 1e-9);
        assert!((m.intercept - 200.0).abs() < 1e-9);
        assert!((m.r2 - 1.0).abs() < 1e-12);
        assert!(m.rmse < 1e-9);
        assert!(m.mae < 1e-9);
    }

    #[test]
    fn degenerate_window_is_an_error() {
        let pairs = vec![(50.0, 1.0), (50.0, 2.0), (50.0, 3.0)];
        assert!(matches!(fit_pairs(&pairs, 0), Err(DetectorError::DegenerateWindow)));
        assert!(matches!(fit_pairs(&[(1.0, 1.0)], 0), Err(DetectorError::WindowTooSmall(1))));
    }

    #[test]
    fn noisy_line_recovery_rate() {
        // distance = -1 * corr + 100 + N(0, 1); slope in [-1.2, -0.8] and
        // r2 > 0.95 in at least 95% of 1000 seeded trials
        let mut ok = 0;
        for seed in 0..1000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let noise = Normal::new(0.0, 1.0).unwrap();
            let pairs: Vec<(f64, f64)> = (0..10).map(|i| {
                let corr = 95.0 - 10.0 * i as f64;
                (corr, -corr + 100.0 + noise.sample(&mut rng))
            }).collect();
            let m = fit_pairs(&pairs, 0).unwrap();
            if (-1.2..=-0.8).contains(&m.slope) && m.r2 > 0.95 {
                ok += 1;
            }
        }
        assert!(ok >= 950, "only {ok}/1000 trials recovered the line");
    }

    #[test]
    fn predict_clamps_at_zero() {
        let m = CorrelationModel { slope: -2.0, intercept: 200.0, r2: 1.0, rmse: 0.0, mae: 0.0, anchor_index: 0 };
        assert_eq!(predict(&m, 100.0), 0.0);
        assert_eq!(predict(&m, 50.0), 100.0);
        assert_eq!(predict(&m, 110.0), 0.0); // clamped
    }

    #[test]
    fn field_regime_coefficients() {
        let m = CorrelationModel { slope: -4.4377, intercept: 435.1809, r2: 1.0, rmse: 0.0, mae: 0.0, anchor_index: 0 };
        let d = predict(&m, 98.0);
        assert!((d - 0.2863).abs() < 0.05, "got {d}");
    }

    fn noise_frame(rng: &mut impl Rng, t: f64) -> Frame {
        let pixels = (0..32 * 32).map(|_| rng.gen()).collect();
        Frame::new(32, 32, pixels, t).unwrap()
    }

    /// Synthetic stream whose frames interpolate between two noise fields so
    /// similarity to the first frame drops off linearly-ish with index, and
    /// whose locations march north at `step` m/s.
    fn synthetic_stream(len: usize, step: f64, seed: u64) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base: Vec<f64> = (0..32 * 32).map(|_| rng.gen_range(0.0..255.0)).collect();
        let other: Vec<f64> = (0..32 * 32).map(|_| rng.gen_range(0.0..255.0)).collect();
        let origin = GeoPoint::new(40.0, -74.0, 50.0).unwrap();
        (0..len)
            .map(|i| {
                let w = i as f64 / len as f64;
                let pixels: Vec<u8> = base
                    .iter()
                    .zip(&other)
                    .map(|(&a, &b)| ((1.0 - w) * a + w * b).round() as u8)
                    .collect();
                Sample {
                    frame: Frame::new(32, 32, pixels, i as f64).unwrap(),
                    location: offset_point(origin, step * i as f64, 0.0).unwrap(),
                    t: i as f64,
                }
            })
            .collect()
    }

    #[test]
    fn judge_identity_sample_is_benign() {
        let samples = synthetic_stream(8, 2.0, 1);
        let model = fit_model(&samples[0], 0, &samples[1..5]).unwrap();
        let cfg = WindowConfig::default();
        let v = judge(&model, &samples[0], &samples[0], 0, &cfg);
        assert!(!v.flagged);
        assert_eq!(v.reported_distance, 0.0);
    }

    #[test]
    fn stream_shorter_than_window_never_flags() {
        let cfg = WindowConfig::default();
        let samples = synthetic_stream(cfg.n, 2.0, 2);
        let verdicts = run_stream(&samples, &cfg);
        assert!(verdicts.iter().all(|v| !v.flagged));
        assert!(!verdicts.iter().any(|v| v.reason == VerdictReason::SpoofSuspected));
    }

    #[test]
    fn zero_variance_frames_abstain() {
        let mut samples = synthetic_stream(10, 2.0, 3);
        samples[6].frame.pixels.fill(0);
        let cfg = WindowConfig { min_correlation: -200.0, ..WindowConfig::default() };
        let verdicts = run_stream(&samples, &cfg);
        let abstained: Vec<_> = verdicts
            .iter()
            .filter(|v| v.reason == VerdictReason::ZeroVarianceFrame)
            .collect();
        assert_eq!(abstained.len(), 1);
        assert_eq!(abstained[0].sample_index, 6);
        assert!(!abstained[0].flagged);
    }

    #[test]
    fn determinism() {
        let samples = synthetic_stream(40, 2.0, 4);
        let cfg = WindowConfig { min_correlation: -200.0, ..WindowConfig::default() };
        let a = run_stream(&samples, &cfg);
        let b = run_stream(&samples, &cfg);
        assert_eq!(verdicts_to_csv(&a), verdicts_to_csv(&b));
    }

    #[test]
    fn monotone_alerting_in_threshold() {
        let samples = synthetic_stream(60, 2.0, 5);
        let flagged_at = |threshold: f64| -> Vec<usize> {
            let cfg = WindowConfig { alert_threshold: threshold, min_correlation: -200.0, ..WindowConfig::default() };
            run_stream(&samples, &cfg).iter().filter(|v| v.flagged).map(|v| v.sample_index).collect()
        };
        let loose = flagged_at(8.0);
        let tight = flagged_at(2.0);
        assert!(loose.iter().all(|i| tight.contains(i)), "loose {loose:?} not within tight {tight:?}");
    }

    #[test]
    fn min_correlation_triggers_reset() {
        let samples = synthetic_stream(30, 2.0, 6);
        let cfg = WindowConfig { n: 20, min_correlation: 60.0, ..WindowConfig::default() };
        let verdicts = run_stream(&samples, &cfg);
        assert!(verdicts.iter().any(|v| v.reason == VerdictReason::ModelReset));
    }

    proptest! {
        /// OLS against an independent direct-summation oracle.
        #[test]
        fn ols_matches_direct_oracle(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..30);
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(-100.0..100.0), rng.gen_range(0.0..500.0)))
                .collect();

            // direct-summation normal equations
            let nf = n as f64;
            let sx: f64 = pairs.iter().map(|p| p.0).sum();
            let sy: f64 = pairs.iter().map(|p| p.1).sum();
            let sxx: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = pairs.iter().map(|p| p.0 * p.1).sum();
            let denom = nf * sxx - sx * sx;
            prop_assume!(denom.abs() > 1e-9);
            let slope = (nf * sxy - sx * sy) / denom;
            let intercept = (sy - slope * sx) / nf;

            let m = fit_pairs(&pairs, 0).unwrap();
            prop_assert!((m.slope - slope).abs() <= 1e-9 * slope.abs().max(1.0));
            prop_assert!((m.intercept - intercept).abs() <= 1e-9 * intercept.abs().max(1.0));
        }
    }
}
