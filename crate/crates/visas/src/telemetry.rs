//! Flight-log persistence: a JSON Lines file (header first, then one record
//! per sample) plus numbered PGM frame files, so recorded flights can be
//! replayed through the detector.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Lines, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::Sample;
use crate::geo::{GeoError, GeoPoint};
use crate::imaging::{read_pnm, write_pgm, ImagingError};

pub const LOG_FILE_NAME: &str = "flight.jsonl";
pub const FRAME_DIR_NAME: &str = "frames";

#[derive(Debug, Error)]
pub enum TelemetryError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing frame file {0}")]
    MissingFrame(String),
    #[error("record at line {line} is out of timestamp order ({t} after {prev})")]
    OutOfOrderTimestamp { line: usize, t: f64, prev: f64 },
    #[error("duplicate timestamp {t} at line {line}")]
    DuplicateTimestamp { line: usize, t: f64 },
    #[error("downsample factor must be >= 1")]
    BadDownsample,
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> TelemetryError + '_ {
    move |source| TelemetryError::Io { path: path.display().to_string(), source }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogHeader {
    pub drone_id: String,
    pub origin: GeoPoint,
    pub frame_dir: String,
    pub sample_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LogRecord {
    t: f64,
    lat: f64,
    lon: f64,
    alt: f64,
    frame_file: String,
}

/// Round to 7 decimal places (about a centimeter of latitude), the precision
/// coordinates are persisted at.
fn round_coord(v: f64) -> f64 {
    (v * 1e7).round() / 1e7
}

/// Write samples as `flight.jsonl` plus `frames/frame_NNNNNN.pgm` under
/// `dir`. Returns the log path.
pub fn write_log(
    samples: &[Sample],
    dir: &Path,
    drone_id: &str,
    sample_rate: f64,
) -> Result<PathBuf, TelemetryError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let frame_dir = dir.join(FRAME_DIR_NAME);
    fs::create_dir_all(&frame_dir).map_err(io_err(&frame_dir))?;

    let origin = samples.first().map(|s| s.location).unwrap_or(GeoPoint { lat: 0.0, lon: 0.0, alt: 0.0 });
    let header = LogHeader {
        drone_id: drone_id.to_string(),
        origin,
        frame_dir: FRAME_DIR_NAME.to_string(),
        sample_rate,
    };

    let log_path = dir.join(LOG_FILE_NAME);
    let mut out = File::create(&log_path).map_err(io_err(&log_path))?;
    writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes")).map_err(io_err(&log_path))?;

    for (i, sample) in samples.iter().enumerate() {
        let frame_file = format!("frame_{:06}.pgm", i + 1);
        write_pgm(&sample.frame, &frame_dir.join(&frame_file))?;
        let record = LogRecord {
            t: sample.t,
            lat: round_coord(sample.location.lat),
            lon: round_coord(sample.location.lon),
            alt: sample.location.alt,
            frame_file,
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("record serializes"))
            .map_err(io_err(&log_path))?;
    }
    Ok(log_path)
}

/// Lazy reader over a flight log. Frames are loaded (and grayscaled when the
/// file is a P6 PPM) as the iterator advances.
#[derive(Debug)]
pub struct LogReader {
    pub header: LogHeader,
    frame_dir: PathBuf,
    lines: Lines<BufReader<File>>,
    line_no: usize,
    prev_t: Option<f64>,
    /// Keep every `downsample`-th record, starting with the first.
    downsample: usize,
    record_index: usize,
}

/// Open a flight log for streaming replay. Accepts either the log
/// directory or the `flight.jsonl` file inside it.
pub fn read_log(path: &Path) -> Result<LogReader, TelemetryError> {
    let path = &if path.is_dir() { path.join("flight.jsonl") } else { path.to_path_buf() };
    let file = File::open(path).map_err(io_err(path))?;
    let mut lines = BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or(TelemetryError::Parse { line: 1, message: "empty log".into() })?
        .map_err(io_err(path))?;
    let header: LogHeader = serde_json::from_str(&header_line)
        .map_err(|e| TelemetryError::Parse { line: 1, message: e.to_string() })?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(LogReader {
        frame_dir: base.join(&header.frame_dir),
        header,
        lines,
        line_no: 1,
        prev_t: None,
        downsample: 1,
        record_index: 0,
    })
}

impl LogReader {
    /// Keep every `factor`-th record (factor 2 halves the effective sample
    /// rate, simulating a faster flight).
    pub fn with_downsample(mut self, factor: usize) -> Result<Self, TelemetryError> {
        if factor < 1 {
            return Err(TelemetryError::BadDownsample);
        }
        self.downsample = factor;
        Ok(self)
    }

    fn next_sample(&mut self) -> Option<Result<Sample, TelemetryError>> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => {
                    return Some(Err(TelemetryError::Parse {
                        line: self.line_no + 1,
                        message: e.to_string(),
                    }))
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let record: LogRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    return Some(Err(TelemetryError::Parse {
                        line: self.line_no,
                        message: e.to_string(),
                    }))
                }
            };
            if let Some(prev) = self.prev_t {
                if record.t == prev {
                    return Some(Err(TelemetryError::DuplicateTimestamp { line: self.line_no, t: record.t }));
                }
                if record.t < prev {
                    return Some(Err(TelemetryError::OutOfOrderTimestamp {
                        line: self.line_no,
                        t: record.t,
                        prev,
                    }));
                }
            }
            self.prev_t = Some(record.t);

            let keep = self.record_index % self.downsample == 0;
            self.record_index += 1;
            if !keep {
                continue;
            }

            let frame_path = self.frame_dir.join(&record.frame_file);
            if !frame_path.exists() {
                return Some(Err(TelemetryError::MissingFrame(record.frame_file)));
            }
            let mut frame = match read_pnm(&frame_path) {
                Ok(f) => f,
                Err(e) => return Some(Err(e.into())),
            };
            frame.timestamp = record.t;
            let location = match GeoPoint::new(record.lat, record.lon, record.alt) {
                Ok(p) => p,
                Err(e) => return Some(Err(e.into())),
            };
            return Some(Ok(Sample { frame, location, t: record.t }));
        }
    }

    /// Read the remaining records eagerly.
    pub fn collect_samples(mut self) -> Result<Vec<Sample>, TelemetryError> {
        let mut out = Vec::new();
        while let Some(s) = self.next_sample() {
            out.push(s?);
        }
        Ok(out)
    }
}

impl Iterator for LogReader {
    type Item = Result<Sample, TelemetryError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_sample()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::offset_point;
    use crate::imaging::Frame;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stream(len: usize, seed: u64) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let origin = GeoPoint::new(40.7128, -74.006, 50.0).unwrap();
        (0..len)
            .map(|i| Sample {
                frame: Frame::new(32, 32, (0..32 * 32).map(|_| rng.gen()).collect(), i as f64).unwrap(),
                location: offset_point(origin, 1.5 * i as f64, 0.7 * i as f64).unwrap(),
                t: i as f64,
            })
            .collect()
    }

    #[test]
    fn round_trip_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let samples = stream(5, 1);
        let log = write_log(&samples, dir.path(), "sim-drone", 1.0).unwrap();
        let back = read_log(&log).unwrap().collect_samples().unwrap();
        assert_eq!(back.len(), 5);
        for (a, b) in samples.iter().zip(&back) {
            assert_eq!(a.frame.pixels, b.frame.pixels);
            assert_eq!(a.t, b.t);
            assert!((a.location.lat - b.location.lat).abs() < 1e-7);
            assert!((a.location.lon - b.location.lon).abs() < 1e-7);
        }
    }

    #[test]
    fn empty_log_round_trips_to_empty_stream() {
        let dir = tempfile::tempdir().unwrap();
        let log = write_log(&[], dir.path(), "sim-drone", 1.0).unwrap();
        let back = read_log(&log).unwrap().collect_samples().unwrap();
        assert!(back.is_empty());
    }

    #[test]
    fn file_layout() {
        let dir = tempfile::tempdir().unwrap();
        let samples = stream(3, 2);
        let log = write_log(&samples, dir.path(), "sim-drone", 1.0).unwrap();
        let text = fs::read_to_string(&log).unwrap();
        assert_eq!(text.lines().count(), 4); // header + 3 records
        assert!(text.lines().next().unwrap().contains("\"drone_id\":\"sim-drone\""));
        for i in 1..=3 {
            assert!(dir.path().join(format!("frames/frame_{i:06}.pgm")).exists());
        }
    }

    #[test]
    fn downsampling_keeps_even_records() {
        let dir = tempfile::tempdir().unwrap();
        let samples = stream(10, 3);
        let log = write_log(&samples, dir.path(), "sim-drone", 1.0).unwrap();
        let back = read_log(&log).unwrap().with_downsample(2).unwrap().collect_samples().unwrap();
        assert_eq!(back.len(), 5);
        for (k, s) in back.iter().enumerate() {
            assert_eq!(s.t, (2 * k) as f64);
        }
    }

    #[test]
    fn missing_frame_is_reported_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let samples = stream(3, 4);
        let log = write_log(&samples, dir.path(), "sim-drone", 1.0).unwrap();
        fs::remove_file(dir.path().join("frames/frame_000002.pgm")).unwrap();
        let err = read_log(&log).unwrap().collect_samples().unwrap_err();
        assert!(matches!(err, TelemetryError::MissingFrame(name) if name == "frame_000002.pgm"));
    }

    #[test]
    fn order_violations_are_reported_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let samples = stream(3, 5);
        let log = write_log(&samples, dir.path(), "sim-drone", 1.0).unwrap();
        let mut text = fs::read_to_string(&log).unwrap();

        // duplicate timestamp
        let dup = text.lines().nth(1).unwrap().to_string();
        text.push_str(&dup);
        text.push('\n');
        fs::write(&log, &text).unwrap();
        let err = read_log(&log).unwrap().collect_samples().unwrap_err();
        assert!(matches!(err, TelemetryError::OutOfOrderTimestamp { line: 5, .. }));

        // garbage line
        fs::write(&log, "not json\n").unwrap();
        let err = read_log(&log).unwrap_err();
        assert!(matches!(err, TelemetryError::Parse { line: 1, .. }));
    }
}
