//! Grayscale frames, the frame-similarity metric, and ambient-light
//! darkening.
//!
//! Similarity is zero-mean normalized cross-correlation (Pearson correlation
//! of pixel intensities) scaled to the ±100 range. It is symmetric and
//! invariant under positive affine intensity changes, which is what makes the
//! correlation-vs-distance regression insensitive to uniform lighting changes
//! down to the quantization floor.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("frame dimensions {0}x{1} are below the 16x16 minimum")]
    TooSmall(usize, usize),
    #[error("pixel buffer length {got} does not match {width}x{height}")]
    BadBufferLength { width: usize, height: usize, got: usize },
    #[error("frame dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("frame has zero intensity variance; correlation is undefined")]
    ZeroVariance,
    #[error("light fraction {0} outside (0, 1]")]
    InvalidFraction(f64),
    #[error("RGB buffer length {0} is not a multiple of 3 pixels for {1}x{2}")]
    BadRgbLength(usize, usize, usize),
    #[error("not a P5/P6 netpbm file")]
    BadMagic,
    #[error("malformed netpbm header: {0}")]
    BadHeader(String),
    #[error("netpbm maxval {0} unsupported (only 255)")]
    BadMaxval(u32),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One 8-bit grayscale camera frame, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    /// Seconds since flight start.
    pub timestamp: f64,
}

impl Frame {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>, timestamp: f64) -> Result<Self, ImagingError> {
        if width < 16 || height < 16 {
            return Err(ImagingError::TooSmall(width, height));
        }
        if pixels.len() != width * height {
            return Err(ImagingError::BadBufferLength { width, height, got: pixels.len() });
        }
        Ok(Frame { width, height, pixels, timestamp })
    }
}

/// Frame similarity on a ±100 scale: 100 × Pearson correlation of the two
/// pixel buffers.
pub fn similarity(a: &Frame, b: &Frame) -> Result<f64, ImagingError> {
    if a.width != b.width || a.height != b.height {
        return Err(ImagingError::DimensionMismatch(a.width, a.height, b.width, b.height));
    }
    let n = a.pixels.len() as f64;
    let mean_a = a.pixels.iter().map(|&p| p as f64).sum::<f64>() / n;
    let mean_b = b.pixels.iter().map(|&p| p as f64).sum::<f64>() / n;

    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&pa, &pb) in a.pixels.iter().zip(&b.pixels) {
        let da = pa as f64 - mean_a;
        let db = pb as f64 - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(ImagingError::ZeroVariance);
    }
    Ok(100.0 * cov / (var_a.sqrt() * var_b.sqrt()))
}

/// Multiplicative darkening: every pixel scaled by `light_fraction` and
/// rounded. Fraction 1.0 is the identity.
pub fn darken(f: &Frame, light_fraction: f64) -> Result<Frame, ImagingError> {
    if !(light_fraction > 0.0 && light_fraction <= 1.0) {
        return Err(ImagingError::InvalidFraction(light_fraction));
    }
    let pixels = f
        .pixels
        .iter()
        .map(|&p| (p as f64 * light_fraction).round().clamp(0.0, 255.0) as u8)
        .collect();
    Ok(Frame { width: f.width, height: f.height, pixels, timestamp: f.timestamp })
}

/// ITU-R 601 luminance conversion of a packed 8-bit RGB buffer.
pub fn to_grayscale(rgb: &[u8], width: usize, height: usize, timestamp: f64) -> Result<Frame, ImagingError> {
    if rgb.len() != width * height * 3 {
        return Err(ImagingError::BadRgbLength(rgb.len(), width, height));
    }
    let pixels = rgb
        .chunks_exact(3)
        .map(|px| {
            (0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64)
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect();
    Frame::new(width, height, pixels, timestamp)
}

/// Downscale by area averaging. Each destination pixel is the mean of the
/// source box it covers. Upscaling is not supported; passing the native size
/// returns a copy.
pub fn downscale_area(f: &Frame, width: usize, height: usize) -> Result<Frame, ImagingError> {
    if width >= f.width && height >= f.height {
        return Frame::new(width, height, f.pixels.clone(), f.timestamp);
    }
    let sx = f.width as f64 / width as f64;
    let sy = f.height as f64 / height as f64;
    let mut pixels = Vec::with_capacity(width * height);
    for oy in 0..height {
        let y0 = (oy as f64 * sy).floor() as usize;
        let y1 = (((oy + 1) as f64 * sy).ceil() as usize).min(f.height);
        for ox in 0..width {
            let x0 = (ox as f64 * sx).floor() as usize;
            let x1 = (((ox + 1) as f64 * sx).ceil() as usize).min(f.width);
            let mut acc = 0.0;
            let mut count = 0.0;
            for y in y0..y1 {
                let row = &f.pixels[y * f.width..(y + 1) * f.width];
                for &px in &row[x0..x1] {
                    acc += px as f64;
                    count += 1.0;
                }
            }
            pixels.push((acc / count).round() as u8);
        }
    }
    Frame::new(width, height, pixels, f.timestamp)
}

/// Write a frame as binary PGM (P5, maxval 255).
pub fn write_pgm(f: &Frame, path: &Path) -> Result<(), ImagingError> {
    let io_err = |source| ImagingError::Io { path: path.display().to_string(), source };
    let mut out = Vec::with_capacity(f.pixels.len() + 32);
    write!(out, "P5\n{} {}\n255\n", f.width, f.height).expect("vec write");
    out.extend_from_slice(&f.pixels);
    fs::write(path, out).map_err(io_err)
}

/// Read a P5 (grayscale) or P6 (RGB, converted via luminance) netpbm file.
/// The timestamp is left at 0; callers restore it from log metadata.
pub fn read_pnm(path: &Path) -> Result<Frame, ImagingError> {
    let io_err = |source| ImagingError::Io { path: path.display().to_string(), source };
    let data = fs::read(path).map_err(io_err)?;
    let (magic, rest) = parse_header(&data)?;
    let (width, height, maxval, body) = rest;
    if maxval != 255 {
        return Err(ImagingError::BadMaxval(maxval));
    }
    match magic {
        b'5' => {
            if body.len() < width * height {
                return Err(ImagingError::BadHeader("truncated pixel data".into()));
            }
            Frame::new(width, height, body[..width * height].to_vec(), 0.0)
        }
        b'6' => {
            if body.len() < width * height * 3 {
                return Err(ImagingError::BadHeader("truncated pixel data".into()));
            }
            to_grayscale(&body[..width * height * 3], width, height, 0.0)
        }
        _ => Err(ImagingError::BadMagic),
    }
}

type PnmHeader<'a> = (usize, usize, u32, &'a [u8]);

fn parse_header(data: &[u8]) -> Result<(u8, PnmHeader<'_>), ImagingError> {
    if data.len() < 2 || data[0] != b'P' || (data[1] != b'5' && data[1] != b'6') {
        return Err(ImagingError::BadMagic);
    }
    let magic = data[1];
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // skip whitespace and '#' comment lines
        loop {
            while pos < data.len() && data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < data.len() && data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < data.len() && data[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(ImagingError::BadHeader("missing numeric field".into()));
        }
        let text = std::str::from_utf8(&data[start..pos]).unwrap();
        *field = text
            .parse()
            .map_err(|_| ImagingError::BadHeader(format!("bad number {text}")))?;
    }
    // exactly one whitespace byte after maxval
    if pos >= data.len() {
        return Err(ImagingError::BadHeader("missing pixel data".into()));
    }
    pos += 1;
    Ok((magic, (fields[0] as usize, fields[1] as usize, fields[2], &data[pos..])))
}
