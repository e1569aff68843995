//! Deterministic flight simulator: procedural orthophoto terrain, a nadir
//! pinhole camera footprint at altitude, scripted waypoint paths, and 1 Hz
//! sampling.
//!
//! Everything is a pure function of the terrain seed and the plan, so
//! scenario runs are reproducible bit-for-bit. Urban terrain layers value
//! noise at several wavelengths over a rectangular block pattern; Flat
//! terrain is a single long-wavelength swell of low amplitude, matching the
//! open/flat areas where frame correlation carries little information.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::Sample;
use crate::geo::{offset_point, GeoError, GeoPoint};
use crate::imaging::{darken, Frame, ImagingError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("terrain would need {0} texels per side (max 16384); shrink extent or coarsen resolution")]
    ExtentTooLarge(usize),
    #[error("camera footprint at ({north}, {east}) extends outside the terrain")]
    FootprintOutOfBounds { north: f64, east: f64 },
    #[error("invalid flight plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerrainKind {
    Urban,
    Flat,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TerrainSpec {
    pub seed: u64,
    pub kind: TerrainKind,
    /// Side of the square terrain patch, meters.
    pub extent: f64,
    /// Meters per texel.
    pub ground_resolution: f64,
}

/// Isotropic fine-detail octaves: wavelength (meters) and intensity
/// amplitude. These give every 64x64-texel tile local texture but decay
/// within a couple of samples of travel.
const URBAN_FINE: [(f64, f64); 3] = [(4.0, 5.0), (8.0, 10.0), (16.0, 8.0)];
/// Street-grid octaves, elongated along the north axis: (cross wavelength,
/// along wavelength, intensity amplitude), meters. The elongation keeps
/// frames correlated over long travel distances while the fine cross
/// wavelength varies quickly across track, which keeps the per-anchor
/// scatter of the similarity-vs-distance curve small. Members whose cross
/// wavelength approaches the footprint contribute little variance at low
/// altitude, so the usable correlation range grows with altitude.
const URBAN_STREETS: [(f64, f64, f64); 6] = [
    (4.0, 32.0, 5.0),
    (8.0, 64.0, 55.0),
    (16.0, 128.0, 10.0),
    (128.0, 128.0, 37.0),
    (256.0, 256.0, 58.0),
    (128.0, 512.0, 52.0),
];
/// City-block cell size (meters) and intensity amplitude.
const BLOCK_SIZE: (f64, f64) = (24.0, 36.0);
const BLOCK_AMP: f64 = 8.0;
/// Flat terrain: one long swell, barely above the quantization floor.
const FLAT_WAVELENGTH: f64 = 256.0;
const FLAT_AMP: f64 = 8.0;

const MAX_TEXELS_PER_SIDE: usize = 16_384;

/// Seeded grayscale ground texture. Coordinates are meters with the origin
/// at the patch center, north up, east right.
#[derive(Debug, Clone)]
pub struct Terrain {
    pub spec: TerrainSpec,
    pub size: usize,
    texels: Vec<u8>,
}

fn splitmix(mut h: u64) -> u64 {
    h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^ (h >> 31)
}

/// Hash of (seed, channel, lattice point) to a uniform in [0, 1).
fn lattice_value(seed: u64, channel: u64, xi: i64, yi: i64) -> f64 {
    let mut h = splitmix(seed ^ channel.wrapping_mul(0xA076_1D64_78BD_642F));
    h = splitmix(h ^ (xi as u64));
    h = splitmix(h ^ (yi as u64).rotate_left(32));
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Smoothstep-interpolated value noise; `x`, `y` in lattice units.
fn value_noise(seed: u64, channel: u64, x: f64, y: f64) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let sx = fx * fx * (3.0 - 2.0 * fx);
    let sy = fy * fy * (3.0 - 2.0 * fy);
    let (xi, yi) = (x0 as i64, y0 as i64);
    let v00 = lattice_value(seed, channel, xi, yi);
    let v10 = lattice_value(seed, channel, xi + 1, yi);
    let v01 = lattice_value(seed, channel, xi, yi + 1);
    let v11 = lattice_value(seed, channel, xi + 1, yi + 1);
    let top = v00 + sx * (v10 - v00);
    let bot = v01 + sx * (v11 - v01);
    top + sy * (bot - top)
}

fn urban_intensity(seed: u64, gx: f64, gy: f64) -> f64 {
    let mut v = 128.0;
    for (channel, &(wavelength, amp)) in URBAN_FINE.iter().enumerate() {
        let n = value_noise(seed, channel as u64, gx / wavelength, gy / wavelength);
        v += amp * (n - 0.5) * 2.0;
    }
    for (channel, &(cross, along, amp)) in URBAN_STREETS.iter().enumerate() {
        let n = value_noise(seed, 16 + channel as u64, gx / cross, gy / along);
        v += amp * (n - 0.5) * 2.0;
    }
    let bx = (gx / BLOCK_SIZE.0).floor() as i64;
    let by = (gy / BLOCK_SIZE.1).floor() as i64;
    v += BLOCK_AMP * (lattice_value(seed, 0xB10C, bx, by) - 0.5) * 2.0;
    v
}

fn flat_intensity(seed: u64, gx: f64, gy: f64) -> f64 {
    let n = value_noise(seed, 0xF1A7, gx / FLAT_WAVELENGTH, gy / FLAT_WAVELENGTH);
    128.0 + FLAT_AMP * (n - 0.5) * 2.0
}

/// Produce the seeded ground texture for a spec.
pub fn generate_terrain(spec: &TerrainSpec) -> Result<Terrain, SimError> {
    let size = (spec.extent / spec.ground_resolution).round() as usize;
    if size > MAX_TEXELS_PER_SIDE {
        return Err(SimError::ExtentTooLarge(size));
    }
    let mut texels = Vec::with_capacity(size * size);
    for row in 0..size {
        // row 0 is the north edge
        let gy = (row as f64 + 0.5) * spec.ground_resolution;
        for col in 0..size {
            let gx = (col as f64 + 0.5) * spec.ground_resolution;
            let v = match spec.kind {
                TerrainKind::Urban => urban_intensity(spec.seed, gx, gy),
                TerrainKind::Flat => flat_intensity(spec.seed, gx, gy),
            };
            texels.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(Terrain { spec: *spec, size, texels })
}

impl Terrain {
    /// Bilinear sample in texture coordinates (meters from the northwest
    /// corner). Out-of-range coordinates clamp to the edge texel.
    fn sample(&self, gx: f64, gy: f64) -> f64 {
        let res = self.spec.ground_resolution;
        let fx = (gx / res - 0.5).clamp(0.0, (self.size - 1) as f64);
        let fy = (gy / res - 0.5).clamp(0.0, (self.size - 1) as f64);
        let x0 = fx.floor() as usize;
        let y0 = fy.floor() as usize;
        let x1 = (x0 + 1).min(self.size - 1);
        let y1 = (y0 + 1).min(self.size - 1);
        let tx = fx - x0 as f64;
        let ty = fy - y0 as f64;
        let at = |x: usize, y: usize| self.texels[y * self.size + x] as f64;
        let top = at(x0, y0) + tx * (at(x1, y0) - at(x0, y0));
        let bot = at(x0, y1) + tx * (at(x1, y1) - at(x0, y1));
        top + ty * (bot - top)
    }

    /// Intensity standard deviation of the whole texture.
    pub fn global_std(&self) -> f64 {
        let n = self.texels.len() as f64;
        let mean = self.texels.iter().map(|&t| t as f64).sum::<f64>() / n;
        (self.texels.iter().map(|&t| (t as f64 - mean).powi(2)).sum::<f64>() / n).sqrt()
    }

    /// Standard deviation per `tile`-texel square tile, row-major, for the
    /// tiles that fit entirely.
    pub fn tile_stds(&self, tile: usize) -> Vec<f64> {
        let per_side = self.size / tile;
        let mut out = Vec::with_capacity(per_side * per_side);
        for ty in 0..per_side {
            for tx in 0..per_side {
                let mut sum = 0.0;
                let mut sq = 0.0;
                for y in ty * tile..(ty + 1) * tile {
                    for x in tx * tile..(tx + 1) * tile {
                        let v = self.texels[y * self.size + x] as f64;
                        sum += v;
                        sq += v * v;
                    }
                }
                let n = (tile * tile) as f64;
                let mean = sum / n;
                out.push((sq / n - mean * mean).max(0.0).sqrt());
            }
        }
        out
    }
}

/// Nadir pinhole camera.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CameraSpec {
    /// Full field-of-view angle, degrees.
    #[serde(default = "default_fov")]
    pub fov: f64,
    /// Square output resolution, pixels.
    #[serde(default = "default_image_size")]
    pub image_size: usize,
    /// Additive sensor read-noise standard deviation in intensity levels,
    /// applied after darkening. Deterministic per (seed, position, pixel).
    /// This is what makes low ambient light degrade the correlation: the
    /// scene signal scales with the light fraction while the read noise
    /// does not.
    #[serde(default = "default_sensor_noise")]
    pub sensor_noise: f64,
    /// Fixed-pattern noise standard deviation in intensity levels: one
    /// deviate per 32x32 pixel block, applied after darkening. Spatially
    /// correlated noise perturbs the measured frame similarity itself, so
    /// its effect grows as the scene signal fades with ambient light.
    #[serde(default = "default_pattern_noise")]
    pub pattern_noise: f64,
}

fn default_fov() -> f64 {
    78.0
}
fn default_image_size() -> usize {
    256
}
fn default_sensor_noise() -> f64 {
    1.5
}
fn default_pattern_noise() -> f64 {
    1.5
}

impl Default for CameraSpec {
    fn default() -> Self {
        CameraSpec {
            fov: default_fov(),
            image_size: default_image_size(),
            sensor_noise: default_sensor_noise(),
            pattern_noise: default_pattern_noise(),
        }
    }
}

impl CameraSpec {
    /// Side of the square ground area imaged from `altitude` meters.
    pub fn footprint_side(&self, altitude: f64) -> f64 {
        2.0 * altitude * (self.fov.to_radians() / 2.0).tan()
    }
}

/// Scripted flight: waypoints in meters north/east of the origin (which sits
/// at the terrain center), flown at constant speed and altitude.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlightPlan {
    pub waypoints: Vec<(f64, f64)>,
    /// Meters per second.
    pub speed: f64,
    /// Meters above ground, 10..=500.
    pub altitude: f64,
    /// Samples per second.
    #[serde(default = "default_sample_rate")]
    pub sample_rate: f64,
    /// Ambient light, (0, 1].
    #[serde(default = "default_light")]
    pub light_fraction: f64,
}

fn default_sample_rate() -> f64 {
    1.0
}
fn default_light() -> f64 {
    1.0
}

impl FlightPlan {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.waypoints.len() < 2 {
            return Err(SimError::InvalidPlan("need at least two waypoints".into()));
        }
        for pair in self.waypoints.windows(2) {
            if pair[0] == pair[1] {
                return Err(SimError::InvalidPlan(format!(
                    "consecutive waypoints {:?} are identical",
                    pair[0]
                )));
            }
        }
        if !(self.speed > 0.0) {
            return Err(SimError::InvalidPlan(format!("speed {} must be > 0", self.speed)));
        }
        if !(10.0..=500.0).contains(&self.altitude) {
            return Err(SimError::InvalidPlan(format!(
                "altitude {} outside [10, 500] m",
                self.altitude
            )));
        }
        if !(self.sample_rate > 0.0) {
            return Err(SimError::InvalidPlan("sample rate must be > 0".into()));
        }
        if !(self.light_fraction > 0.0 && self.light_fraction <= 1.0) {
            return Err(SimError::InvalidPlan(format!(
                "light fraction {} outside (0, 1]",
                self.light_fraction
            )));
        }
        Ok(())
    }

    /// Total path length, meters.
    pub fn path_length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt())
            .sum()
    }

    /// Position (north, east) after traveling `dist` meters along the path.
    fn position_at(&self, dist: f64) -> (f64, f64) {
        let mut remaining = dist;
        for w in self.waypoints.windows(2) {
            let leg = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
            if remaining <= leg {
                let f = remaining / leg;
                return (w[0].0 + f * (w[1].0 - w[0].0), w[0].1 + f * (w[1].1 - w[0].1));
            }
            remaining -= leg;
        }
        *self.waypoints.last().unwrap()
    }
}

/// Render the camera view at `position` (north, east meters from the terrain
/// center), including darkening and the sensor noise floor.
pub fn render_frame(
    terrain: &Terrain,
    position: (f64, f64),
    camera: &CameraSpec,
    altitude: f64,
    light: f64,
) -> Result<Frame, SimError> {
    let side = camera.footprint_side(altitude);
    let half = side / 2.0;
    let extent = terrain.spec.extent;
    // texture coordinates: x east from the west edge, y south from the north edge
    let cx = position.1 + extent / 2.0;
    let cy = extent / 2.0 - position.0;
    if cx - half < 0.0 || cx + half > extent || cy - half < 0.0 || cy + half > extent {
        return Err(SimError::FootprintOutOfBounds { north: position.0, east: position.1 });
    }

    let is = camera.image_size;
    let pixel_ground = side / is as f64;
    // supersample so pixels larger than a texel still area-average
    let k = ((pixel_ground / terrain.spec.ground_resolution).ceil() as usize).clamp(1, 4);
    let kf = k as f64;

    let mut pixels = Vec::with_capacity(is * is);
    for row in 0..is {
        for col in 0..is {
            let mut acc = 0.0;
            for sy in 0..k {
                let py = cy - half + (row as f64 + (sy as f64 + 0.5) / kf) * pixel_ground;
                for sx in 0..k {
                    let px = cx - half + (col as f64 + (sx as f64 + 0.5) / kf) * pixel_ground;
                    acc += terrain.sample(px, py);
                }
            }
            pixels.push((acc / (kf * kf)).round().clamp(0.0, 255.0) as u8);
        }
    }
    let frame = Frame::new(is, is, pixels, 0.0)?;
    let mut frame = darken(&frame, light)?;

    if camera.sensor_noise > 0.0 || camera.pattern_noise > 0.0 {
        let pos_hash = splitmix(
            terrain.spec.seed
                ^ position.0.to_bits().rotate_left(17)
                ^ position.1.to_bits().rotate_left(43),
        );
        let pattern_hash = splitmix(pos_hash ^ 0xB077_CE5E_B10B_5E5E);
        for (idx, px) in frame.pixels.iter_mut().enumerate() {
            let mut v = *px as f64;
            if camera.sensor_noise > 0.0 {
                v += hash_gauss(splitmix(pos_hash ^ idx as u64)) * camera.sensor_noise;
            }
            if camera.pattern_noise > 0.0 {
                // one deviate per 32x32 pixel block: thermal blotches and
                // amplifier banding are correlated over wide sensor regions,
                // unlike per-pixel read noise
                let block = ((idx / is) / 32 * 64 + (idx % is) / 32) as u64;
                v += hash_gauss(splitmix(pattern_hash ^ block)) * camera.pattern_noise;
            }
            *px = v.round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(frame)
}

/// Irwin-Hall(3) approximation of a standard gaussian from a 64-bit hash:
/// three 21-bit uniforms, variance 1/4 before scaling.
fn hash_gauss(h: u64) -> f64 {
    let u1 = (h & 0x1F_FFFF) as f64 / 2_097_152.0;
    let u2 = ((h >> 21) & 0x1F_FFFF) as f64 / 2_097_152.0;
    let u3 = ((h >> 42) & 0x1F_FFFF) as f64 / 2_097_152.0;
    (u1 + u2 + u3 - 1.5) * 2.0
}

/// Fly the plan over the terrain, producing one sample per tick with the
/// rendered frame and the true GPS position. Sampling is endpoint-inclusive.
pub fn fly(
    plan: &FlightPlan,
    terrain: &Terrain,
    camera: &CameraSpec,
    origin: GeoPoint,
) -> Result<Vec<Sample>, SimError> {
    plan.validate()?;
    let total = plan.path_length();
    let duration = total / plan.speed;
    let ticks = (duration * plan.sample_rate + 1e-9).floor() as usize;

    let mut samples = Vec::with_capacity(ticks + 1);
    for k in 0..=ticks {
        let t = k as f64 / plan.sample_rate;
        let (north, east) = plan.position_at(plan.speed * t);
        let mut frame = render_frame(terrain, (north, east), camera, plan.altitude, plan.light_fraction)?;
        frame.timestamp = t;
        let mut location = offset_point(origin, north, east)?;
        location.alt = plan.altitude;
        samples.push(Sample { frame, location, t });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::similarity;

    fn urban(seed: u64) -> Terrain {
        generate_terrain(&TerrainSpec {
            seed,
            kind: TerrainKind::Urban,
            extent: 400.0,
            ground_resolution: 0.5,
        })
        .unwrap()
    }

    #[test]
    fn terrain_is_deterministic() {
        let a = urban(7);
        let b = urban(7);
        assert_eq!(a.texels, b.texels);
        let c = urban(8);
        assert_ne!(a.texels, c.texels);
    }

    #[test]
    fn extent_limit_enforced() {
        let spec = TerrainSpec { seed: 1, kind: TerrainKind::Urban, extent: 20_000.0, ground_resolution: 1.0 };
        assert!(matches!(generate_terrain(&spec), Err(SimError::ExtentTooLarge(_))));
    }

    #[test]
    fn urban_tiles_have_structure() {
        let t = generate_terrain(&TerrainSpec {
            seed: 3,
            kind: TerrainKind::Urban,
            extent: 1024.0,
            ground_resolution: 2.0,
        })
        .unwrap();
        let stds = t.tile_stds(64);
        let ok = stds.iter().filter(|&&s| s >= 20.0).count();
        assert!(
            ok as f64 >= 0.9 * stds.len() as f64,
            "{ok}/{} tiles above 20 levels",
            stds.len()
        );
    }

    #[test]
    fn flat_terrain_is_quiet() {
        let t = generate_terrain(&TerrainSpec {
            seed: 3,
            kind: TerrainKind::Flat,
            extent: 400.0,
            ground_resolution: 0.5,
        })
        .unwrap();
        assert!(t.global_std() <= 10.0, "flat std {}", t.global_std());
    }

    #[test]
    fn identical_positions_render_identically() {
        let t = urban(5);
        let cam = CameraSpec::default();
        let a = render_frame(&t, (10.0, -20.0), &cam, 50.0, 1.0).unwrap();
        let b = render_frame(&t, (10.0, -20.0), &cam, 50.0, 1.0).unwrap();
        assert!((similarity(&a, &b).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_scope_displacement_decorrelates() {
        let t = urban(11);
        let cam = CameraSpec::default();
        let side = cam.footprint_side(50.0);
        let mut sims = Vec::new();
        for i in 0..50 {
            let east = -140.0 + 1.0 * i as f64;
            let a = render_frame(&t, (-70.0, east), &cam, 50.0, 1.0).unwrap();
            let b = render_frame(&t, (-70.0 + side + 5.0, east), &cam, 50.0, 1.0).unwrap();
            sims.push(similarity(&a, &b).unwrap());
        }
        let mean_abs = sims.iter().map(|s| s.abs()).sum::<f64>() / sims.len() as f64;
        let max_abs = sims.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        assert!(mean_abs < 15.0, "mean |similarity| {mean_abs:.1} beyond one footprint");
        assert!(max_abs < 35.0, "max |similarity| {max_abs:.1} beyond one footprint");
    }

    #[test]
    fn half_footprint_sits_between_extremes() {
        let t = urban(13);
        let cam = CameraSpec::default();
        let side = cam.footprint_side(50.0);
        let a = render_frame(&t, (0.0, 0.0), &cam, 50.0, 1.0).unwrap();
        let b = render_frame(&t, (side / 2.0, 0.0), &cam, 50.0, 1.0).unwrap();
        let s = similarity(&a, &b).unwrap();
        assert!(s > 15.0 && s < 90.0, "half-footprint similarity {s}");
    }

    #[test]
    fn footprint_bounds_are_checked() {
        let t = urban(17);
        let cam = CameraSpec::default();
        assert!(matches!(
            render_frame(&t, (190.0, 0.0), &cam, 50.0, 1.0),
            Err(SimError::FootprintOutOfBounds { .. })
        ));
    }

    #[test]
    fn single_leg_sample_count_and_spacing() {
        let t = urban(19);
        let cam = CameraSpec::default();
        let origin = GeoPoint::new(40.0, -74.0, 0.0).unwrap();
        let plan = FlightPlan {
            waypoints: vec![(-50.0, 0.0), (50.0, 0.0)],
            speed: 5.0,
            altitude: 50.0,
            sample_rate: 1.0,
            light_fraction: 1.0,
        };
        let samples = fly(&plan, &t, &cam, origin).unwrap();
        assert_eq!(samples.len(), 21);
        for pair in samples.windows(2) {
            let d = crate::geo::haversine_distance(pair[0].location, pair[1].location);
            assert!((d - 5.0).abs() < 0.01, "step {d}");
        }
        assert_eq!(samples[0].t, 0.0);
        assert_eq!(samples[20].t, 20.0);
    }

    #[test]
    fn repeated_waypoints_are_rejected() {
        let plan = FlightPlan {
            waypoints: vec![(0.0, 0.0), (0.0, 0.0), (10.0, 0.0)],
            speed: 5.0,
            altitude: 50.0,
            sample_rate: 1.0,
            light_fraction: 1.0,
        };
        assert!(matches!(plan.validate(), Err(SimError::InvalidPlan(_))));
    }

    #[test]
    fn star_route_revisits_base() {
        let t = urban(23);
        let cam = CameraSpec::default();
        let origin = GeoPoint::new(40.0, -74.0, 0.0).unwrap();
        // out-and-back legs from a base, pizza-delivery style
        let plan = FlightPlan {
            waypoints: vec![
                (0.0, 0.0),
                (20.0, 0.0),
                (0.0, 0.0),
                (0.0, 20.0),
                (0.0, 0.0),
                (-20.0, 0.0),
                (0.0, 0.0),
            ],
            speed: 5.0,
            altitude: 100.0,
            sample_rate: 1.0,
            light_fraction: 1.0,
        };
        let samples = fly(&plan, &t, &cam, origin).unwrap();
        let base = &samples[0];
        for k in [8, 16, 24] {
            let s = similarity(&base.frame, &samples[k].frame).unwrap();
            assert!(s >= 99.0, "revisit at t={k} similarity {s}");
        }
    }

    #[test]
    fn flight_stream_is_bit_exact_across_runs() {
        let cam = CameraSpec::default();
        let origin = GeoPoint::new(40.0, -74.0, 0.0).unwrap();
        let plan = FlightPlan {
            waypoints: vec![(0.0, -40.0), (0.0, 40.0)],
            speed: 4.0,
            altitude: 50.0,
            sample_rate: 1.0,
            light_fraction: 0.75,
        };
        let a = fly(&plan, &urban(29), &cam, origin).unwrap();
        let b = fly(&plan, &urban(29), &cam, origin).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.frame.pixels, y.frame.pixels);
            assert_eq!(x.location, y.location);
        }
    }
}
