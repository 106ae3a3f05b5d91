//! Raw FMCW data-cube synthesis with DDMA transmit coding.
//!
//! Each visible scatterer at sensor-frame range `R`, radial velocity `v_r` and
//! direction cosine `u = sin θ` contributes, for TX `i`, RX `j`, chirp `k` and
//! fast-time sample `n`,
//!
//! ```text
//! a · exp(j2π [ f_b·n/f_s + (2 v_r / λ)·k·T_c + d(i,j)·u + i·k/n_tx ])
//! ```
//!
//! with beat frequency `f_b = 2 R B / (c T_sweep)` and amplitude
//! `a = reflectivity / R²`.

use std::f64::consts::TAU;

use num_complex::{Complex32, Complex64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{derive_resolutions, ArrayGeometry, WaveformConfig, SPEED_OF_LIGHT};
use crate::cube::DataCube;
use crate::error::{Error, Result};
use crate::fusion::SensorPose;
use crate::scene::{Scatterer, Scene};

/// What to do with a scatterer whose range or radial speed cannot be
/// represented unambiguously by the waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutOfBounds {
    /// Fail with a diagnostic naming the scatterer.
    #[default]
    Reject,
    /// Synthesize it anyway; it folds into the wrong range/Doppler bin.
    Alias,
    /// Leave it out, as an IF anti-alias filter would for far targets.
    Discard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    /// Standard deviation of the circular complex white noise per sample.
    pub noise_sigma: f64,
    pub seed: u64,
    pub sensor_id: u16,
    pub out_of_bounds: OutOfBounds,
    /// Scatterers with |azimuth| above half this angle are not seen.
    pub azimuth_fov_deg: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            noise_sigma: 0.0,
            seed: 0,
            sensor_id: 0,
            out_of_bounds: OutOfBounds::Reject,
            azimuth_fov_deg: 150.0,
        }
    }
}

/// Scatterer as seen from the sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorView {
    pub range: f64,
    pub radial_velocity: f64,
    pub azimuth_deg: f64,
    /// Direction cosine along the array axis (sensor y).
    pub direction_cosine: f64,
    pub amplitude: f64,
}

/// Geometry of one scatterer relative to a sensor pose, or `None` if it sits on
/// the sensor or has zero reflectivity.
pub fn sensor_view(scatterer: &Scatterer, pose: &SensorPose) -> Option<SensorView> {
    let p = pose.to_sensor(scatterer.position);
    let v = pose.rotate_to_sensor(scatterer.velocity);
    let range = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if range <= 0.0 || scatterer.reflectivity <= 0.0 {
        return None;
    }
    Some(SensorView {
        range,
        radial_velocity: (p[0] * v[0] + p[1] * v[1] + p[2] * v[2]) / range,
        azimuth_deg: p[1].atan2(p[0]).to_degrees(),
        direction_cosine: p[1] / range,
        amplitude: scatterer.reflectivity / (range * range),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SynthesisStats {
    pub contributing: usize,
    pub outside_fov: usize,
    pub discarded: usize,
    pub aliased: usize,
}

pub fn synthesize_cube(
    scene: &Scene,
    pose: &SensorPose,
    config: &WaveformConfig,
    geometry: &ArrayGeometry,
    options: &SynthesisOptions,
) -> Result<DataCube> {
    synthesize_cube_with_stats(scene, pose, config, geometry, options).map(|(cube, _)| cube)
}

pub fn synthesize_cube_with_stats(
    scene: &Scene,
    pose: &SensorPose,
    config: &WaveformConfig,
    geometry: &ArrayGeometry,
    options: &SynthesisOptions,
) -> Result<(DataCube, SynthesisStats)> {
    let res = derive_resolutions(config, geometry)?;
    scene.validate()?;

    let mut stats = SynthesisStats::default();
    let mut views = Vec::new();
    for (index, s) in scene.radar_scatterers().iter().enumerate() {
        let Some(view) = sensor_view(s, pose) else {
            continue;
        };
        if view.azimuth_deg.abs() > 0.5 * options.azimuth_fov_deg {
            stats.outside_fov += 1;
            continue;
        }
        let problem = if view.range >= res.max_range {
            Some(format!(
                "range {:.3} m beyond unambiguous {:.3} m",
                view.range, res.max_range
            ))
        } else if view.radial_velocity.abs() >= res.max_unambiguous_velocity_per_tx {
            Some(format!(
                "radial velocity {:.3} m/s beyond ±{:.3} m/s per transmitter",
                view.radial_velocity, res.max_unambiguous_velocity_per_tx
            ))
        } else {
            None
        };
        if let Some(reason) = problem {
            match options.out_of_bounds {
                OutOfBounds::Reject => return Err(Error::OutOfBounds { index, reason }),
                OutOfBounds::Discard => {
                    stats.discarded += 1;
                    continue;
                }
                OutOfBounds::Alias => stats.aliased += 1,
            }
        }
        views.push(view);
    }
    stats.contributing = views.len();

    let (n_chirps, n_rx, n_samples) = (config.n_chirps, config.n_rx, config.n_samples);
    let n_tx = config.n_tx;
    let lambda = config.wavelength();
    let virt = geometry.virtual_positions();

    let mut acc = vec![Complex64::new(0.0, 0.0); config.cube_len()];
    let mut fast = vec![Complex64::new(0.0, 0.0); n_samples];
    let mut slow = vec![Complex64::new(0.0, 0.0); n_chirps * n_rx];

    for view in &views {
        // cycles per fast-time sample and per chirp
        let beat = 2.0 * view.range * config.bandwidth
            / (SPEED_OF_LIGHT * config.sweep_duration())
            / config.sample_rate;
        let doppler = 2.0 * view.radial_velocity * config.chirp_duration / lambda;

        for (n, f) in fast.iter_mut().enumerate() {
            *f = cis((beat * n as f64).fract());
        }
        // Sum over transmitters per (chirp, rx) so the fast-time expansion runs
        // once per scatterer.
        for k in 0..n_chirps {
            for j in 0..n_rx {
                let mut sum = Complex64::new(0.0, 0.0);
                for i in 0..n_tx {
                    let cycles = doppler * k as f64
                        + virt[i * n_rx + j] * view.direction_cosine
                        + ((i * k) % n_tx) as f64 / n_tx as f64;
                    sum += cis(cycles.fract());
                }
                slow[k * n_rx + j] = sum * view.amplitude;
            }
        }
        for (row, coef) in acc.chunks_exact_mut(n_samples).zip(&slow) {
            for (a, f) in row.iter_mut().zip(&fast) {
                *a += coef * f;
            }
        }
    }

    let mut samples: Vec<Complex32> = acc
        .iter()
        .map(|c| Complex32::new(c.re as f32, c.im as f32))
        .collect();
    if options.noise_sigma > 0.0 {
        add_noise(&mut samples, options.noise_sigma, options.seed);
    }

    let timestamp_ns = (scene.timestamp * 1e9).round().max(0.0) as u64;
    let cube = DataCube::from_samples(config.clone(), options.sensor_id, timestamp_ns, samples)?;
    Ok((cube, stats))
}

/// Adds circular complex white Gaussian noise with `E|n|² = sigma²`.
pub fn add_noise(samples: &mut [Complex32], sigma: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("finite sigma");
    for s in samples {
        let re = normal.sample(&mut rng);
        let im = normal.sample(&mut rng);
        *s += Complex32::new(re as f32, im as f32);
    }
}

#[inline]
fn cis(cycles: f64) -> Complex64 {
    let (s, c) = (TAU * cycles).sin_cos();
    Complex64::new(c, s)
}
