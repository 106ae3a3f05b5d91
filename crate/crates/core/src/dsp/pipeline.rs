//! Single-sensor processing chain: range/Doppler FFT, noncoherent integration
//! over the receivers, CA-CFAR, DDMA demultiplexing, angle FFT, point cloud.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::angle::estimate_angle;
use super::cfar::{cfar_detect, CfarParams};
use super::ddma::ddma_demux;
use super::peak::interpolate_peak;
use super::spectrum::{PowerMap, RangeDopplerMap, RangeDopplerProcessor};
use super::window::Window;
use crate::cloud::{PointCloud, RadarPoint};
use crate::config::{validate, ArrayGeometry, WaveformConfig};
use crate::cube::DataCube;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProcessingParams {
    pub window: Window,
    pub cfar: CfarParams,
    /// Angle FFT length.
    pub zero_pad: usize,
    /// Detections this close to a DDMA sub-band edge are flagged ambiguous.
    pub ddma_guard: usize,
    /// Emit points for ambiguous detections instead of dropping them.
    pub keep_ambiguous: bool,
}

impl Default for ProcessingParams {
    fn default() -> Self {
        ProcessingParams {
            window: Window::Hann,
            cfar: CfarParams::default(),
            zero_pad: 256,
            ddma_guard: 2,
            keep_ambiguous: false,
        }
    }
}

/// A demultiplexed target before conversion to physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection<T> {
    pub range_bin: usize,
    pub range_offset: T,
    /// Signed bin inside a DDMA sub-band.
    pub doppler_bin: isize,
    pub doppler_offset: T,
    pub snr_db: T,
    /// Integrated power at the detected cell.
    pub power: T,
    pub snapshot: Vec<Complex<T>>,
    pub ambiguous: bool,
}

#[derive(Debug, Clone)]
pub struct FrameOutput<T> {
    pub cloud: PointCloud,
    pub detections: Vec<Detection<T>>,
    /// Threshold crossings that survived local-maximum merging.
    pub cfar_hits: usize,
}

pub struct FrameProcessor<T: Real> {
    config: WaveformConfig,
    geometry: ArrayGeometry,
    params: ProcessingParams,
    spectrum: RangeDopplerProcessor<T>,
}

impl<T: Real> FrameProcessor<T> {
    pub fn new(
        config: &WaveformConfig,
        geometry: &ArrayGeometry,
        params: &ProcessingParams,
    ) -> Result<Self> {
        let violations = validate(config, geometry);
        if !violations.is_empty() {
            return Err(Error::InvalidConfig(violations));
        }
        if params.zero_pad == 0 {
            return Err(Error::Config("zero_pad must be > 0".into()));
        }
        Ok(FrameProcessor {
            config: config.clone(),
            geometry: geometry.clone(),
            params: params.clone(),
            spectrum: RangeDopplerProcessor::new(config, params.window),
        })
    }

    pub fn config(&self) -> &WaveformConfig {
        &self.config
    }

    pub fn range_doppler(&self, cube: &DataCube) -> Result<RangeDopplerMap<T>> {
        self.check_cube(cube)?;
        self.spectrum.process(cube)
    }

    fn check_cube(&self, cube: &DataCube) -> Result<()> {
        let c = &cube.config;
        if (c.n_chirps, c.n_rx, c.n_samples, c.n_tx)
            != (
                self.config.n_chirps,
                self.config.n_rx,
                self.config.n_samples,
                self.config.n_tx,
            )
        {
            return Err(Error::Dimension(format!(
                "cube {}×{}×{} with {} TX does not match processor configuration",
                c.n_chirps, c.n_rx, c.n_samples, c.n_tx
            )));
        }
        Ok(())
    }

    pub fn process(&self, cube: &DataCube) -> Result<FrameOutput<T>> {
        let map = self.range_doppler(cube)?;
        let power = map.integrate();
        let hits = cfar_detect(&power, &self.params.cfar)?;
        let cfar_hits = hits.len();

        // One detection per (range bin, true Doppler bin): the TX aliases of a
        // target collapse onto the same key, strongest copy wins.
        let mut merged: BTreeMap<(usize, isize), Detection<T>> = BTreeMap::new();
        for hit in &hits {
            let demux = ddma_demux(
                &map,
                hit.range_bin,
                hit.doppler_bin,
                self.config.n_tx,
                self.params.ddma_guard,
            )?;
            if demux.ambiguous && !self.params.keep_ambiguous {
                continue;
            }
            let det = Detection {
                range_bin: hit.range_bin,
                range_offset: range_offset(&power, hit.doppler_bin, hit.range_bin),
                doppler_bin: demux.doppler_bin,
                doppler_offset: doppler_offset(&power, hit.doppler_bin, hit.range_bin),
                snr_db: hit.snr_db,
                power: hit.power,
                snapshot: demux.snapshot,
                ambiguous: demux.ambiguous,
            };
            match merged.get(&(hit.range_bin, demux.doppler_bin)) {
                Some(existing) if existing.power >= det.power => {}
                _ => {
                    merged.insert((hit.range_bin, demux.doppler_bin), det);
                }
            }
        }

        let mut cloud = PointCloud::new(0, cube.timestamp_s(), cube.sensor_id);
        let mut detections = Vec::with_capacity(merged.len());
        for det in merged.into_values() {
            let range =
                (det.range_bin as f64 + det.range_offset.to_f64().unwrap_or(0.0)) * map.range_bin_m;
            if range <= 0.0 {
                continue;
            }
            let angle = match estimate_angle(
                &det.snapshot,
                &self.geometry,
                self.params.window,
                self.params.zero_pad,
            ) {
                Ok(a) => a,
                Err(Error::NoAngle) => continue,
                Err(e) => return Err(e),
            };
            let v_r = (det.doppler_bin as f64 + det.doppler_offset.to_f64().unwrap_or(0.0))
                * map.velocity_bin_mps;
            let power_db = 10.0 * det.power.to_f64().unwrap_or(0.0).max(1e-300).log10();
            cloud.points.push(RadarPoint::from_polar(
                range,
                angle.azimuth_deg,
                v_r,
                power_db,
                cube.sensor_id,
            ));
            detections.push(det);
        }

        Ok(FrameOutput {
            cloud,
            detections,
            cfar_hits,
        })
    }
}

fn log_power<T: Real>(p: T) -> T {
    p.max(T::min_positive_value()).ln()
}

fn range_offset<T: Real>(power: &PowerMap<T>, d: usize, r: usize) -> T {
    if r == 0 || r + 1 >= power.n_range {
        return T::zero();
    }
    interpolate_peak(
        log_power(power.get(d, r - 1)),
        log_power(power.get(d, r)),
        log_power(power.get(d, r + 1)),
    )
}

fn doppler_offset<T: Real>(power: &PowerMap<T>, d: usize, r: usize) -> T {
    let n = power.n_doppler;
    interpolate_peak(
        log_power(power.get((d + n - 1) % n, r)),
        log_power(power.get(d, r)),
        log_power(power.get((d + 1) % n, r)),
    )
}

/// Runs the full chain on one cube with the default array geometry for its
/// configuration.
pub fn process_frame<T: Real>(cube: &DataCube, params: &ProcessingParams) -> Result<PointCloud> {
    let geometry = ArrayGeometry::for_config(&cube.config);
    FrameProcessor::<T>::new(&cube.config, &geometry, params)?
        .process(cube)
        .map(|out| out.cloud)
}
