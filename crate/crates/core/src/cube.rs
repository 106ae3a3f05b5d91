use num_complex::Complex32;

use crate::config::WaveformConfig;
use crate::error::{Error, Result};

/// Complex baseband samples of one frame, indexed `[chirp][rx][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataCube {
    pub config: WaveformConfig,
    pub sensor_id: u16,
    pub timestamp_ns: u64,
    samples: Vec<Complex32>,
}

impl DataCube {
    pub fn zeros(config: WaveformConfig, sensor_id: u16, timestamp_ns: u64) -> Self {
        let len = config.cube_len();
        DataCube {
            config,
            sensor_id,
            timestamp_ns,
            samples: vec![Complex32::new(0.0, 0.0); len],
        }
    }

    pub fn from_samples(
        config: WaveformConfig,
        sensor_id: u16,
        timestamp_ns: u64,
        samples: Vec<Complex32>,
    ) -> Result<Self> {
        if samples.len() != config.cube_len() {
            return Err(Error::Dimension(format!(
                "{} samples for a {}×{}×{} cube",
                samples.len(),
                config.n_chirps,
                config.n_rx,
                config.n_samples
            )));
        }
        Ok(DataCube {
            config,
            sensor_id,
            timestamp_ns,
            samples,
        })
    }

    /// `(n_chirps, n_rx, n_samples)`
    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.config.n_chirps,
            self.config.n_rx,
            self.config.n_samples,
        )
    }

    pub fn timestamp_s(&self) -> f64 {
        self.timestamp_ns as f64 * 1e-9
    }

    #[inline]
    fn offset(&self, chirp: usize, rx: usize) -> usize {
        (chirp * self.config.n_rx + rx) * self.config.n_samples
    }

    /// Fast-time samples of one chirp on one receiver.
    pub fn chirp(&self, chirp: usize, rx: usize) -> &[Complex32] {
        let start = self.offset(chirp, rx);
        &self.samples[start..start + self.config.n_samples]
    }

    pub fn chirp_mut(&mut self, chirp: usize, rx: usize) -> &mut [Complex32] {
        let start = self.offset(chirp, rx);
        let n = self.config.n_samples;
        &mut self.samples[start..start + n]
    }

    pub fn get(&self, chirp: usize, rx: usize, sample: usize) -> Complex32 {
        self.samples[self.offset(chirp, rx) + sample]
    }

    pub fn samples(&self) -> &[Complex32] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex32] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex32> {
        self.samples
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr() as f64).sum()
    }
}
