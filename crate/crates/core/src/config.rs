//! Waveform and antenna-array parameters of a single radar sensor.
//!
//! The ADC window (`n_samples / sample_rate`) is taken to span the full swept
//! bandwidth, so one fast-time FFT bin corresponds to exactly `c / (2B)` metres.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Chirp, frame and antenna parameters of one FMCW sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformConfig {
    /// Start frequency of the chirp, Hz.
    pub carrier_frequency: f64,
    /// Bandwidth swept during the sampled part of a chirp, Hz.
    pub bandwidth: f64,
    /// Chirp repetition interval, s.
    pub chirp_duration: f64,
    /// Fast-time samples per chirp.
    pub n_samples: usize,
    /// ADC sample rate, Hz.
    pub sample_rate: f64,
    /// Chirps per frame (slow time).
    pub n_chirps: usize,
    pub n_tx: usize,
    pub n_rx: usize,
    /// Frame update rate, Hz.
    pub frame_rate: f64,
}

impl Default for WaveformConfig {
    /// Best-case operating point: 0.08 m range resolution, about 0.1 m/s velocity
    /// resolution, 3 TX × 4 RX, 20 Hz update rate.
    fn default() -> Self {
        WaveformConfig {
            carrier_frequency: 76.5e9,
            bandwidth: 1.8735e9,
            chirp_duration: 102e-6,
            n_samples: 256,
            sample_rate: 10e6,
            n_chirps: 192,
            n_tx: 3,
            n_rx: 4,
            frame_rate: 20.0,
        }
    }
}

impl WaveformConfig {
    /// Medium-range operating point: 0.5 m range bins out to about 64 m and
    /// ±6.5 m/s unambiguous velocity per transmitter. Used for the harbour and
    /// channel scenes where the best-case waveform would not reach the banks.
    pub fn medium_range() -> Self {
        WaveformConfig {
            bandwidth: 300e6,
            chirp_duration: 50e-6,
            ..WaveformConfig::default()
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Duration of the sampled sweep, s.
    pub fn sweep_duration(&self) -> f64 {
        self.n_samples as f64 / self.sample_rate
    }

    /// Range bins kept after the fast-time FFT (positive-frequency half).
    pub fn n_range_bins(&self) -> usize {
        self.n_samples / 2
    }

    pub fn n_virtual(&self) -> usize {
        self.n_tx * self.n_rx
    }

    /// Number of complex samples in one frame.
    pub fn cube_len(&self) -> usize {
        self.n_chirps * self.n_rx * self.n_samples
    }
}

/// Lateral antenna offsets in units of wavelength. Virtual element `i * n_rx + j`
/// sits at `tx_positions[i] + rx_positions[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub tx_positions: Vec<f64>,
    pub rx_positions: Vec<f64>,
}

impl ArrayGeometry {
    /// Uniform linear virtual array with half-wavelength spacing: RX elements at
    /// λ/2 pitch, TX elements spaced by the RX aperture.
    pub fn uniform(n_tx: usize, n_rx: usize) -> Self {
        ArrayGeometry {
            tx_positions: (0..n_tx).map(|i| 0.5 * (i * n_rx) as f64).collect(),
            rx_positions: (0..n_rx).map(|j| 0.5 * j as f64).collect(),
        }
    }

    pub fn for_config(config: &WaveformConfig) -> Self {
        ArrayGeometry::uniform(config.n_tx, config.n_rx)
    }

    pub fn virtual_positions(&self) -> Vec<f64> {
        self.tx_positions
            .iter()
            .flat_map(|t| self.rx_positions.iter().map(move |r| t + r))
            .collect()
    }

    /// Element pitch if the virtual positions form a uniform linear array in
    /// snapshot order, `None` otherwise.
    pub fn uniform_spacing(&self) -> Option<f64> {
        let pos = self.virtual_positions();
        if pos.len() < 2 {
            return None;
        }
        let pitch = pos[1] - pos[0];
        if pitch <= 0.0 {
            return None;
        }
        let uniform = pos
            .windows(2)
            .all(|w| ((w[1] - w[0]) - pitch).abs() <= 1e-9 * pitch.max(1.0));
        uniform.then_some(pitch)
    }
}

/// Machine-readable code of a violated configuration invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationCode {
    NonFinite,
    NonPositiveCarrier,
    NonPositiveBandwidth,
    NonPositiveChirpDuration,
    NonPositiveSampleRate,
    NonPositiveFrameRate,
    TooFewSamples,
    NoTx,
    NoRx,
    TooFewChirps,
    DdmaDivisibility,
    SamplingExceedsChirp,
    FrameOverrun,
    GeometryMismatch,
    DuplicateVirtualElement,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::NonFinite => "non_finite",
            ViolationCode::NonPositiveCarrier => "non_positive_carrier",
            ViolationCode::NonPositiveBandwidth => "non_positive_bandwidth",
            ViolationCode::NonPositiveChirpDuration => "non_positive_chirp_duration",
            ViolationCode::NonPositiveSampleRate => "non_positive_sample_rate",
            ViolationCode::NonPositiveFrameRate => "non_positive_frame_rate",
            ViolationCode::TooFewSamples => "too_few_samples",
            ViolationCode::NoTx => "no_tx",
            ViolationCode::NoRx => "no_rx",
            ViolationCode::TooFewChirps => "too_few_chirps",
            ViolationCode::DdmaDivisibility => "ddma_divisibility",
            ViolationCode::SamplingExceedsChirp => "sampling_exceeds_chirp",
            ViolationCode::FrameOverrun => "frame_overrun",
            ViolationCode::GeometryMismatch => "geometry_mismatch",
            ViolationCode::DuplicateVirtualElement => "duplicate_virtual_element",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, message: impl Into<String>) -> Self {
        Violation {
            code,
            message: message.into(),
        }
    }
}

/// Checks every invariant and returns all violations found. An empty list means
/// the configuration is usable.
pub fn validate(config: &WaveformConfig, geometry: &ArrayGeometry) -> Vec<Violation> {
    use ViolationCode::*;
    let mut out = Vec::new();

    let floats = [
        config.carrier_frequency,
        config.bandwidth,
        config.chirp_duration,
        config.sample_rate,
        config.frame_rate,
    ];
    if floats.iter().any(|v| !v.is_finite())
        || geometry
            .tx_positions
            .iter()
            .chain(&geometry.rx_positions)
            .any(|v| !v.is_finite())
    {
        out.push(Violation::new(NonFinite, "parameters must be finite"));
    }
    if !(config.carrier_frequency > 0.0) {
        out.push(Violation::new(
            NonPositiveCarrier,
            "carrier_frequency must be > 0",
        ));
    }
    if !(config.bandwidth > 0.0) {
        out.push(Violation::new(
            NonPositiveBandwidth,
            "bandwidth must be > 0",
        ));
    }
    if !(config.chirp_duration > 0.0) {
        out.push(Violation::new(
            NonPositiveChirpDuration,
            "chirp_duration must be > 0",
        ));
    }
    if !(config.sample_rate > 0.0) {
        out.push(Violation::new(
            NonPositiveSampleRate,
            "sample_rate must be > 0",
        ));
    }
    if !(config.frame_rate > 0.0) {
        out.push(Violation::new(
            NonPositiveFrameRate,
            "frame_rate must be > 0",
        ));
    }
    if config.n_samples < 8 {
        out.push(Violation::new(
            TooFewSamples,
            format!("n_samples = {} < 8", config.n_samples),
        ));
    }
    if config.n_tx == 0 {
        out.push(Violation::new(NoTx, "n_tx must be >= 1"));
    }
    if config.n_rx == 0 {
        out.push(Violation::new(NoRx, "n_rx must be >= 1"));
    }
    if config.n_chirps < config.n_tx {
        out.push(Violation::new(
            TooFewChirps,
            format!("n_chirps = {} < n_tx = {}", config.n_chirps, config.n_tx),
        ));
    }
    if config.n_tx > 0 && !config.n_chirps.is_multiple_of(config.n_tx) {
        out.push(Violation::new(
            DdmaDivisibility,
            format!(
                "n_chirps = {} is not a multiple of n_tx = {}",
                config.n_chirps, config.n_tx
            ),
        ));
    }
    if config.sample_rate > 0.0 && config.sweep_duration() > config.chirp_duration {
        out.push(Violation::new(
            SamplingExceedsChirp,
            format!(
                "sampling window {:.4e} s exceeds chirp duration {:.4e} s",
                config.sweep_duration(),
                config.chirp_duration
            ),
        ));
    }
    if config.frame_rate > 0.0
        && config.n_chirps as f64 * config.chirp_duration > 1.0 / config.frame_rate
    {
        out.push(Violation::new(
            FrameOverrun,
            format!(
                "{} chirps of {:.4e} s do not fit in a {:.4e} s frame",
                config.n_chirps,
                config.chirp_duration,
                1.0 / config.frame_rate
            ),
        ));
    }
    if geometry.tx_positions.len() != config.n_tx || geometry.rx_positions.len() != config.n_rx {
        out.push(Violation::new(
            GeometryMismatch,
            format!(
                "geometry has {}×{} elements, config expects {}×{}",
                geometry.tx_positions.len(),
                geometry.rx_positions.len(),
                config.n_tx,
                config.n_rx
            ),
        ));
    }
    let mut virt = geometry.virtual_positions();
    virt.sort_by(|a, b| a.total_cmp(b));
    if virt.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-9) {
        out.push(Violation::new(
            DuplicateVirtualElement,
            "virtual element positions must be distinct",
        ));
    }
    out
}

/// Resolution and ambiguity figures of a validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionReport {
    /// c / (2B), m. Equal to the range-bin spacing.
    pub range_resolution: f64,
    /// Largest range represented in the kept range bins, m.
    pub max_range: f64,
    /// λ / (2 · n_chirps · T_c), m/s. Equal to the Doppler-bin spacing.
    pub velocity_resolution: f64,
    /// λ / (4 · T_c): unambiguous radial speed without transmit multiplexing, m/s.
    pub max_unambiguous_velocity: f64,
    /// λ / (4 · T_c · n_tx): unambiguous radial speed inside one DDMA sub-band, m/s.
    pub max_unambiguous_velocity_per_tx: f64,
    /// Approximate receive beamwidth 2 / N_virtual rad, in degrees.
    pub azimuth_beamwidth: f64,
    /// n_chirps · T_c, s.
    pub frame_acquisition_time: f64,
    pub n_range_bins: usize,
    pub n_virtual: usize,
}

pub fn derive_resolutions(
    config: &WaveformConfig,
    geometry: &ArrayGeometry,
) -> Result<ResolutionReport> {
    let violations = validate(config, geometry);
    if !violations.is_empty() {
        return Err(Error::InvalidConfig(violations));
    }
    let c = SPEED_OF_LIGHT;
    let lambda = config.wavelength();
    let range_resolution = c / (2.0 * config.bandwidth);
    // Complex sampling passes beat frequencies up to f_s; only the positive
    // half of the spectrum is kept, which is the binding limit.
    let band_limit = config.sample_rate * c * config.sweep_duration() / (2.0 * config.bandwidth);
    let max_range = band_limit.min(config.n_range_bins() as f64 * range_resolution);
    let n_virtual = config.n_virtual();
    Ok(ResolutionReport {
        range_resolution,
        max_range,
        velocity_resolution: lambda / (2.0 * config.n_chirps as f64 * config.chirp_duration),
        max_unambiguous_velocity: lambda / (4.0 * config.chirp_duration),
        max_unambiguous_velocity_per_tx: lambda
            / (4.0 * config.chirp_duration * config.n_tx as f64),
        azimuth_beamwidth: (2.0 / n_virtual as f64).to_degrees(),
        frame_acquisition_time: config.n_chirps as f64 * config.chirp_duration,
        n_range_bins: config.n_range_bins(),
        n_virtual,
    })
}
