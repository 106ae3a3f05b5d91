//! Azimuth from a virtual-array snapshot by zero-padded FFT beamforming.

use num_complex::Complex;
use rustfft::FftPlanner;

use super::peak::interpolate_peak;
use super::window::Window;
use crate::config::ArrayGeometry;
use crate::error::{Error, Result};
use crate::{real, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleEstimate {
    pub azimuth_deg: f64,
    /// Spatial frequency in cycles per element.
    pub spatial_frequency: f64,
    /// Coherence of the snapshot with a plane wave from the estimated
    /// direction, in `[0, 1]`.
    pub confidence: f64,
}

/// Windowed, zero-padded DFT across the array elements.
pub fn angle_spectrum<T: Real>(
    snapshot: &[Complex<T>],
    window: Window,
    zero_pad: usize,
) -> Vec<Complex<T>> {
    let n = zero_pad.max(snapshot.len());
    let w: Vec<T> = window.coefficients(snapshot.len());
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
    for ((b, s), &w) in buf.iter_mut().zip(snapshot).zip(&w) {
        *b = s * w;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf
}

/// Estimates the azimuth of the dominant plane wave in `snapshot`.
///
/// The geometry must be a uniform linear virtual array (in snapshot order)
/// with pitch `s` wavelengths; the azimuth is `asin(f / s)` for spatial
/// frequency `f`, clamped to the visible region.
pub fn estimate_angle<T: Real>(
    snapshot: &[Complex<T>],
    geometry: &ArrayGeometry,
    window: Window,
    zero_pad: usize,
) -> Result<AngleEstimate> {
    let n_virtual = geometry.tx_positions.len() * geometry.rx_positions.len();
    if snapshot.len() != n_virtual {
        return Err(Error::Dimension(format!(
            "snapshot has {} elements, geometry {n_virtual}",
            snapshot.len()
        )));
    }
    let pitch = geometry
        .uniform_spacing()
        .ok_or_else(|| Error::Config("angle FFT needs a uniform linear virtual array".into()))?;
    if snapshot.iter().all(|c| c.norm_sqr() == T::zero()) {
        return Err(Error::NoAngle);
    }

    let spec = angle_spectrum(snapshot, window, zero_pad);
    let n = spec.len();
    let mag: Vec<T> = spec.iter().map(|c| c.norm()).collect();
    let peak = (0..n)
        .max_by(|&a, &b| {
            mag[a]
                .partial_cmp(&mag[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let tiny: T = T::min_positive_value();
    let ln = |i: usize| mag[i].max(tiny).ln();
    let delta = interpolate_peak(ln((peak + n - 1) % n), ln(peak), ln((peak + 1) % n));

    let mut f = (peak as f64 + delta.to_f64().unwrap_or(0.0)) / n as f64;
    if f >= 0.5 {
        f -= 1.0;
    }
    let sin_az = (f / pitch).clamp(-1.0, 1.0);

    // coherence at the refined frequency
    let w: Vec<T> = window.coefficients(snapshot.len());
    let mut steered = Complex::new(T::zero(), T::zero());
    let mut total = T::zero();
    for (e, (s, &w)) in snapshot.iter().zip(&w).enumerate() {
        let ph: T = real(-std::f64::consts::TAU * f * e as f64);
        steered = steered + s * w * Complex::from_polar(T::one(), ph);
        total = total + s.norm() * w;
    }
    let confidence = if total > T::zero() {
        (steered.norm() / total)
            .to_f64()
            .unwrap_or(0.0)
            .clamp(0.0, 1.0)
    } else {
        0.0
    };

    Ok(AngleEstimate {
        azimuth_deg: sin_az.asin().to_degrees(),
        spatial_frequency: f,
        confidence,
    })
}
