//! Fast-time (range) and slow-time (Doppler) Fourier stages.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::window::Window;
use crate::config::{WaveformConfig, SPEED_OF_LIGHT};
use crate::cube::DataCube;
use crate::error::{Error, Result};
use crate::Real;

/// Complex range-Doppler spectrum indexed `[doppler_bin][rx][range_bin]`.
///
/// Doppler bins are in FFT order: bin `d` stands for the signed bin
/// [`signed_bin`]`(d, n_doppler)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeDopplerMap<T> {
    pub n_doppler: usize,
    pub n_rx: usize,
    pub n_range: usize,
    /// Metres per range bin.
    pub range_bin_m: f64,
    /// m/s per Doppler bin.
    pub velocity_bin_mps: f64,
    data: Vec<Complex<T>>,
}

impl<T: Real> RangeDopplerMap<T> {
    #[inline]
    pub fn get(&self, doppler: usize, rx: usize, range: usize) -> Complex<T> {
        self.data[(doppler * self.n_rx + rx) * self.n_range + range]
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Noncoherent integration over the receive channels: Σ_rx |X|².
    pub fn integrate(&self) -> PowerMap<T> {
        let mut power = vec![T::zero(); self.n_doppler * self.n_range];
        for d in 0..self.n_doppler {
            let row = &mut power[d * self.n_range..(d + 1) * self.n_range];
            for rx in 0..self.n_rx {
                let start = (d * self.n_rx + rx) * self.n_range;
                for (p, x) in row.iter_mut().zip(&self.data[start..start + self.n_range]) {
                    *p = *p + x.norm_sqr();
                }
            }
        }
        PowerMap {
            n_doppler: self.n_doppler,
            n_range: self.n_range,
            data: power,
        }
    }
}

/// Real-valued map indexed `[doppler_bin][range_bin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMap<T> {
    pub n_doppler: usize,
    pub n_range: usize,
    data: Vec<T>,
}

impl<T: Real> PowerMap<T> {
    pub fn new(n_doppler: usize, n_range: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n_doppler * n_range {
            return Err(Error::Dimension(format!(
                "{} values for a {n_doppler}×{n_range} map",
                data.len()
            )));
        }
        Ok(PowerMap {
            n_doppler,
            n_range,
            data,
        })
    }

    #[inline]
    pub fn get(&self, doppler: usize, range: usize) -> T {
        self.data[doppler * self.n_range + range]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Cell of maximum value, `(doppler, range)`.
    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = self
            .data
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
        (i / self.n_range, i % self.n_range)
    }
}

/// Maps an FFT-order bin into `[-n/2, n/2)`.
#[inline]
pub fn signed_bin(bin: usize, n: usize) -> isize {
    if bin < n.div_ceil(2) {
        bin as isize
    } else {
        bin as isize - n as isize
    }
}

/// Windowed, full-length DFT of `x` scaled by `1 / Σw`, so a unit-amplitude
/// tone on a bin centre peaks at magnitude 1.
pub fn spectrum<T: Real>(x: &[Complex<T>], window: Window) -> Vec<Complex<T>> {
    let w: Vec<T> = window.coefficients(x.len());
    let scale = T::one() / w.iter().copied().sum::<T>();
    let mut buf: Vec<Complex<T>> = x.iter().zip(&w).map(|(v, &w)| v * w).collect();
    FftPlanner::new()
        .plan_fft_forward(x.len())
        .process(&mut buf);
    buf.iter_mut().for_each(|v| *v = *v * scale);
    buf
}

/// Planned range and Doppler FFTs for one cube shape.
pub struct RangeDopplerProcessor<T: Real> {
    n_samples: usize,
    n_chirps: usize,
    n_rx: usize,
    fast_window: Vec<T>,
    slow_window: Vec<T>,
    fast_scale: T,
    slow_scale: T,
    fast_fft: Arc<dyn Fft<T>>,
    slow_fft: Arc<dyn Fft<T>>,
    range_bin_m: f64,
    velocity_bin_mps: f64,
}

impl<T: Real> RangeDopplerProcessor<T> {
    pub fn new(config: &WaveformConfig, window: Window) -> Self {
        let mut planner = FftPlanner::new();
        let fast_window: Vec<T> = window.coefficients(config.n_samples);
        let slow_window: Vec<T> = window.coefficients(config.n_chirps);
        let fast_scale = T::one() / fast_window.iter().copied().sum::<T>();
        let slow_scale = T::one() / slow_window.iter().copied().sum::<T>();
        RangeDopplerProcessor {
            n_samples: config.n_samples,
            n_chirps: config.n_chirps,
            n_rx: config.n_rx,
            fast_window,
            slow_window,
            fast_scale,
            slow_scale,
            fast_fft: planner.plan_fft_forward(config.n_samples),
            slow_fft: planner.plan_fft_forward(config.n_chirps),
            range_bin_m: SPEED_OF_LIGHT / (2.0 * config.bandwidth),
            velocity_bin_mps: config.wavelength()
                / (2.0 * config.n_chirps as f64 * config.chirp_duration),
        }
    }

    pub fn process(&self, cube: &DataCube) -> Result<RangeDopplerMap<T>> {
        let (n_chirps, n_rx, n_samples) = cube.dims();
        if (n_chirps, n_rx, n_samples) != (self.n_chirps, self.n_rx, self.n_samples) {
            return Err(Error::Dimension(format!(
                "cube is {n_chirps}×{n_rx}×{n_samples}, processor expects {}×{}×{}",
                self.n_chirps, self.n_rx, self.n_samples
            )));
        }
        let n_range = n_samples / 2;
        let zero = Complex::new(T::zero(), T::zero());
        let mut data = vec![zero; n_chirps * n_rx * n_range];

        // fast time: rows [chirp][rx] -> positive-frequency half
        let mut buf = vec![zero; n_samples];
        let mut scratch = vec![zero; self.fast_fft.get_inplace_scratch_len()];
        for k in 0..n_chirps {
            for j in 0..n_rx {
                for ((b, s), &w) in buf.iter_mut().zip(cube.chirp(k, j)).zip(&self.fast_window) {
                    *b = Complex::new(
                        T::from_f32(s.re).unwrap_or_else(T::zero),
                        T::from_f32(s.im).unwrap_or_else(T::zero),
                    ) * w;
                }
                self.fast_fft.process_with_scratch(&mut buf, &mut scratch);
                let start = (k * n_rx + j) * n_range;
                for (o, b) in data[start..start + n_range].iter_mut().zip(&buf) {
                    *o = *b * self.fast_scale;
                }
            }
        }

        // slow time: columns over chirps for each (rx, range bin), in place
        let mut col = vec![zero; n_chirps];
        let mut scratch = vec![zero; self.slow_fft.get_inplace_scratch_len()];
        let stride = n_rx * n_range;
        for j in 0..n_rx {
            for r in 0..n_range {
                let base = j * n_range + r;
                for (k, c) in col.iter_mut().enumerate() {
                    *c = data[k * stride + base] * self.slow_window[k];
                }
                self.slow_fft.process_with_scratch(&mut col, &mut scratch);
                for (d, c) in col.iter().enumerate() {
                    data[d * stride + base] = *c * self.slow_scale;
                }
            }
        }

        Ok(RangeDopplerMap {
            n_doppler: n_chirps,
            n_rx,
            n_range,
            range_bin_m: self.range_bin_m,
            velocity_bin_mps: self.velocity_bin_mps,
            data,
        })
    }
}

/// One-shot range-Doppler transform of a cube.
pub fn range_doppler<T: Real>(cube: &DataCube, window: Window) -> Result<RangeDopplerMap<T>> {
    RangeDopplerProcessor::new(&cube.config, window).process(cube)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{derive_resolutions, ArrayGeometry};
    use num_complex::{Complex32, Complex64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_config() -> WaveformConfig {
        WaveformConfig {
            n_samples: 16,
            n_chirps: 15,
            n_tx: 3,
            n_rx: 2,
            sample_rate: 1e6,
            ..WaveformConfig::medium_range()
        }
    }

    fn random_cube(config: &WaveformConfig, seed: u64) -> DataCube {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..config.cube_len())
            .map(|_| Complex32::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        DataCube::from_samples(config.clone(), 1, 0, samples).unwrap()
    }

    /// Direct O(N²) DFT with the same window and 1/Σw scaling.
    fn naive_dft(x: &[Complex64], w: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        let sw: f64 = w.iter().sum();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|t| {
                        let ph = -std::f64::consts::TAU * ((k * t) % n) as f64 / n as f64;
                        x[t] * w[t] * Complex64::from_polar(1.0, ph)
                    })
                    .sum::<Complex64>()
                    / sw
            })
            .collect()
    }

    #[test]
    fn zero_cube_gives_zero_map() {
        let cfg = WaveformConfig::medium_range();
        let cube = DataCube::zeros(cfg, 0, 0);
        let map = range_doppler::<f64>(&cube, Window::Hann).unwrap();
        assert!(map.data().iter().all(|c| c.norm() == 0.0));
        assert_eq!((map.n_doppler, map.n_rx, map.n_range), (192, 4, 128));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn matches_naive_dft() {
        let cfg = small_config();
        let cube = random_cube(&cfg, 3);
        for window in [Window::Hann, Window::Rectangular] {
            let map = range_doppler::<f64>(&cube, window).unwrap();
            let wf: Vec<f64> = window.coefficients(cfg.n_samples);
            let ws: Vec<f64> = window.coefficients(cfg.n_chirps);
            // fast time then slow time, each by direct summation
            let mut stage1 = vec![vec![vec![Complex64::new(0.0, 0.0); 8]; cfg.n_rx]; cfg.n_chirps];
            for k in 0..cfg.n_chirps {
                for j in 0..cfg.n_rx {
                    let x: Vec<Complex64> = cube
                        .chirp(k, j)
                        .iter()
                        .map(|s| Complex64::new(s.re as f64, s.im as f64))
                        .collect();
                    stage1[k][j].copy_from_slice(&naive_dft(&x, &wf)[..8]);
                }
            }
            let mut worst: f64 = 0.0;
            for j in 0..cfg.n_rx {
                for r in 0..8 {
                    let col: Vec<Complex64> = (0..cfg.n_chirps).map(|k| stage1[k][j][r]).collect();
                    let expect = naive_dft(&col, &ws);
                    for (d, e) in expect.iter().enumerate() {
                        let got = map.get(d, j, r);
                        worst = worst.max((got - e).norm() / e.norm().max(1e-300));
                    }
                }
            }
            assert!(worst <= 1e-9, "{window:?}: relative error {worst}");
        }
    }

    #[test]
    fn parseval_per_stage() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [16usize, 192, 256] {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let w: Vec<f64> = Window::Hann.coefficients(n);
            let sw: f64 = w.iter().sum();
            let time: f64 = x.iter().zip(&w).map(|(v, w)| (v * w).norm_sqr()).sum();
            let spec = spectrum(&x, Window::Hann);
            let freq: f64 = spec.iter().map(|v| v.norm_sqr()).sum::<f64>() * sw * sw / n as f64;
            assert!((freq / time - 1.0).abs() < 1e-6, "n={n}");
        }
    }

    #[test]
    fn full_scale_tone_is_zero_dbfs() {
        let n = 64;
        let x: Vec<Complex64> = (0..n)
            .map(|t| Complex64::from_polar(1.0, std::f64::consts::TAU * 5.0 * t as f64 / n as f64))
            .collect();
        let s = spectrum(&x, Window::Hann);
        assert!((s[5].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn static_target_peaks_at_expected_cell() {
        use crate::fusion::SensorPose;
        use crate::scene::{Scatterer, Scene};
        use crate::sim::{synthesize_cube, SynthesisOptions};
        let cfg = WaveformConfig {
            n_tx: 1,
            n_chirps: 64,
            ..WaveformConfig::medium_range()
        };
        let geometry = ArrayGeometry::for_config(&cfg);
        let res = derive_resolutions(&cfg, &geometry).unwrap();
        let r = 50.0;
        let scene = Scene {
            scatterers: vec![Scatterer::fixed([r, 0.0, 0.0], 1.0)],
            ..Default::default()
        };
        let cube = synthesize_cube(
            &scene,
            &SensorPose::identity(),
            &cfg,
            &geometry,
            &SynthesisOptions::default(),
        )
        .unwrap();
        let map = range_doppler::<f64>(&cube, Window::Hann).unwrap();
        let (d, rb) = map.integrate().argmax();
        assert_eq!(d, 0);
        assert_eq!(rb, (r / res.range_resolution).round() as usize);
        assert!((map.range_bin_m - res.range_resolution).abs() < 1e-12);
        assert!((map.velocity_bin_mps - res.velocity_resolution).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let proc = RangeDopplerProcessor::<f64>::new(&WaveformConfig::default(), Window::Hann);
        let cube = DataCube::zeros(small_config(), 0, 0);
        assert!(matches!(proc.process(&cube), Err(Error::Dimension(_))));
    }

    #[test]
    fn signed_bins() {
        assert_eq!(signed_bin(0, 8), 0);
        assert_eq!(signed_bin(3, 8), 3);
        assert_eq!(signed_bin(4, 8), -4);
        assert_eq!(signed_bin(7, 8), -1);
        assert_eq!(signed_bin(2, 5), 2);
        assert_eq!(signed_bin(3, 5), -2);
    }
}
