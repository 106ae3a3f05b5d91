//! Simulation and processing toolkit for networks of automotive FMCW MIMO radars.
//!
//! The crate covers the whole offline chain:
//!
//! * [`config`]: waveform and array parameters, validation and derived resolutions.
//! * [`scene`] and [`sim`]: ground-truth scenes, raw radar data cubes with DDMA
//!   transmit coding, and reference lidar-style point clouds.
//! * [`dsp`]: range FFT, Doppler FFT, CA-CFAR, DDMA demultiplexing and angle
//!   estimation, ending in a [`PointCloud`].
//! * [`fusion`]: extrinsic transforms into the vessel frame and time gating.
//! * [`metrics`]: occupancy grids, mean cell count, Jaccard similarity and
//!   box-plot statistics.
//! * [`io`]: the binary cube container, point-cloud CSV and the text formats.
//!
//! The signal-processing kernels are generic over the scalar type (`f32` or
//! `f64`) through the [`Real`] trait. Concrete aliases for the common choices
//! live at the crate root.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cloud;
pub mod config;
pub mod cube;
pub mod dsp;
pub mod error;
pub mod fusion;
pub mod io;
pub mod metrics;
pub mod network;
pub mod scene;
pub mod sim;

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

pub use cloud::{PointCloud, RadarPoint};
pub use config::{ArrayGeometry, ResolutionReport, WaveformConfig, SPEED_OF_LIGHT};
pub use cube::DataCube;
pub use error::{Error, Result};
pub use fusion::{NetworkCloud, SensorPose};
pub use metrics::{GridSpec, OccupancyGrid};
pub use network::Network;
pub use scene::{ExtendedTarget, Scatterer, Scene};

/// Floating-point scalar the DSP kernels can run on.
pub trait Real: Float + FloatConst + FftNum + Default + std::iter::Sum {}

impl<T> Real for T where T: Float + FloatConst + FftNum + Default + std::iter::Sum {}

/// Converts an `f64` constant into the working scalar.
#[inline]
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

pub type RangeDopplerMap64 = dsp::RangeDopplerMap<f64>;
pub type RangeDopplerMap32 = dsp::RangeDopplerMap<f32>;
pub type PowerMap64 = dsp::PowerMap<f64>;
pub type FrameProcessor64 = dsp::FrameProcessor<f64>;
pub type FrameProcessor32 = dsp::FrameProcessor<f32>;
pub type Detection64 = dsp::Detection<f64>;
