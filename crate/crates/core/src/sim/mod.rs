//! Synthetic sensor data: raw radar cubes and reference lidar clouds.

pub mod lidar;
pub mod radar;

pub use lidar::{simulate_lidar, LidarSpec, LIDAR_SENSOR_ID};
pub use radar::{synthesize_cube, OutOfBounds, SynthesisOptions};

/// Mixes a base seed with a sensor and frame index into an independent stream
/// seed (splitmix64 finalizer).
pub fn derive_seed(base: u64, sensor: u16, frame: u64) -> u64 {
    let mut z = base
        ^ (u64::from(sensor)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ frame.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
