#![allow(dead_code)]

use fmcwnet::sim::{synthesize_cube, SynthesisOptions};
use fmcwnet::{ArrayGeometry, DataCube, Scatterer, Scene, SensorPose, WaveformConfig};

/// Point target at `range`, `azimuth_deg`, moving along the line of sight.
pub fn target(range: f64, azimuth_deg: f64, v_r: f64) -> Scatterer {
    let (s, c) = azimuth_deg.to_radians().sin_cos();
    Scatterer {
        position: [range * c, range * s, 0.0],
        velocity: [v_r * c, v_r * s, 0.0],
        reflectivity: 1.0,
    }
}

pub fn scene_of(scatterers: Vec<Scatterer>) -> Scene {
    Scene {
        scatterers,
        ..Scene::default()
    }
}

/// Noise level giving `snr_db` per sample for a unit-reflectivity target at `range`.
pub fn sigma_for_snr(range: f64, snr_db: f64) -> f64 {
    (1.0 / (range * range)) / 10f64.powf(snr_db / 20.0)
}

pub fn cube(scene: &Scene, cfg: &WaveformConfig, sigma: f64, seed: u64) -> DataCube {
    let opts = SynthesisOptions {
        noise_sigma: sigma,
        seed,
        sensor_id: 1,
        ..SynthesisOptions::default()
    };
    synthesize_cube(
        scene,
        &SensorPose::identity(),
        cfg,
        &ArrayGeometry::for_config(cfg),
        &opts,
    )
    .unwrap()
}

pub fn wrap_deg(a: f64) -> f64 {
    (a + 180.0).rem_euclid(360.0) - 180.0
}
