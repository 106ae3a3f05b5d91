//! A vessel's sensor network: several radars sharing one waveform plus an
//! optional reference lidar, simulated and processed frame by frame.

use crate::cloud::PointCloud;
use crate::config::{ArrayGeometry, WaveformConfig};
use crate::cube::DataCube;
use crate::dsp::{FrameProcessor, ProcessingParams};
use crate::error::{Error, Result};
use crate::fusion::{fuse, NetworkCloud, SensorPose};
use crate::scene::Scene;
use crate::sim::{
    derive_seed, simulate_lidar, synthesize_cube, LidarSpec, OutOfBounds, SynthesisOptions,
    LIDAR_SENSOR_ID,
};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarNode {
    pub id: u16,
    pub pose: SensorPose,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LidarNode {
    pub pose: SensorPose,
    pub spec: LidarSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub config: WaveformConfig,
    pub geometry: ArrayGeometry,
    /// Receiver noise per complex sample.
    pub noise_sigma: f64,
    pub radars: Vec<RadarNode>,
    pub lidar: Option<LidarNode>,
}

impl Network {
    pub fn pose(&self, id: u16) -> Option<SensorPose> {
        self.radars.iter().find(|r| r.id == id).map(|r| r.pose)
    }

    /// Four medium-range radars (two at the bow, one on each side) and a
    /// mast-mounted lidar.
    pub fn four_corner() -> Network {
        let config = WaveformConfig::medium_range();
        let node = |id, x, y, yaw| RadarNode {
            id,
            pose: SensorPose::new([x, y, 1.5], yaw),
        };
        Network {
            geometry: ArrayGeometry::for_config(&config),
            config,
            noise_sigma: 1e-5,
            radars: vec![
                node(1, 5.0, 1.2, 30.0),
                node(2, 5.0, -1.2, -30.0),
                node(3, 0.0, 2.0, 90.0),
                node(4, 0.0, -2.0, -90.0),
            ],
            lidar: Some(LidarNode {
                pose: SensorPose::new([0.0, 0.0, 3.0], 0.0),
                spec: LidarSpec::default(),
            }),
        }
    }

    pub fn frame_time(&self, frame: u64) -> f64 {
        frame as f64 / self.config.frame_rate
    }
}

/// Raw data of one network frame.
#[derive(Debug, Clone)]
pub struct FrameCapture {
    pub frame: u64,
    pub time_s: f64,
    /// One cube per radar, in network order.
    pub cubes: Vec<DataCube>,
    /// Vessel-frame lidar cloud, if the network has a lidar.
    pub lidar: Option<PointCloud>,
}

/// Simulates frame `frame` of `scene` (the scene is advanced to the frame time).
/// Scatterers beyond a radar's unambiguous range are left out of its cube.
pub fn simulate_frame(
    scene: &Scene,
    network: &Network,
    frame: u64,
    seed: u64,
) -> Result<FrameCapture> {
    let time_s = network.frame_time(frame);
    let scene = scene.propagate(time_s);
    let timestamp_ns = (time_s * 1e9).round() as u64;
    let cubes = network
        .radars
        .iter()
        .map(|r| {
            let opts = SynthesisOptions {
                noise_sigma: network.noise_sigma,
                seed: derive_seed(seed, r.id, frame),
                sensor_id: r.id,
                out_of_bounds: OutOfBounds::Discard,
                ..SynthesisOptions::default()
            };
            let mut cube =
                synthesize_cube(&scene, &r.pose, &network.config, &network.geometry, &opts)?;
            cube.timestamp_ns = timestamp_ns;
            Ok(cube)
        })
        .collect::<Result<Vec<_>>>()?;
    let lidar = match &network.lidar {
        Some(l) => {
            let mut cloud = simulate_lidar(
                &scene,
                &l.pose,
                &l.spec,
                derive_seed(seed, LIDAR_SENSOR_ID, frame),
            )?;
            cloud.frame = frame;
            cloud.time_s = time_s;
            Some(cloud)
        }
        None => None,
    };
    Ok(FrameCapture {
        frame,
        time_s,
        cubes,
        lidar,
    })
}

/// Processes each cube and fuses the clouds into the vessel frame.
pub fn process_capture<T: Real>(
    capture: &FrameCapture,
    network: &Network,
    processor: &FrameProcessor<T>,
    tolerance_s: f64,
) -> Result<NetworkCloud> {
    let mut clouds = Vec::with_capacity(capture.cubes.len());
    for cube in &capture.cubes {
        let pose = network
            .pose(cube.sensor_id)
            .ok_or_else(|| Error::Config(format!("no pose for sensor {}", cube.sensor_id)))?;
        let mut cloud = processor.process(cube)?.cloud;
        cloud.frame = capture.frame;
        clouds.push((cloud, pose));
    }
    if clouds.is_empty() {
        return Err(Error::Empty("network has no radars".into()));
    }
    fuse(&clouds, tolerance_s)
}

pub fn processor_for<T: Real>(
    network: &Network,
    params: &ProcessingParams,
) -> Result<FrameProcessor<T>> {
    FrameProcessor::new(&network.config, &network.geometry, params)
}
