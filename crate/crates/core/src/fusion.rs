//! Sensor extrinsics and assembly of network clouds in the vessel frame.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::cloud::{PointCloud, RadarPoint};
use crate::error::{Error, Result};

/// Default time gate: half the 20 Hz frame period.
pub const DEFAULT_TOLERANCE_S: f64 = 0.025;

/// Mounting pose of a sensor in the vessel frame. Pitch and roll are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorPose {
    pub translation: [f64; 3],
    /// Heading in degrees, counter-clockwise from the bow, in (−180, 180].
    pub yaw_deg: f64,
}

impl Default for SensorPose {
    fn default() -> Self {
        SensorPose::identity()
    }
}

impl SensorPose {
    pub fn new(translation: [f64; 3], yaw_deg: f64) -> Self {
        SensorPose {
            translation,
            yaw_deg: normalize_yaw(yaw_deg),
        }
    }

    pub fn identity() -> Self {
        SensorPose {
            translation: [0.0; 3],
            yaw_deg: 0.0,
        }
    }

    /// Sensor frame to vessel frame.
    pub fn to_vessel(&self, p: [f64; 3]) -> [f64; 3] {
        let (s, c) = self.yaw_deg.to_radians().sin_cos();
        [
            c * p[0] - s * p[1] + self.translation[0],
            s * p[0] + c * p[1] + self.translation[1],
            p[2] + self.translation[2],
        ]
    }

    /// Vessel frame to sensor frame.
    pub fn to_sensor(&self, p: [f64; 3]) -> [f64; 3] {
        let d = [
            p[0] - self.translation[0],
            p[1] - self.translation[1],
            p[2] - self.translation[2],
        ];
        self.rotate_to_sensor(d)
    }

    /// Rotates a free vector (e.g. a velocity) into the sensor frame.
    pub fn rotate_to_sensor(&self, v: [f64; 3]) -> [f64; 3] {
        let (s, c) = self.yaw_deg.to_radians().sin_cos();
        [c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2]]
    }
}

/// Maps an angle in degrees into (−180, 180].
pub fn normalize_yaw(yaw_deg: f64) -> f64 {
    let r = yaw_deg.rem_euclid(360.0);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

/// Rigidly moves every point into the vessel frame. Velocity, power and the
/// sensor-relative range/azimuth are left untouched.
pub fn transform_cloud(cloud: &PointCloud, pose: &SensorPose) -> PointCloud {
    let points = cloud
        .points
        .iter()
        .map(|p| {
            let [x, y, z] = pose.to_vessel(p.position());
            RadarPoint { x, y, z, ..*p }
        })
        .collect();
    PointCloud {
        points,
        ..cloud.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionStatus {
    Ok,
    /// No input cloud fell within the tolerance of the median timestamp.
    NothingAdmitted,
}

/// Time-aligned concatenation of several sensors' clouds in the vessel frame.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCloud {
    pub time_s: f64,
    pub points: Vec<RadarPoint>,
    pub admitted: Vec<u16>,
    pub rejected: Vec<u16>,
    pub status: FusionStatus,
}

impl NetworkCloud {
    pub fn into_cloud(self, frame: u64, sensor_id: u16) -> PointCloud {
        PointCloud {
            frame,
            time_s: self.time_s,
            sensor_id,
            points: self.points,
        }
    }
}

/// Transforms each cloud by its pose and keeps those whose timestamp lies within
/// `tolerance` seconds of the (lower) median timestamp. No deduplication is done.
pub fn fuse(clouds: &[(PointCloud, SensorPose)], tolerance: f64) -> Result<NetworkCloud> {
    if clouds.is_empty() {
        return Err(Error::Empty("fuse needs at least one cloud".into()));
    }
    let mut times: Vec<f64> = clouds.iter().map(|(c, _)| c.time_s).collect();
    times.sort_by(|a, b| a.total_cmp(b));
    // lower median: always one of the observed timestamps
    let median = times[(times.len() - 1) / 2];

    let mut out = NetworkCloud {
        time_s: median,
        points: Vec::new(),
        admitted: Vec::new(),
        rejected: Vec::new(),
        status: FusionStatus::Ok,
    };
    for (cloud, pose) in clouds {
        if (cloud.time_s - median).abs() <= tolerance {
            out.points.extend(transform_cloud(cloud, pose).points);
            out.admitted.push(cloud.sensor_id);
        } else {
            out.rejected.push(cloud.sensor_id);
        }
    }
    if out.admitted.is_empty() {
        warn!("no cloud within {tolerance} s of median time {median}; network cloud is empty");
        out.status = FusionStatus::NothingAdmitted;
    }
    Ok(out)
}
