use serde::{Deserialize, Serialize};

/// One detected (or simulated) point.
///
/// `x`, `y`, `z` are in the frame of whoever produced the cloud; after
/// [`crate::fusion::transform_cloud`] they are vessel-frame coordinates, while
/// `range`, `azimuth_deg` and `v_r` stay the measurement as seen by the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub range: f64,
    pub azimuth_deg: f64,
    /// Relative radial velocity, positive when the range increases.
    pub v_r: f64,
    pub power_db: f64,
    pub sensor_id: u16,
}

impl RadarPoint {
    /// Point in the horizontal plane from a range/azimuth measurement.
    pub fn from_polar(
        range: f64,
        azimuth_deg: f64,
        v_r: f64,
        power_db: f64,
        sensor_id: u16,
    ) -> Self {
        let az = azimuth_deg.to_radians();
        RadarPoint {
            x: range * az.cos(),
            y: range * az.sin(),
            z: 0.0,
            range,
            azimuth_deg,
            v_r,
            power_db,
            sensor_id,
        }
    }

    pub fn from_cartesian(x: f64, y: f64, z: f64, v_r: f64, power_db: f64, sensor_id: u16) -> Self {
        RadarPoint {
            x,
            y,
            z,
            range: (x * x + y * y + z * z).sqrt(),
            azimuth_deg: y.atan2(x).to_degrees(),
            v_r,
            power_db,
            sensor_id,
        }
    }

    pub fn position(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointCloud {
    pub frame: u64,
    pub time_s: f64,
    pub sensor_id: u16,
    pub points: Vec<RadarPoint>,
}

impl PointCloud {
    pub fn new(frame: u64, time_s: f64, sensor_id: u16) -> Self {
        PointCloud {
            frame,
            time_s,
            sensor_id,
            points: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
