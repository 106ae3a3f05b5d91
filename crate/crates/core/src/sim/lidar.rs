//! Ray-cast reference point clouds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cloud::{PointCloud, RadarPoint};
use crate::error::{Error, Result};
use crate::fusion::SensorPose;
use crate::scene::Scene;

/// Sensor id carried by simulated lidar clouds.
pub const LIDAR_SENSOR_ID: u16 = 0;

/// Segment-parameter slack so rays through a polyline vertex still hit.
const EDGE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LidarSpec {
    pub azimuth_fov_deg: f64,
    pub azimuth_step_deg: f64,
    pub elevation_rays: usize,
    pub elevation_min_deg: f64,
    pub elevation_max_deg: f64,
    pub max_range: f64,
    pub range_noise_sigma: f64,
    /// Radius of the sphere a point scatterer presents to the beams, m.
    pub scatterer_radius: f64,
}

impl Default for LidarSpec {
    fn default() -> Self {
        LidarSpec {
            azimuth_fov_deg: 360.0,
            azimuth_step_deg: 0.2,
            elevation_rays: 16,
            elevation_min_deg: -15.0,
            elevation_max_deg: 15.0,
            max_range: 100.0,
            range_noise_sigma: 0.02,
            scatterer_radius: 0.3,
        }
    }
}

impl LidarSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.azimuth_step_deg > 0.0 && self.azimuth_step_deg <= self.azimuth_fov_deg) {
            return Err(Error::Config(
                "lidar: need 0 < azimuth_step_deg <= azimuth_fov_deg".into(),
            ));
        }
        if self.azimuth_fov_deg > 360.0 {
            return Err(Error::Config("lidar: azimuth_fov_deg above 360".into()));
        }
        if !(self.max_range > 0.0) {
            return Err(Error::Config("lidar: max_range must be > 0".into()));
        }
        if self.elevation_rays == 0 || self.elevation_min_deg > self.elevation_max_deg {
            return Err(Error::Config("lidar: invalid elevation fan".into()));
        }
        if !(self.range_noise_sigma >= 0.0) || !(self.scatterer_radius >= 0.0) {
            return Err(Error::Config(
                "lidar: noise sigma and scatterer radius must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Ray azimuths relative to the sensor heading, degrees. A full circle is
    /// sampled without repeating its end point.
    pub fn azimuths(&self) -> Vec<f64> {
        let full = self.azimuth_fov_deg >= 360.0;
        let span = self.azimuth_fov_deg / self.azimuth_step_deg;
        let count = if full {
            span.round() as usize
        } else {
            (span + 1e-9).floor() as usize + 1
        };
        let start = -0.5 * self.azimuth_fov_deg;
        (0..count)
            .map(|k| start + k as f64 * self.azimuth_step_deg)
            .collect()
    }

    pub fn elevations(&self) -> Vec<f64> {
        if self.elevation_rays == 1 {
            return vec![0.5 * (self.elevation_min_deg + self.elevation_max_deg)];
        }
        let step =
            (self.elevation_max_deg - self.elevation_min_deg) / (self.elevation_rays - 1) as f64;
        (0..self.elevation_rays)
            .map(|k| self.elevation_min_deg + k as f64 * step)
            .collect()
    }
}

/// Casts the beam pattern from `pose` and returns one vessel-frame point per
/// ray that hits something within range. Porous structures are hit with their
/// `lidar_hit_probability`, drawn per ray and structure.
pub fn simulate_lidar(
    scene: &Scene,
    pose: &SensorPose,
    spec: &LidarSpec,
    seed: u64,
) -> Result<PointCloud> {
    spec.validate()?;
    scene.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise =
        Normal::new(0.0, spec.range_noise_sigma.max(f64::MIN_POSITIVE)).expect("valid sigma");
    let origin = pose.translation;
    let elevations: Vec<(f64, f64)> = spec
        .elevations()
        .into_iter()
        .map(|e| e.to_radians().sin_cos())
        .collect();

    let mut cloud = PointCloud::new(0, scene.timestamp, LIDAR_SENSOR_ID);
    for az in spec.azimuths() {
        let (sa, ca) = (pose.yaw_deg + az).to_radians().sin_cos();
        for &(se, ce) in &elevations {
            let dir = [ce * ca, ce * sa, se];
            let Some(mut t) = cast(scene, origin, dir, spec, &mut rng) else {
                continue;
            };
            if spec.range_noise_sigma > 0.0 {
                t += noise.sample(&mut rng);
            }
            let p = [
                origin[0] + t * dir[0],
                origin[1] + t * dir[1],
                origin[2] + t * dir[2],
            ];
            cloud.points.push(RadarPoint::from_cartesian(
                p[0],
                p[1],
                p[2],
                0.0,
                0.0,
                LIDAR_SENSOR_ID,
            ));
        }
    }
    Ok(cloud)
}

/// Distance along the unit ray `dir` to the nearest accepted hit.
fn cast(
    scene: &Scene,
    origin: [f64; 3],
    dir: [f64; 3],
    spec: &LidarSpec,
    rng: &mut impl Rng,
) -> Option<f64> {
    let mut best = spec.max_range;
    let mut hit = false;
    let horiz = dir[0].hypot(dir[1]);

    if horiz > 0.0 {
        let (hx, hy) = (dir[0] / horiz, dir[1] / horiz);
        for target in &scene.extended_targets {
            let mut nearest: Option<f64> = None;
            for (a, b) in target.segments() {
                let Some(h) = ray_segment([origin[0], origin[1]], [hx, hy], a, b) else {
                    continue;
                };
                let t = h / horiz;
                let z = origin[2] + t * dir[2];
                if (0.0..=target.height).contains(&z) && nearest.is_none_or(|n| t < n) {
                    nearest = Some(t);
                }
            }
            let Some(t) = nearest else { continue };
            if t >= best {
                continue;
            }
            if target.lidar_hit_probability < 1.0
                && rng.random::<f64>() >= target.lidar_hit_probability
            {
                continue;
            }
            best = t;
            hit = true;
        }
    }

    if spec.scatterer_radius > 0.0 {
        for s in &scene.scatterers {
            if let Some(t) = ray_sphere(origin, dir, s.position, spec.scatterer_radius) {
                if t < best {
                    best = t;
                    hit = true;
                }
            }
        }
    }
    hit.then_some(best)
}

/// Horizontal distance along the unit 2D ray to segment `ab`, if it crosses.
fn ray_segment(o: [f64; 2], d: [f64; 2], a: [f64; 2], b: [f64; 2]) -> Option<f64> {
    let e = [b[0] - a[0], b[1] - a[1]];
    let denom = d[0] * e[1] - d[1] * e[0];
    if denom.abs() < 1e-15 {
        return None;
    }
    let w = [a[0] - o[0], a[1] - o[1]];
    let t = (w[0] * e[1] - w[1] * e[0]) / denom;
    let s = (w[0] * d[1] - w[1] * d[0]) / denom;
    (t > 0.0 && (-EDGE_EPS..=1.0 + EDGE_EPS).contains(&s)).then_some(t)
}

fn ray_sphere(o: [f64; 3], d: [f64; 3], c: [f64; 3], r: f64) -> Option<f64> {
    let oc = [o[0] - c[0], o[1] - c[1], o[2] - c[2]];
    let b = oc[0] * d[0] + oc[1] * d[1] + oc[2] * d[2];
    let cc = oc[0] * oc[0] + oc[1] * oc[1] + oc[2] * oc[2] - r * r;
    let disc = b * b - cc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    [-b - sq, -b + sq].into_iter().find(|&t| t > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{ExtendedTarget, Scatterer};

    fn planar(step: f64) -> LidarSpec {
        LidarSpec {
            azimuth_step_deg: step,
            elevation_rays: 1,
            elevation_min_deg: 0.0,
            elevation_max_deg: 0.0,
            range_noise_sigma: 0.0,
            ..LidarSpec::default()
        }
    }

    /// Straight wall at perpendicular distance 10 m subtending ±10°.
    fn wall_scene() -> Scene {
        let half = 10.0 * 10f64.to_radians().tan();
        Scene {
            extended_targets: vec![ExtendedTarget::wall(vec![[10.0, -half], [10.0, half]], 2.0)],
            ..Default::default()
        }
    }

    fn lidar_pose() -> SensorPose {
        SensorPose::new([0.0, 0.0, 1.0], 0.0)
    }

    #[test]
    fn wall_ray_count() {
        let cloud = simulate_lidar(&wall_scene(), &lidar_pose(), &planar(0.2), 1).unwrap();
        // rays at -10.0, -9.8, ..., +10.0
        assert_eq!(cloud.len(), 101);
    }

    #[test]
    fn halving_step_doubles_hits() {
        let coarse = simulate_lidar(&wall_scene(), &lidar_pose(), &planar(0.2), 1)
            .unwrap()
            .len() as i64;
        let fine = simulate_lidar(&wall_scene(), &lidar_pose(), &planar(0.1), 1)
            .unwrap()
            .len() as i64;
        assert!((fine - 2 * coarse).abs() <= 1, "{fine} vs {coarse}");
    }

    #[test]
    fn empty_scene_gives_empty_cloud() {
        let cloud =
            simulate_lidar(&Scene::default(), &lidar_pose(), &LidarSpec::default(), 3).unwrap();
        assert!(cloud.is_empty());
    }

    #[test]
    fn points_lie_on_segments_without_noise() {
        let scene = Scene {
            extended_targets: vec![
                ExtendedTarget::wall(vec![[5.0, -8.0], [12.0, 3.0], [4.0, 9.0]], 3.0),
                ExtendedTarget::wall(vec![[-6.0, -6.0], [-6.0, 6.0]], 1.0),
            ],
            ..Default::default()
        };
        let spec = LidarSpec {
            range_noise_sigma: 0.0,
            ..LidarSpec::default()
        };
        let cloud = simulate_lidar(&scene, &lidar_pose(), &spec, 0).unwrap();
        assert!(cloud.len() > 100);
        for p in &cloud.points {
            let d = scene
                .extended_targets
                .iter()
                .flat_map(|t| t.segments())
                .map(|(a, b)| point_segment_distance([p.x, p.y], a, b))
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-9, "point {:?} is {d} m off", (p.x, p.y));
            assert!(p.z >= -1e-9 && p.z <= 3.0 + 1e-9);
        }
    }

    #[test]
    fn nearest_surface_occludes() {
        let scene = Scene {
            extended_targets: vec![
                ExtendedTarget::wall(vec![[20.0, -1.0], [20.0, 1.0]], 5.0),
                ExtendedTarget::wall(vec![[10.0, -1.0], [10.0, 1.0]], 5.0),
            ],
            ..Default::default()
        };
        let cloud = simulate_lidar(&scene, &lidar_pose(), &planar(0.5), 0).unwrap();
        assert!(!cloud.is_empty());
        assert!(cloud.points.iter().all(|p| (p.x - 10.0).abs() < 1e-9));
    }

    #[test]
    fn porous_targets_return_fewer_points() {
        let mut scene = wall_scene();
        scene.extended_targets[0].lidar_hit_probability = 0.25;
        let cloud = simulate_lidar(&scene, &lidar_pose(), &planar(0.05), 9).unwrap();
        let n = cloud.len() as f64;
        // 401 rays, binomial(401, 0.25): mean 100, sd about 8.7
        assert!((n - 100.0).abs() < 40.0, "{n}");
    }

    #[test]
    fn scatterer_sphere_is_hit() {
        let scene = Scene {
            scatterers: vec![Scatterer::fixed([15.0, 0.0, 1.0], 1.0)],
            ..Default::default()
        };
        let cloud = simulate_lidar(&scene, &lidar_pose(), &planar(0.2), 0).unwrap();
        assert!(!cloud.is_empty());
        for p in &cloud.points {
            let d = ((p.x - 15.0).powi(2) + p.y.powi(2) + (p.z - 1.0).powi(2)).sqrt();
            assert!((d - 0.3).abs() < 1e-9);
        }
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let scene = crate::scene::archetypes::vegetation();
        let pose = SensorPose::new([0.0, 0.0, 3.0], 0.0);
        let a = simulate_lidar(&scene, &pose, &LidarSpec::default(), 11).unwrap();
        let b = simulate_lidar(&scene, &pose, &LidarSpec::default(), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_spec() {
        let spec = LidarSpec {
            azimuth_step_deg: 0.0,
            ..LidarSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
        let e = [b[0] - a[0], b[1] - a[1]];
        let len2 = e[0] * e[0] + e[1] * e[1];
        let t = (((p[0] - a[0]) * e[0] + (p[1] - a[1]) * e[1]) / len2).clamp(0.0, 1.0);
        (p[0] - a[0] - t * e[0]).hypot(p[1] - a[1] - t * e[1])
    }
}
