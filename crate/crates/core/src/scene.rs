//! Ground-truth scenes shared by the radar and lidar simulators.
//!
//! Coordinates are vessel-frame metres: x towards the bow, y to port, z up,
//! origin at the primary GNSS antenna projected onto the waterline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point reflector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    pub position: [f64; 3],
    pub velocity: [f64; 3],
    /// Amplitude scale, RCS-like.
    pub reflectivity: f64,
}

impl Scatterer {
    pub fn fixed(position: [f64; 3], reflectivity: f64) -> Self {
        Scatterer {
            position,
            velocity: [0.0; 3],
            reflectivity,
        }
    }
}

/// Vertical structure along a horizontal polyline, standing on `z = 0` up to
/// `height` (quay walls, railings, vegetation bands).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedTarget {
    pub vertices: Vec<[f64; 2]>,
    pub height: f64,
    /// Radar scatterers per metre of polyline.
    pub density: f64,
    pub reflectivity: f64,
    /// Probability that a lidar ray crossing the structure returns from it.
    /// Values below one model porous structures such as foliage.
    pub lidar_hit_probability: f64,
}

impl ExtendedTarget {
    pub fn wall(vertices: Vec<[f64; 2]>, height: f64) -> Self {
        ExtendedTarget {
            vertices,
            height,
            density: 2.0,
            reflectivity: 1.0,
            lidar_hit_probability: 1.0,
        }
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| seg_len(a, b)).sum()
    }

    pub fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Point scatterers at uniform arc-length spacing `1 / density`, placed at
    /// the centres of equal-length pieces, at half height.
    pub fn sample_scatterers(&self) -> Vec<Scatterer> {
        let mut out = Vec::new();
        for (a, b) in self.segments() {
            let len = seg_len(a, b);
            if len <= 0.0 {
                continue;
            }
            let n = ((len * self.density).round() as usize).max(1);
            for m in 0..n {
                let t = (m as f64 + 0.5) / n as f64;
                out.push(Scatterer::fixed(
                    [
                        a[0] + t * (b[0] - a[0]),
                        a[1] + t * (b[1] - a[1]),
                        0.5 * self.height,
                    ],
                    self.reflectivity,
                ));
            }
        }
        out
    }
}

fn seg_len(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Scene {
    pub scatterers: Vec<Scatterer>,
    pub extended_targets: Vec<ExtendedTarget>,
    pub timestamp: f64,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.scatterers.iter().enumerate() {
            if !(s.reflectivity >= 0.0) {
                return Err(Error::Config(format!(
                    "scatterer {i}: reflectivity must be >= 0"
                )));
            }
            if s.position.iter().chain(&s.velocity).any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("scatterer {i}: non-finite value")));
            }
        }
        for (i, t) in self.extended_targets.iter().enumerate() {
            if t.vertices.len() < 2 {
                return Err(Error::Config(format!(
                    "polyline {i}: needs at least 2 vertices"
                )));
            }
            if !(t.density > 0.0) {
                return Err(Error::Config(format!("polyline {i}: density must be > 0")));
            }
            if !(t.height > 0.0) || !(t.reflectivity >= 0.0) {
                return Err(Error::Config(format!(
                    "polyline {i}: height must be > 0 and reflectivity >= 0"
                )));
            }
            if !(0.0..=1.0).contains(&t.lidar_hit_probability) {
                return Err(Error::Config(format!(
                    "polyline {i}: lidar_hit_probability outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Every radar point source: explicit scatterers followed by the sampled
    /// extended targets.
    pub fn radar_scatterers(&self) -> Vec<Scatterer> {
        let mut all = self.scatterers.clone();
        for t in &self.extended_targets {
            all.extend(t.sample_scatterers());
        }
        all
    }

    /// Advances scatterers along their velocity; extended targets are static.
    pub fn propagate(&self, dt: f64) -> Scene {
        assert!(dt >= 0.0, "propagate: dt must be >= 0");
        let mut next = self.clone();
        for s in &mut next.scatterers {
            for (p, v) in s.position.iter_mut().zip(s.velocity) {
                *p += v * dt;
            }
        }
        next.timestamp += dt;
        next
    }
}

/// Built-in scene archetypes for the two inland-waterway environments.
pub mod archetypes {
    use super::*;

    /// Urban channel: concrete quay walls, metal railings, building fronts and a
    /// slowly moving vessel.
    pub fn city() -> Scene {
        let mut targets = Vec::new();
        for side in [1.0, -1.0] {
            targets.push(ExtendedTarget::wall(
                vec![[-48.0, 14.0 * side], [48.0, 14.0 * side]],
                2.5,
            ));
            targets.push(ExtendedTarget {
                reflectivity: 2.0,
                lidar_hit_probability: 0.5,
                ..ExtendedTarget::wall(vec![[-46.0, 14.6 * side], [46.0, 14.6 * side]], 3.5)
            });
            for (x0, x1) in [(-45.0, -6.0), (6.0, 45.0)] {
                targets.push(ExtendedTarget::wall(
                    vec![[x0, 24.0 * side], [x1, 24.0 * side]],
                    12.0,
                ));
            }
            // street opening between the building blocks
            targets.push(ExtendedTarget::wall(
                vec![[-6.0, 24.0 * side], [-6.0, 30.0 * side]],
                12.0,
            ));
            targets.push(ExtendedTarget::wall(
                vec![[6.0, 24.0 * side], [6.0, 30.0 * side]],
                12.0,
            ));
        }
        // moored barge
        targets.push(ExtendedTarget {
            reflectivity: 2.0,
            ..ExtendedTarget::wall(vec![[20.0, 11.0], [38.0, 11.0], [38.0, 9.0]], 3.0)
        });

        let scatterers = (0..6)
            .map(|k| Scatterer {
                position: [30.0 + 2.0 * k as f64, -6.0, 1.5],
                velocity: [-1.5, 0.0, 0.0],
                reflectivity: 3.0,
            })
            .collect();

        Scene {
            scatterers,
            extended_targets: targets,
            timestamp: 0.0,
        }
    }

    /// Natural channel: grass banks, layered bushes and tree lines that let most
    /// lidar beams pass between leaves.
    pub fn vegetation() -> Scene {
        let mut targets = Vec::new();
        for side in [1.0, -1.0] {
            let band = |y: f64, height: f64, refl: f64, p_hit: f64| ExtendedTarget {
                vertices: vec![[-48.0, y * side], [48.0, y * side]],
                height,
                density: 2.0,
                reflectivity: refl,
                lidar_hit_probability: p_hit,
            };
            targets.push(band(13.0, 0.6, 0.3, 0.1));
            for y in [15.0, 16.5, 18.0] {
                targets.push(band(y, 3.0, 0.4, 0.05));
            }
            for y in [21.0, 23.0, 25.0] {
                targets.push(band(y, 10.0, 0.5, 0.05));
            }
        }
        Scene {
            scatterers: Vec::new(),
            extended_targets: targets,
            timestamp: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mover() -> Scene {
        Scene {
            scatterers: vec![Scatterer {
                position: [1.0, 2.0, 0.0],
                velocity: [1.0, 0.0, 0.0],
                reflectivity: 1.0,
            }],
            extended_targets: vec![ExtendedTarget::wall(vec![[0.0, 5.0], [10.0, 5.0]], 2.0)],
            timestamp: 0.0,
        }
    }

    #[test]
    fn propagate_zero_is_identity() {
        let s = mover();
        assert_eq!(s.propagate(0.0), s);
    }

    #[test]
    fn propagate_moves_linearly() {
        let s = mover().propagate(2.0);
        assert_eq!(s.scatterers[0].position, [3.0, 2.0, 0.0]);
        assert_eq!(s.timestamp, 2.0);
        assert_eq!(s.extended_targets, mover().extended_targets);
    }

    #[test]
    fn propagate_composes() {
        let s = mover();
        let ab = s.propagate(0.25).propagate(0.5);
        let direct = s.propagate(0.75);
        for (p, q) in ab.scatterers[0]
            .position
            .iter()
            .zip(direct.scatterers[0].position)
        {
            assert!((p - q).abs() < 1e-12);
        }
        assert!((ab.timestamp - direct.timestamp).abs() < 1e-12);
    }

    #[test]
    fn sampling_density() {
        let wall = ExtendedTarget::wall(vec![[0.0, 0.0], [10.0, 0.0], [10.0, 5.0]], 2.0);
        let pts = wall.sample_scatterers();
        assert_eq!(pts.len(), 30);
        assert!(pts.iter().all(|s| s.position[2] == 1.0));
        assert!((pts[0].position[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let mut s = mover();
        assert!(s.validate().is_ok());
        s.extended_targets[0].vertices.truncate(1);
        assert!(s.validate().is_err());
        let mut s = mover();
        s.scatterers[0].reflectivity = -1.0;
        assert!(s.validate().is_err());
        let mut s = mover();
        s.extended_targets[0].density = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn archetypes_validate() {
        archetypes::city().validate().unwrap();
        archetypes::vegetation().validate().unwrap();
    }
}
