//! TOML files: radar configuration, scenes and sensor networks.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ArrayGeometry, WaveformConfig};
use crate::dsp::ProcessingParams;
use crate::error::{Error, Result};
use crate::fusion::SensorPose;
use crate::network::{LidarNode, Network, RadarNode};
use crate::scene::{ExtendedTarget, Scatterer, Scene};
use crate::sim::LidarSpec;

/// Receiver noise used when a network file does not set `noise_sigma`.
pub const DEFAULT_NOISE_SIGMA: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    #[default]
    Default,
    MediumRange,
}

impl Preset {
    pub fn config(self) -> WaveformConfig {
        match self {
            Preset::Default => WaveformConfig::default(),
            Preset::MediumRange => WaveformConfig::medium_range(),
        }
    }
}

/// `[radar]` table. Unset keys come from the preset.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadarFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_frequency_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chirp_duration_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_rate_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_chirps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_tx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_rx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_rate_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_positions_lambda: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_positions_lambda: Option<Vec<f64>>,
}

impl RadarFile {
    pub fn from_config(cfg: &WaveformConfig, geometry: &ArrayGeometry) -> Self {
        RadarFile {
            preset: None,
            carrier_frequency_hz: Some(cfg.carrier_frequency),
            bandwidth_hz: Some(cfg.bandwidth),
            chirp_duration_s: Some(cfg.chirp_duration),
            n_samples: Some(cfg.n_samples),
            sample_rate_hz: Some(cfg.sample_rate),
            n_chirps: Some(cfg.n_chirps),
            n_tx: Some(cfg.n_tx),
            n_rx: Some(cfg.n_rx),
            frame_rate_hz: Some(cfg.frame_rate),
            tx_positions_lambda: Some(geometry.tx_positions.clone()),
            rx_positions_lambda: Some(geometry.rx_positions.clone()),
        }
    }

    /// Resolved configuration. Positions default to the uniform λ/2 array.
    pub fn resolve(&self) -> (WaveformConfig, ArrayGeometry) {
        let base = self.preset.unwrap_or_default().config();
        let cfg = WaveformConfig {
            carrier_frequency: self.carrier_frequency_hz.unwrap_or(base.carrier_frequency),
            bandwidth: self.bandwidth_hz.unwrap_or(base.bandwidth),
            chirp_duration: self.chirp_duration_s.unwrap_or(base.chirp_duration),
            n_samples: self.n_samples.unwrap_or(base.n_samples),
            sample_rate: self.sample_rate_hz.unwrap_or(base.sample_rate),
            n_chirps: self.n_chirps.unwrap_or(base.n_chirps),
            n_tx: self.n_tx.unwrap_or(base.n_tx),
            n_rx: self.n_rx.unwrap_or(base.n_rx),
            frame_rate: self.frame_rate_hz.unwrap_or(base.frame_rate),
        };
        let uniform = ArrayGeometry::for_config(&cfg);
        let geometry = ArrayGeometry {
            tx_positions: self
                .tx_positions_lambda
                .clone()
                .unwrap_or(uniform.tx_positions),
            rx_positions: self
                .rx_positions_lambda
                .clone()
                .unwrap_or(uniform.rx_positions),
        };
        (cfg, geometry)
    }
}

fn de<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

fn ser<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Config(e.to_string()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::from(e).at(path))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::from(e).at(path))
}

/// Parses a radar configuration file (the keys of [`RadarFile`] at top level).
pub fn parse_radar_config(text: &str) -> Result<(WaveformConfig, ArrayGeometry)> {
    Ok(de::<RadarFile>(text)?.resolve())
}

pub fn radar_config_to_toml(cfg: &WaveformConfig, geometry: &ArrayGeometry) -> Result<String> {
    ser(&RadarFile::from_config(cfg, geometry))
}

pub fn read_radar_config(path: impl AsRef<Path>) -> Result<(WaveformConfig, ArrayGeometry)> {
    let path = path.as_ref();
    parse_radar_config(&read_text(path)?).map_err(|e| e.at(path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScattererEntry {
    position: [f64; 3],
    #[serde(default)]
    velocity: [f64; 3],
    #[serde(default = "one")]
    reflectivity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolylineEntry {
    vertices: Vec<[f64; 2]>,
    height: f64,
    #[serde(default = "two")]
    density: f64,
    #[serde(default = "one")]
    reflectivity: f64,
    #[serde(default = "one")]
    lidar_hit_probability: f64,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    #[serde(default)]
    timestamp_s: f64,
    #[serde(default)]
    scatterer: Vec<ScattererEntry>,
    #[serde(default)]
    polyline: Vec<PolylineEntry>,
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let file: SceneFile = de(text)?;
    let scene = Scene {
        scatterers: file
            .scatterer
            .into_iter()
            .map(|s| Scatterer {
                position: s.position,
                velocity: s.velocity,
                reflectivity: s.reflectivity,
            })
            .collect(),
        extended_targets: file
            .polyline
            .into_iter()
            .map(|p| ExtendedTarget {
                vertices: p.vertices,
                height: p.height,
                density: p.density,
                reflectivity: p.reflectivity,
                lidar_hit_probability: p.lidar_hit_probability,
            })
            .collect(),
        timestamp: file.timestamp_s,
    };
    scene.validate()?;
    Ok(scene)
}

pub fn scene_to_toml(scene: &Scene) -> Result<String> {
    ser(&SceneFile {
        timestamp_s: scene.timestamp,
        scatterer: scene
            .scatterers
            .iter()
            .map(|s| ScattererEntry {
                position: s.position,
                velocity: s.velocity,
                reflectivity: s.reflectivity,
            })
            .collect(),
        polyline: scene
            .extended_targets
            .iter()
            .map(|t| PolylineEntry {
                vertices: t.vertices.clone(),
                height: t.height,
                density: t.density,
                reflectivity: t.reflectivity,
                lidar_hit_probability: t.lidar_hit_probability,
            })
            .collect(),
    })
}

pub fn read_scene(path: impl AsRef<Path>) -> Result<Scene> {
    let path = path.as_ref();
    parse_scene(&read_text(path)?).map_err(|e| e.at(path))
}

pub fn write_scene(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_text(path, &scene_to_toml(scene)?)
}

/// `[[sensor]]` entry: radar id and mounting pose in the vessel frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensorEntry {
    id: u16,
    x: f64,
    y: f64,
    #[serde(default)]
    z: f64,
    #[serde(default)]
    yaw_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LidarEntry {
    x: f64,
    y: f64,
    #[serde(default)]
    z: f64,
    #[serde(default)]
    yaw_deg: f64,
    #[serde(default)]
    beams: LidarSpec,
}

fn pose_of(x: f64, y: f64, z: f64, yaw_deg: f64) -> SensorPose {
    SensorPose::new([x, y, z], yaw_deg)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noise_sigma: Option<f64>,
    #[serde(default)]
    radar: RadarFile,
    #[serde(default)]
    sensor: Vec<SensorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lidar: Option<LidarEntry>,
}

/// Parses a network file: `noise_sigma`, a `[radar]` table shared by all
/// sensors, `[[sensor]]` poses and an optional `[lidar]` with `[lidar.beams]`.
/// The same file serves as the extrinsics for `compare`.
pub fn parse_network(text: &str) -> Result<Network> {
    let file: NetworkFile = de(text)?;
    let mut seen = BTreeSet::new();
    for s in &file.sensor {
        if s.id == crate::sim::LIDAR_SENSOR_ID {
            return Err(Error::Config(format!(
                "sensor id {} is reserved for the lidar",
                s.id
            )));
        }
        if !seen.insert(s.id) {
            return Err(Error::Config(format!("duplicate sensor id {}", s.id)));
        }
        if ![s.x, s.y, s.z, s.yaw_deg].iter().all(|v| v.is_finite()) {
            return Err(Error::Config(format!(
                "sensor {} has a non-finite pose",
                s.id
            )));
        }
    }
    let noise_sigma = file.noise_sigma.unwrap_or(DEFAULT_NOISE_SIGMA);
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::Config(format!(
            "noise_sigma {noise_sigma} must be >= 0"
        )));
    }
    let lidar = match file.lidar {
        Some(l) => {
            l.beams.validate()?;
            Some(LidarNode {
                pose: pose_of(l.x, l.y, l.z, l.yaw_deg),
                spec: l.beams,
            })
        }
        None => None,
    };
    let (config, geometry) = file.radar.resolve();
    Ok(Network {
        config,
        geometry,
        noise_sigma,
        radars: file
            .sensor
            .iter()
            .map(|s| RadarNode {
                id: s.id,
                pose: pose_of(s.x, s.y, s.z, s.yaw_deg),
            })
            .collect(),
        lidar,
    })
}

pub fn network_to_toml(net: &Network) -> Result<String> {
    let entry = |p: &SensorPose| (p.translation, p.yaw_deg);
    ser(&NetworkFile {
        noise_sigma: Some(net.noise_sigma),
        radar: RadarFile::from_config(&net.config, &net.geometry),
        sensor: net
            .radars
            .iter()
            .map(|r| {
                let (t, yaw_deg) = entry(&r.pose);
                SensorEntry {
                    id: r.id,
                    x: t[0],
                    y: t[1],
                    z: t[2],
                    yaw_deg,
                }
            })
            .collect(),
        lidar: net.lidar.as_ref().map(|l| {
            let (t, yaw_deg) = entry(&l.pose);
            LidarEntry {
                x: t[0],
                y: t[1],
                z: t[2],
                yaw_deg,
                beams: l.spec.clone(),
            }
        }),
    })
}

pub fn read_network(path: impl AsRef<Path>) -> Result<Network> {
    let path = path.as_ref();
    parse_network(&read_text(path)?).map_err(|e| e.at(path))
}

pub fn write_network(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &network_to_toml(net)?)
}

/// Radar poses by id from an extrinsics (or network) file.
pub fn read_extrinsics(path: impl AsRef<Path>) -> Result<Vec<(u16, SensorPose)>> {
    Ok(read_network(path)?
        .radars
        .iter()
        .map(|r| (r.id, r.pose))
        .collect())
}

/// Parses DSP parameters (the fields of [`ProcessingParams`], all optional,
/// with a `[cfar]` table).
pub fn parse_processing_params(text: &str) -> Result<ProcessingParams> {
    de(text)
}

pub fn processing_params_to_toml(params: &ProcessingParams) -> Result<String> {
    ser(params)
}

pub fn read_processing_params(path: impl AsRef<Path>) -> Result<ProcessingParams> {
    let path = path.as_ref();
    parse_processing_params(&read_text(path)?).map_err(|e| e.at(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_radar_file_is_the_default() {
        let (cfg, geom) = parse_radar_config("").unwrap();
        assert_eq!(cfg, WaveformConfig::default());
        assert_eq!(geom, ArrayGeometry::uniform(3, 4));
    }

    #[test]
    fn preset_and_override() {
        let (cfg, _) = parse_radar_config("preset = \"medium-range\"\nn_chirps = 96\n").unwrap();
        assert_eq!(cfg.bandwidth, 300e6);
        assert_eq!(cfg.n_chirps, 96);
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(matches!(
            parse_radar_config("bandwith_hz = 1e9\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn radar_round_trip() {
        let cfg = WaveformConfig::medium_range();
        let geom = ArrayGeometry::for_config(&cfg);
        let text = radar_config_to_toml(&cfg, &geom).unwrap();
        assert_eq!(parse_radar_config(&text).unwrap(), (cfg, geom));
    }

    #[test]
    fn scene_round_trip() {
        let scene = crate::scene::archetypes::city();
        let text = scene_to_toml(&scene).unwrap();
        assert_eq!(parse_scene(&text).unwrap(), scene);
    }

    #[test]
    fn scene_defaults() {
        let text = "[[scatterer]]\nposition = [10.0, 0.0, 0.0]\n\n\
                    [[polyline]]\nvertices = [[0.0, 5.0], [10.0, 5.0]]\nheight = 2.0\n";
        let scene = parse_scene(text).unwrap();
        assert_eq!(scene.scatterers[0].reflectivity, 1.0);
        assert_eq!(scene.extended_targets[0].density, 2.0);
    }

    #[test]
    fn network_file() {
        let text = "noise_sigma = 0.01\n\
                    [radar]\npreset = \"medium-range\"\n\n\
                    [[sensor]]\nid = 1\nx = 5.0\ny = 1.2\nyaw_deg = 390.0\n\n\
                    [[sensor]]\nid = 2\nx = 5.0\ny = -1.2\nyaw_deg = -30.0\n\n\
                    [lidar]\nx = 0.0\ny = 0.0\nz = 3.0\n[lidar.beams]\nazimuth_step_deg = 1.0\n";
        let net = parse_network(text).unwrap();
        assert_eq!(net.radars.len(), 2);
        assert!((net.pose(1).unwrap().yaw_deg - 30.0).abs() < 1e-12);
        assert_eq!(net.lidar.as_ref().unwrap().spec.azimuth_step_deg, 1.0);
        assert_eq!(net.config.bandwidth, 300e6);
        let again = parse_network(&network_to_toml(&net).unwrap()).unwrap();
        assert_eq!(again, net);
    }

    #[test]
    fn network_rejects_duplicate_and_reserved_ids() {
        let dup = "[[sensor]]\nid = 1\nx = 0.0\ny = 0.0\n[[sensor]]\nid = 1\nx = 1.0\ny = 0.0\n";
        assert!(parse_network(dup).is_err());
        assert!(parse_network("[[sensor]]\nid = 0\nx = 0.0\ny = 0.0\n").is_err());
    }

    #[test]
    fn processing_params_round_trip() {
        let p = parse_processing_params("window = \"rectangular\"\n[cfar]\npfa = 1e-4\n").unwrap();
        assert_eq!(p.window, crate::dsp::Window::Rectangular);
        assert_eq!(p.cfar.pfa, 1e-4);
        assert_eq!(p.zero_pad, ProcessingParams::default().zero_pad);
        let back = parse_processing_params(&processing_params_to_toml(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(matches!(
            parse_processing_params("zero_padding = 3"),
            Err(Error::Config(_))
        ));
    }
}
