use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fmcwnet::fusion::{fuse, FusionStatus, DEFAULT_TOLERANCE_S};
use fmcwnet::io::{read_cloud, read_network, write_metrics};
use fmcwnet::metrics::{default_pair_tolerance, metric_timeseries, CellSupport, SeriesOptions};
use fmcwnet::{GridSpec, PointCloud, SensorPose};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::layout::{list, parse_stem, stem_of, CLOUD_EXT};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SupportArg {
    /// Average over cells with at least one point.
    #[default]
    Occupied,
    /// Average over cells with more than one point.
    MoreThanOne,
}

/// Crop size `LxW` in metres, centred on the vessel origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub length: f64,
    pub width: f64,
}

pub fn parse_area(s: &str) -> Result<Area, String> {
    let (l, w) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected LENGTHxWIDTH, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Area {
        length: num(l)?,
        width: num(w)?,
    })
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory of per-sensor radar clouds (`s{id}_f{frame}.csv`).
    #[arg(long)]
    pub radar: PathBuf,
    /// Directory of vessel-frame lidar clouds.
    #[arg(long)]
    pub lidar: PathBuf,
    /// Network TOML holding the radar poses.
    #[arg(long)]
    pub extrinsics: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "4,2,1,0.5")]
    pub cell_size: Vec<f64>,
    #[arg(long, value_parser = parse_area, default_value = "100x80")]
    pub area: Area,
    /// Radar/lidar pairing window in seconds (default: half the frame period).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Time gate for combining the radars of one frame, s.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE_S)]
    pub fuse_tolerance: f64,
    #[arg(long, value_enum, default_value_t = SupportArg::Occupied)]
    pub support: SupportArg,
    /// Restrict both mean counts to cells occupied in both modalities.
    #[arg(long)]
    pub joint_support: bool,
    /// Metrics CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &CompareArgs, m: &mut RunManifest) -> CliResult<()> {
    m.input("radar", &args.radar);
    m.input("lidar", &args.lidar);
    m.input("extrinsics", &args.extrinsics);

    let net = read_network(&args.extrinsics)?;
    let rate = net.config.frame_rate;
    let specs = args
        .cell_size
        .iter()
        .map(|&s| GridSpec::centered(args.area.length, args.area.width, s))
        .collect::<fmcwnet::Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(CliError::config("at least one --cell-size is needed"));
    }

    let (radar_files, lidar_files) = m.stage("load", || -> CliResult<_> {
        Ok((
            load_clouds(&args.radar, rate)?,
            load_clouds(&args.lidar, rate)?,
        ))
    })?;
    if lidar_files.is_empty() {
        return Err(CliError::empty(format!(
            "no lidar clouds in {}",
            args.lidar.display()
        )));
    }
    if radar_files.is_empty() {
        return Err(CliError::empty(format!(
            "no radar clouds in {}",
            args.radar.display()
        )));
    }

    let radar = m.stage("fuse", || {
        fuse_frames(radar_files, &net, args.fuse_tolerance)
    })?;
    let mut lidar: Vec<PointCloud> = lidar_files.into_iter().map(|(_, c)| c).collect();
    lidar.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));

    let tolerance = args
        .tolerance
        .unwrap_or_else(|| default_pair_tolerance(rate, rate));
    let opts = SeriesOptions {
        support: match args.support {
            SupportArg::Occupied => CellSupport::Occupied,
            SupportArg::MoreThanOne => CellSupport::MoreThanOne,
        },
        joint_support: args.joint_support,
    };
    let series = m.stage("metrics", || {
        metric_timeseries(&radar, &lidar, &specs, tolerance, &opts)
    })?;
    if series.unpaired_radar + series.unpaired_lidar > 0 {
        log::warn!(
            "{} radar and {} lidar frames had no partner within {tolerance} s",
            series.unpaired_radar,
            series.unpaired_lidar
        );
    }
    let rows = series.rows();
    m.stage("write", || write_metrics(&rows, &args.out))?;
    m.outputs_written = 1;
    log::info!("{} paired frames, {} rows", series.frames.len(), rows.len());
    Ok(())
}

/// Reads every cloud in `dir`. Files without rows get their frame, time and
/// sensor from the file name.
fn load_clouds(dir: &Path, frame_rate: f64) -> CliResult<Vec<(PathBuf, PointCloud)>> {
    let files = list(dir, CLOUD_EXT)?;
    files
        .into_par_iter()
        .map(|path| {
            let mut cloud = read_cloud(&path)?;
            if cloud.is_empty() {
                if let Some(s) = parse_stem(stem_of(&path)) {
                    cloud.frame = s.frame;
                    cloud.time_s = s.frame as f64 / frame_rate;
                    cloud.sensor_id = s.sensor.unwrap_or(0);
                }
            }
            Ok((path, cloud))
        })
        .collect()
}

/// Groups per-sensor clouds by frame and combines each group in the vessel
/// frame. Sensor id 0 marks a cloud that is already in the vessel frame.
fn fuse_frames(
    files: Vec<(PathBuf, PointCloud)>,
    net: &fmcwnet::Network,
    tolerance: f64,
) -> CliResult<Vec<PointCloud>> {
    let mut by_frame: BTreeMap<u64, Vec<(PointCloud, SensorPose)>> = BTreeMap::new();
    for (path, cloud) in files {
        let pose = match cloud.sensor_id {
            0 => SensorPose::identity(),
            id => net.pose(id).ok_or_else(|| {
                CliError::config(format!("{}: no extrinsics for sensor {id}", path.display()))
            })?,
        };
        by_frame.entry(cloud.frame).or_default().push((cloud, pose));
    }
    by_frame
        .into_iter()
        .map(|(frame, clouds)| {
            let fused = fuse(&clouds, tolerance)?;
            if fused.status == FusionStatus::NothingAdmitted {
                log::warn!("frame {frame}: no radar cloud inside the time gate");
            } else if !fused.rejected.is_empty() {
                log::warn!(
                    "frame {frame}: sensors {:?} outside the time gate",
                    fused.rejected
                );
            }
            Ok(fused.into_cloud(frame, 0))
        })
        .collect()
}
