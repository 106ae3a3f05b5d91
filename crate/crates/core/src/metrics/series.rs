//! Per-frame comparison of radar and lidar clouds over several cell sizes.

use serde::{Deserialize, Serialize};

use super::figures::{jaccard, mean_cell_count_with, CellDensity, CellSupport, Jaccard};
use super::grid::{rasterize, GridSpec};
use crate::cloud::PointCloud;
use crate::error::{Error, Result};

/// Half the frame period of the slower of two streams.
pub fn default_pair_tolerance(rate_a_hz: f64, rate_b_hz: f64) -> f64 {
    0.5 / rate_a_hz.min(rate_b_hz)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub support: CellSupport,
    /// Count each modality only on cells occupied by both.
    pub joint_support: bool,
}

/// Figures for one paired frame at one cell size.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMetrics {
    pub cell_size: f64,
    pub jaccard: Jaccard,
    /// `None` when the modality has no occupied cell in the crop.
    pub radar: Option<CellDensity>,
    pub lidar: Option<CellDensity>,
    pub zero_cells_radar: usize,
    pub zero_cells_lidar: usize,
    pub dropped_radar: usize,
    pub dropped_lidar: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricFrame {
    pub time_s: f64,
    pub radar_frame: u64,
    pub lidar_frame: u64,
    pub cells: Vec<CellMetrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    pub frames: Vec<MetricFrame>,
    /// Radar frames with no lidar frame inside the tolerance.
    pub unpaired_radar: usize,
    /// Lidar frames never chosen as a partner.
    pub unpaired_lidar: usize,
}

/// One line of the metrics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub time_s: f64,
    pub cell_size_m: f64,
    pub jaccard: f64,
    pub mean_count_radar: f64,
    pub mean_count_lidar: f64,
    pub dropped_points_radar: usize,
    pub dropped_points_lidar: usize,
}

impl MetricRow {
    /// Lidar over radar mean count; NaN when either is undefined.
    pub fn density_ratio(&self) -> f64 {
        self.mean_count_lidar / self.mean_count_radar
    }
}

impl MetricSeries {
    /// Flattens to one row per frame and cell size. Undefined mean counts are NaN.
    pub fn rows(&self) -> Vec<MetricRow> {
        let per_m2 = |d: &Option<CellDensity>| d.map_or(f64::NAN, |d| d.per_square_metre());
        self.frames
            .iter()
            .flat_map(|f| {
                f.cells.iter().map(move |c| MetricRow {
                    time_s: f.time_s,
                    cell_size_m: c.cell_size,
                    jaccard: c.jaccard.value(),
                    mean_count_radar: per_m2(&c.radar),
                    mean_count_lidar: per_m2(&c.lidar),
                    dropped_points_radar: c.dropped_radar,
                    dropped_points_lidar: c.dropped_lidar,
                })
            })
            .collect()
    }
}

fn nearest(frames: &[PointCloud], t: f64) -> Option<(usize, f64)> {
    frames
        .iter()
        .enumerate()
        .map(|(i, c)| (i, (c.time_s - t).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn density(
    grid: &super::grid::OccupancyGrid,
    other: &super::grid::OccupancyGrid,
    opts: &SeriesOptions,
) -> Result<Option<CellDensity>> {
    let joint = opts.joint_support.then_some(other);
    match mean_cell_count_with(grid, opts.support, joint) {
        Ok(d) => Ok(Some(d)),
        Err(Error::UndefinedMetric(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Pairs every radar frame with the nearest lidar frame in time and evaluates
/// Jaccard and mean cell counts on each grid in `specs`.
pub fn metric_timeseries(
    radar_frames: &[PointCloud],
    lidar_frames: &[PointCloud],
    specs: &[GridSpec],
    tolerance_s: f64,
    opts: &SeriesOptions,
) -> Result<MetricSeries> {
    if specs.is_empty() {
        return Err(Error::Config("no grid specifications given".into()));
    }
    let mut used = vec![false; lidar_frames.len()];
    let mut frames = Vec::new();
    let mut unpaired_radar = 0;
    for radar in radar_frames {
        let Some((li, _)) =
            nearest(lidar_frames, radar.time_s).filter(|&(_, dt)| dt <= tolerance_s)
        else {
            unpaired_radar += 1;
            continue;
        };
        used[li] = true;
        let lidar = &lidar_frames[li];
        let mut cells = Vec::with_capacity(specs.len());
        for spec in specs {
            let gr = rasterize(&radar.points, spec);
            let gl = rasterize(&lidar.points, spec);
            cells.push(CellMetrics {
                cell_size: spec.cell_size,
                jaccard: jaccard(&gr, &gl)?,
                radar: density(&gr, &gl, opts)?,
                lidar: density(&gl, &gr, opts)?,
                zero_cells_radar: gr.zero_cells(),
                zero_cells_lidar: gl.zero_cells(),
                dropped_radar: gr.dropped,
                dropped_lidar: gl.dropped,
            });
        }
        frames.push(MetricFrame {
            time_s: radar.time_s,
            radar_frame: radar.frame,
            lidar_frame: lidar.frame,
            cells,
        });
    }
    if frames.is_empty() {
        return Err(Error::Empty(format!(
            "no radar frame has a lidar frame within {tolerance_s} s"
        )));
    }
    Ok(MetricSeries {
        frames,
        unpaired_radar,
        unpaired_lidar: used.iter().filter(|u| !**u).count(),
    })
}
