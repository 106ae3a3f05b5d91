use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use fmcwnet::io::read_metrics;
use fmcwnet::metrics::{boxplot_stats, BoxStats, MetricRow};
use serde::Serialize;

use crate::error::{io_at, CliError, CliResult};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Metrics CSV written by `compare`.
    #[arg(long)]
    pub metrics: PathBuf,
    /// Report file: JSON when the extension is `.json`, text otherwise.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub cell_size_m: f64,
    pub frames: usize,
    /// Mean count per m²; frames where it is undefined are left out.
    pub radar: Option<BoxStats>,
    pub lidar: Option<BoxStats>,
    pub jaccard: BoxStats,
    pub density_ratio: Option<BoxStats>,
    pub undefined_radar: usize,
    pub undefined_lidar: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameRatio {
    pub time_s: f64,
    pub cell_size_m: f64,
    /// Lidar over radar mean count, absent when either is undefined.
    pub density_ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub source: PathBuf,
    pub rows: usize,
    pub cells: Vec<CellReport>,
    pub ratios: Vec<FrameRatio>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn stats_of(values: impl Iterator<Item = f64>) -> Option<BoxStats> {
    let v: Vec<f64> = values.filter(|x| x.is_finite()).collect();
    boxplot_stats(&v).ok()
}

pub fn build(source: PathBuf, rows: &[MetricRow]) -> CliResult<Report> {
    // cell sizes in order of first appearance
    let mut sizes: Vec<f64> = Vec::new();
    for r in rows {
        if !sizes.iter().any(|s| s.to_bits() == r.cell_size_m.to_bits()) {
            sizes.push(r.cell_size_m);
        }
    }
    let mut cells = Vec::with_capacity(sizes.len());
    for size in sizes {
        let group: Vec<&MetricRow> = rows
            .iter()
            .filter(|r| r.cell_size_m.to_bits() == size.to_bits())
            .collect();
        let jaccard = boxplot_stats(&group.iter().map(|r| r.jaccard).collect::<Vec<_>>())?;
        cells.push(CellReport {
            cell_size_m: size,
            frames: group.len(),
            radar: stats_of(group.iter().map(|r| r.mean_count_radar)),
            lidar: stats_of(group.iter().map(|r| r.mean_count_lidar)),
            jaccard,
            density_ratio: stats_of(group.iter().map(|r| r.density_ratio())),
            undefined_radar: group.iter().filter(|r| r.mean_count_radar.is_nan()).count(),
            undefined_lidar: group.iter().filter(|r| r.mean_count_lidar.is_nan()).count(),
        });
    }
    let ratios = rows
        .iter()
        .map(|r| FrameRatio {
            time_s: r.time_s,
            cell_size_m: r.cell_size_m,
            density_ratio: finite(r.density_ratio()),
        })
        .collect();
    Ok(Report {
        source,
        rows: rows.len(),
        cells,
        ratios,
    })
}

pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} ({} rows)", report.source.display(), report.rows);
    for c in &report.cells {
        let _ = writeln!(s, "\ncell {} m, {} frames", c.cell_size_m, c.frames);
        let _ = writeln!(
            s,
            "  {:<12} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "", "min", "q1", "median", "q3", "max"
        );
        let lines = [
            ("radar /m²", c.radar),
            ("lidar /m²", c.lidar),
            ("jaccard", Some(c.jaccard)),
            ("lidar/radar", c.density_ratio),
        ];
        for (name, stats) in lines {
            match stats {
                Some(b) => {
                    let _ = writeln!(
                        s,
                        "  {name:<12} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                        b.min, b.q1, b.median, b.q3, b.max
                    );
                }
                None => {
                    let _ = writeln!(s, "  {name:<12} {:>10}", "undefined");
                }
            }
        }
        if c.undefined_radar + c.undefined_lidar > 0 {
            let _ = writeln!(
                s,
                "  undefined mean count: radar {}, lidar {}",
                c.undefined_radar, c.undefined_lidar
            );
        }
    }
    let _ = writeln!(s, "\nlidar/radar per frame");
    for r in &report.ratios {
        let v = r
            .density_ratio
            .map_or("undefined".to_string(), |x| format!("{x:.4}"));
        let _ = writeln!(s, "  t={} cell={} {v}", r.time_s, r.cell_size_m);
    }
    s
}

pub fn run(args: &ReportArgs, m: &mut RunManifest) -> CliResult<()> {
    m.input("metrics", &args.metrics);
    let rows = m.stage("load", || read_metrics(&args.metrics))?;
    if rows.is_empty() {
        return Err(CliError::empty(format!(
            "{}: no metric rows",
            args.metrics.display()
        )));
    }
    let report = build(args.metrics.clone(), &rows)?;
    let text = render_text(&report);
    let body = if args.out.extension().is_some_and(|e| e == "json") {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        text.clone()
    };
    m.stage("write", || {
        std::fs::write(&args.out, body).map_err(io_at(&args.out))
    })?;
    m.outputs_written = 1;
    print!("{text}");
    Ok(())
}
