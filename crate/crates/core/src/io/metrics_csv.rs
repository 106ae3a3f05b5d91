use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, FormatError, Result};
use crate::metrics::MetricRow;

pub const METRIC_COLUMNS: [&str; 7] = [
    "time_s",
    "cell_size_m",
    "jaccard",
    "mean_count_radar",
    "mean_count_lidar",
    "dropped_points_radar",
    "dropped_points_lidar",
];

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        v.to_string()
    }
}

pub fn write_metrics_to<W: Write>(rows: &[MetricRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::from(FormatError::Text(e.to_string()));
    w.write_record(METRIC_COLUMNS).map_err(err)?;
    for r in rows {
        w.write_record([
            num(r.time_s),
            num(r.cell_size_m),
            num(r.jaccard),
            num(r.mean_count_radar),
            num(r.mean_count_lidar),
            r.dropped_points_radar.to_string(),
            r.dropped_points_lidar.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics_from<R: Read>(input: R) -> Result<Vec<MetricRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r
        .headers()
        .map_err(|e| FormatError::Text(e.to_string()))?
        .clone();
    if headers.iter().map(str::trim).ne(METRIC_COLUMNS) {
        return Err(FormatError::Columns(format!(
            "expected columns {}, found {}",
            METRIC_COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        ))
        .into());
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| FormatError::Row {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |k: usize| {
            Error::from(FormatError::Row {
                line,
                message: format!("bad {} value {:?}", METRIC_COLUMNS[k], &rec[k]),
            })
        };
        let f = |k: usize| rec[k].trim().parse::<f64>().map_err(|_| bad(k));
        let u = |k: usize| rec[k].trim().parse::<usize>().map_err(|_| bad(k));
        rows.push(MetricRow {
            time_s: f(0)?,
            cell_size_m: f(1)?,
            jaccard: f(2)?,
            mean_count_radar: f(3)?,
            mean_count_lidar: f(4)?,
            dropped_points_radar: u(5)?,
            dropped_points_lidar: u(6)?,
        });
    }
    Ok(rows)
}

pub fn write_metrics(rows: &[MetricRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    File::create(path)
        .map_err(Error::from)
        .and_then(|f| write_metrics_to(rows, std::io::BufWriter::new(f)))
        .map_err(|e| e.at(path))
}

pub fn read_metrics(path: impl AsRef<Path>) -> Result<Vec<MetricRow>> {
    let path = path.as_ref();
    File::open(path)
        .map_err(Error::from)
        .and_then(|f| read_metrics_from(std::io::BufReader::new(f)))
        .map_err(|e| e.at(path))
}
