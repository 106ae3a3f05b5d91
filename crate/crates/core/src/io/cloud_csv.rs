//! Point clouds as CSV, one point per row.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::cloud::{PointCloud, RadarPoint};
use crate::error::{Error, FormatError, Result};

pub const CLOUD_COLUMNS: [&str; 8] = [
    "frame",
    "time_s",
    "sensor_id",
    "x_m",
    "y_m",
    "z_m",
    "v_r_mps",
    "power_db",
];

pub fn write_cloud_to<W: Write>(cloud: &PointCloud, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CLOUD_COLUMNS).map_err(csv_err)?;
    let (frame, time) = (cloud.frame.to_string(), cloud.time_s.to_string());
    for p in &cloud.points {
        w.write_record([
            frame.as_str(),
            time.as_str(),
            &p.sensor_id.to_string(),
            &p.x.to_string(),
            &p.y.to_string(),
            &p.z.to_string(),
            &p.v_r.to_string(),
            &p.power_db.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a cloud. Frame and time come from the rows and must agree between
/// them; a header-only file yields an empty cloud with frame 0 at time 0.
/// The cloud's sensor id is taken from the first row.
pub fn read_cloud_from<R: Read>(input: R) -> Result<PointCloud> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    let mut index = [usize::MAX; CLOUD_COLUMNS.len()];
    for (i, h) in headers.iter().enumerate() {
        let Some(k) = CLOUD_COLUMNS.iter().position(|c| *c == h.trim()) else {
            return Err(FormatError::Columns(format!("unknown column {h:?}")).into());
        };
        if index[k] != usize::MAX {
            return Err(FormatError::Columns(format!("duplicate column {h:?}")).into());
        }
        index[k] = i;
    }
    if let Some(k) = index.iter().position(|&i| i == usize::MAX) {
        return Err(FormatError::Columns(format!("missing column {:?}", CLOUD_COLUMNS[k])).into());
    }

    let mut cloud = PointCloud::default();
    let mut record = csv::StringRecord::new();
    let mut first = true;
    loop {
        let more = r.read_record(&mut record).map_err(csv_err)?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line());
        let field = |k: usize| record.get(index[k]).unwrap_or("").trim();
        let bad = |k: usize| {
            Error::from(FormatError::Row {
                line,
                message: format!("bad {} value {:?}", CLOUD_COLUMNS[k], field(k)),
            })
        };
        let frame: u64 = field(0).parse().map_err(|_| bad(0))?;
        let time: f64 = field(1).parse().map_err(|_| bad(1))?;
        let sensor: u16 = field(2).parse().map_err(|_| bad(2))?;
        let mut v = [0.0f64; 5];
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = field(3 + j).parse().map_err(|_| bad(3 + j))?;
        }
        if first {
            cloud.frame = frame;
            cloud.time_s = time;
            cloud.sensor_id = sensor;
            first = false;
        } else if frame != cloud.frame || time.to_bits() != cloud.time_s.to_bits() {
            return Err(FormatError::Row {
                line,
                message: "frame or time differs from the first row".into(),
            }
            .into());
        }
        cloud.points.push(RadarPoint::from_cartesian(
            v[0], v[1], v[2], v[3], v[4], sensor,
        ));
    }
    Ok(cloud)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => FormatError::Row {
            line,
            message: format!("{other:?}"),
        }
        .into(),
    }
}

pub fn write_cloud(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    File::create(path)
        .map_err(Error::from)
        .and_then(|f| write_cloud_to(cloud, std::io::BufWriter::new(f)))
        .map_err(|e| e.at(path))
}

pub fn read_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    File::open(path)
        .map_err(Error::from)
        .and_then(|f| read_cloud_from(std::io::BufReader::new(f)))
        .map_err(|e| e.at(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_string(cloud: &PointCloud) -> String {
        let mut buf = Vec::new();
        write_cloud_to(cloud, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_cloud_is_header_only() {
        let text = to_string(&PointCloud::new(4, 0.2, 1));
        assert_eq!(
            text,
            "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db\n"
        );
        let back = read_cloud_from(text.as_bytes()).unwrap();
        assert!(back.is_empty());
    }

    #[test]
    fn three_points_four_lines() {
        let mut c = PointCloud::new(2, 0.1, 3);
        for k in 0..3 {
            c.points.push(RadarPoint::from_cartesian(
                k as f64, 1.5, 0.0, -0.25, 12.0, 3,
            ));
        }
        let text = to_string(&c);
        assert_eq!(text.lines().count(), 4);
        let back = read_cloud_from(text.as_bytes()).unwrap();
        assert_eq!(back.frame, 2);
        assert_eq!(back.time_s, 0.1);
        assert_eq!(back.points, c.points);
    }

    #[test]
    fn unknown_and_missing_columns() {
        let text = "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db,extra\n";
        assert!(matches!(
            read_cloud_from(text.as_bytes()),
            Err(Error::Format(FormatError::Columns(_)))
        ));
        let text = "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps\n";
        assert!(read_cloud_from(text.as_bytes()).is_err());
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db\n\
                    0,0,1,1,2,3,0,0\n\
                    0,0,1,1,oops,3,0,0\n";
        match read_cloud_from(text.as_bytes()) {
            Err(Error::Format(FormatError::Row { line, .. })) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn short_row_is_rejected() {
        let text = "frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db\n0,0,1,1\n";
        assert!(matches!(
            read_cloud_from(text.as_bytes()),
            Err(Error::Format(FormatError::Row { line: 2, .. }))
        ));
    }
}
