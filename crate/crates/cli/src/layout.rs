//! File naming inside stage directories.
//!
//! Radar files are `s{id}_f{frame}` and lidar files `lidar_f{frame}`, with the
//! frame zero-padded to four digits. The name carries the frame and sensor so
//! that a cloud file without any rows still says where it belongs.

use std::path::{Path, PathBuf};

use crate::error::{io_at, CliResult};

pub const CUBE_EXT: &str = "rdc";
pub const CLOUD_EXT: &str = "csv";

pub fn radar_stem(sensor: u16, frame: u64) -> String {
    format!("s{sensor}_f{frame:04}")
}

pub fn lidar_stem(frame: u64) -> String {
    format!("lidar_f{frame:04}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stem {
    /// `None` for lidar files.
    pub sensor: Option<u16>,
    pub frame: u64,
}

pub fn parse_stem(stem: &str) -> Option<Stem> {
    let (head, frame) = stem.rsplit_once("_f")?;
    let frame = frame.parse().ok()?;
    let sensor = match head {
        "lidar" => None,
        s => Some(s.strip_prefix('s')?.parse().ok()?),
    };
    Some(Stem { sensor, frame })
}

/// Files in `dir` with extension `ext`, sorted by name. Other files are ignored.
pub fn list(dir: &Path, ext: &str) -> CliResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_at(dir))? {
        let path = entry.map_err(io_at(dir))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub fn stem_of(path: &Path) -> &str {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("")
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(io_at(dir))
}
