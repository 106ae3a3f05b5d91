use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use fmcwnet::dsp::{process_frame, ProcessingParams, Window};
use fmcwnet::io::{read_cube, read_processing_params, write_cloud};
use fmcwnet::PointCloud;
use rayon::prelude::*;

use crate::error::CliResult;
use crate::layout::{list, parse_stem, stem_of, CLOUD_EXT, CUBE_EXT};
use crate::manifest::{ms_since, FileTiming, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Hann,
    Rectangular,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Hann => Window::Hann,
            WindowArg::Rectangular => Window::Rectangular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Precision {
    #[default]
    F32,
    F64,
}

#[derive(Debug, Args)]
pub struct ProcessArgs {
    /// Directory of `.rdc` cube files.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Directory for the point-cloud CSVs (one per cube, same stem).
    #[arg(long)]
    pub out: PathBuf,
    /// TOML with processing parameters; flags below override it.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// CFAR false-alarm probability per cell.
    #[arg(long)]
    pub pfa: Option<f64>,
    #[arg(long, value_enum)]
    pub window: Option<WindowArg>,
    /// Angle FFT length.
    #[arg(long)]
    pub zero_pad: Option<usize>,
    /// Radius in cells for merging neighbouring CFAR hits (0 disables).
    #[arg(long)]
    pub merge_radius: Option<usize>,
    /// Keep detections whose DDMA transmitter assignment is uncertain.
    #[arg(long)]
    pub keep_ambiguous: bool,
    #[arg(long, value_enum, default_value_t = Precision::F32)]
    pub precision: Precision,
}

impl ProcessArgs {
    fn params(&self) -> CliResult<ProcessingParams> {
        let mut p = match &self.params {
            Some(path) => read_processing_params(path)?,
            None => ProcessingParams::default(),
        };
        if let Some(pfa) = self.pfa {
            p.cfar.pfa = pfa;
        }
        if let Some(w) = self.window {
            p.window = w.into();
        }
        if let Some(z) = self.zero_pad {
            p.zero_pad = z;
        }
        if let Some(r) = self.merge_radius {
            p.cfar.merge_radius = r;
        }
        p.keep_ambiguous |= self.keep_ambiguous;
        Ok(p)
    }
}

pub fn run(args: &ProcessArgs, m: &mut RunManifest) -> CliResult<()> {
    m.input("in", &args.input);
    if let Some(p) = &args.params {
        m.input("params", p);
    }
    let params = args.params()?;
    let cubes = m.stage("list", || list(&args.input, CUBE_EXT))?;
    if cubes.is_empty() {
        log::warn!("no .{CUBE_EXT} files in {}", args.input.display());
    }

    let results: Vec<CliResult<f64>> = m.stage("process", || {
        cubes
            .par_iter()
            .map(|path| {
                let t = Instant::now();
                let cloud = process_file(path, &params, args.precision)?;
                write_cloud(
                    &cloud,
                    args.out.join(format!("{}.{CLOUD_EXT}", stem_of(path))),
                )?;
                Ok(ms_since(t))
            })
            .collect()
    });
    for (path, r) in cubes.iter().zip(results) {
        m.items.push(FileTiming {
            file: stem_of(path).to_string(),
            ms: r?,
        });
        m.outputs_written += 1;
    }
    Ok(())
}

fn process_file(
    path: &Path,
    params: &ProcessingParams,
    precision: Precision,
) -> CliResult<PointCloud> {
    let cube = read_cube(path)?;
    let mut cloud = match precision {
        Precision::F32 => process_frame::<f32>(&cube, params),
        Precision::F64 => process_frame::<f64>(&cube, params),
    }
    .map_err(|e| e.at(path))?;
    cloud.frame = match parse_stem(stem_of(path)) {
        Some(s) => s.frame,
        None => (cube.timestamp_s() * cube.config.frame_rate).round() as u64,
    };
    log::debug!("{}: {} points", path.display(), cloud.len());
    Ok(cloud)
}
