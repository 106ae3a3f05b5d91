use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use fmcwnet::config::validate;
use fmcwnet::io::{read_network, read_scene, write_cloud, write_cube};
use fmcwnet::network::simulate_frame;
use fmcwnet::Error;
use rayon::prelude::*;

use crate::error::CliResult;
use crate::layout::{lidar_stem, radar_stem, CLOUD_EXT, CUBE_EXT};
use crate::manifest::{ms_since, FileTiming, RunManifest};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene TOML (see `fmcwnet scene`).
    #[arg(long)]
    pub scene: PathBuf,
    /// Sensor network TOML: shared waveform, radar poses and the lidar.
    #[arg(long)]
    pub sensors: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub frames: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for cubes, lidar clouds and the manifest.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &SimulateArgs, m: &mut RunManifest) -> CliResult<()> {
    m.input("scene", &args.scene);
    m.input("sensors", &args.sensors);
    m.seed = Some(args.seed);

    let (scene, net) = m.stage("load", || -> CliResult<_> {
        let scene = read_scene(&args.scene)?;
        let net = read_network(&args.sensors)?;
        let violations = validate(&net.config, &net.geometry);
        if !violations.is_empty() {
            return Err(Error::InvalidConfig(violations).at(&args.sensors).into());
        }
        Ok((scene, net))
    })?;
    log::info!(
        "{} radars, lidar {}, {} frames at {} Hz",
        net.radars.len(),
        if net.lidar.is_some() { "on" } else { "off" },
        args.frames,
        net.config.frame_rate
    );

    let out = &args.out;
    let results: Vec<CliResult<(f64, usize)>> = m.stage("simulate", || {
        (0..args.frames)
            .into_par_iter()
            .map(|frame| {
                let t = Instant::now();
                let cap = simulate_frame(&scene, &net, frame, args.seed)?;
                for cube in &cap.cubes {
                    let name = format!("{}.{CUBE_EXT}", radar_stem(cube.sensor_id, frame));
                    write_cube(cube, out.join(name))?;
                }
                if let Some(lidar) = &cap.lidar {
                    write_cloud(
                        lidar,
                        out.join(format!("{}.{CLOUD_EXT}", lidar_stem(frame))),
                    )?;
                }
                Ok((
                    ms_since(t),
                    cap.cubes.len() + usize::from(cap.lidar.is_some()),
                ))
            })
            .collect()
    });
    for (frame, r) in results.into_iter().enumerate() {
        let (ms, written) = r?;
        m.items.push(FileTiming {
            file: format!("frame {frame}"),
            ms,
        });
        m.outputs_written += written;
    }
    log::info!("wrote {} files to {}", m.outputs_written, out.display());
    Ok(())
}
