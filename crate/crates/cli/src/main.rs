//! `fmcwnet`: simulate radar/lidar captures, turn cubes into point clouds,
//! compare them on occupancy grids and summarise the result.
//!
//! Each stage reads and writes plain files, so the stages can be rerun or
//! swapped independently. Exit codes: 0 success, 1 I/O, 2 configuration,
//! 3 malformed data, 4 empty result.

mod compare;
mod error;
mod layout;
mod manifest;
mod process;
mod report;
mod simulate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fmcwnet::io::{write_network, write_scene};
use fmcwnet::scene::archetypes;
use fmcwnet::Network;

use error::{CliResult, Exit};
use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(
    name = "fmcwnet",
    version,
    about = "FMCW radar network simulation and point-cloud comparison"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize radar cubes and lidar clouds for a scene.
    Simulate(simulate::SimulateArgs),
    /// Turn every cube in a directory into a point cloud.
    Process(process::ProcessArgs),
    /// Fuse radar clouds per frame and compute grid metrics against the lidar.
    Compare(compare::CompareArgs),
    /// Summarise a metrics CSV as box-plot statistics.
    Report(report::ReportArgs),
    /// Write a built-in scene as TOML.
    Scene(SceneArgs),
    /// Write the built-in four-radar network as TOML.
    Network(NetworkArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Archetype {
    City,
    Vegetation,
}

#[derive(Debug, Args)]
struct SceneArgs {
    #[arg(long, value_enum)]
    archetype: Archetype,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct NetworkArgs {
    #[arg(long)]
    out: PathBuf,
}

/// Runs a pipeline stage and always leaves a manifest behind.
fn staged(
    name: &str,
    output: &Path,
    manifest_path: PathBuf,
    f: impl FnOnce(&mut RunManifest) -> CliResult<()>,
) -> CliResult<()> {
    let mut m = RunManifest::new(name, output);
    let result = f(&mut m);
    if let Err(e) = &result {
        m.exit_code = e.exit.code();
        m.error = Some(e.message.clone());
    }
    m.write(&manifest_path);
    result
}

fn create_parent(file: &Path) -> CliResult<()> {
    match file.parent().filter(|d| !d.as_os_str().is_empty()) {
        Some(dir) => layout::create_dir(dir),
        None => Ok(()),
    }
}

/// `metrics.csv` → `metrics.manifest.json`
fn sibling_manifest(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => {
            layout::create_dir(&a.out)?;
            staged("simulate", &a.out, a.out.join("manifest.json"), |m| {
                simulate::run(&a, m)
            })
        }
        Command::Process(a) => {
            layout::create_dir(&a.out)?;
            staged("process", &a.out, a.out.join("manifest.json"), |m| {
                process::run(&a, m)
            })
        }
        Command::Compare(a) => {
            create_parent(&a.out)?;
            staged("compare", &a.out, sibling_manifest(&a.out), |m| {
                compare::run(&a, m)
            })
        }
        Command::Report(a) => {
            create_parent(&a.out)?;
            staged("report", &a.out, sibling_manifest(&a.out), |m| {
                report::run(&a, m)
            })
        }
        Command::Scene(a) => {
            let scene = match a.archetype {
                Archetype::City => archetypes::city(),
                Archetype::Vegetation => archetypes::vegetation(),
            };
            Ok(write_scene(&scene, &a.out)?)
        }
        Command::Network(a) => Ok(write_network(&Network::four_corner(), &a.out)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(Exit::Ok.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit.code())
        }
    }
}
