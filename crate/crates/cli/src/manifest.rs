//! `manifest.json`: what a run read, wrote and how long each part took.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub name: String,
    pub ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileTiming {
    pub file: String,
    pub ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub started_unix_ms: u128,
    /// Named input paths (scene, sensors, directories, ...).
    pub inputs: BTreeMap<String, PathBuf>,
    pub seed: Option<u64>,
    pub output: PathBuf,
    pub stages: Vec<StageTiming>,
    /// Per-frame or per-file wall time of the parallel part.
    pub items: Vec<FileTiming>,
    pub outputs_written: usize,
    pub exit_code: u8,
    pub error: Option<String>,
    #[serde(skip)]
    clock: Option<Instant>,
}

impl RunManifest {
    pub fn new(command: &str, output: &Path) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_millis()),
            inputs: BTreeMap::new(),
            seed: None,
            output: output.to_path_buf(),
            stages: Vec::new(),
            items: Vec::new(),
            outputs_written: 0,
            exit_code: 0,
            error: None,
            clock: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, name: &str, path: &Path) {
        self.inputs.insert(name.to_string(), path.to_path_buf());
    }

    /// Runs `f` and records its wall time as stage `name`.
    pub fn stage<R>(&mut self, name: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.stages.push(StageTiming {
            name: name.to_string(),
            ms: ms_since(t),
        });
        r
    }

    pub fn write(&mut self, path: &Path) {
        if let Some(t) = self.clock {
            self.stages.push(StageTiming {
                name: "total".into(),
                ms: ms_since(t),
            });
        }
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            log::warn!("could not write {}: {e}", path.display());
        }
    }
}

pub fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}
