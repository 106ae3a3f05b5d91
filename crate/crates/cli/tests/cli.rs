use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const RADAR: &str = r#"
[radar]
preset = "medium-range"
"#;

const TWO_RADARS: &str = r#"
[[sensor]]
id = 1
x = 5.0
y = 1.2
z = 1.5
yaw_deg = 30.0

[[sensor]]
id = 2
x = 5.0
y = -1.2
z = 1.5
yaw_deg = -30.0
"#;

const LIDAR: &str = r#"
[lidar]
x = 0.0
y = 0.0
z = 3.0

[lidar.beams]
azimuth_step_deg = 1.0
elevation_rays = 4
"#;

/// A quay wall and two moored boats.
const SCENE: &str = r#"
[[scatterer]]
position = [25.0, 6.0, 1.5]
reflectivity = 2.0

[[scatterer]]
position = [30.0, -8.0, 1.5]
velocity = [-1.0, 0.0, 0.0]
reflectivity = 2.0

[[polyline]]
vertices = [[15.0, 20.0], [45.0, 20.0]]
height = 3.0
"#;

fn fmcwnet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmcwnet"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        let w = Work {
            dir: tempfile::tempdir().unwrap(),
        };
        w.write("scene.toml", SCENE);
        w.write("two.toml", &format!("{RADAR}{TWO_RADARS}{LIDAR}"));
        w
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        fs::write(self.path(name), text).unwrap();
    }

    fn run(&self, args: &[&str]) -> Output {
        fmcwnet(args, self.dir.path())
    }

    fn ok(&self, args: &[&str]) -> Output {
        let out = self.run(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        out
    }

    fn simulate(&self, net: &str, frames: u32, seed: u32, out: &str) {
        self.ok(&[
            "simulate",
            "--scene",
            "scene.toml",
            "--sensors",
            net,
            "--frames",
            &frames.to_string(),
            "--seed",
            &seed.to_string(),
            "--out",
            out,
        ]);
    }
}

#[test]
fn zero_frames_writes_no_cubes() {
    let w = Work::new();
    w.simulate("two.toml", 0, 1, "raw");
    assert!(files(&w.path("raw"), "rdc").is_empty());
    assert!(w.path("raw/manifest.json").is_file());
}

#[test]
fn four_sensors_ten_frames_give_forty_cubes() {
    let w = Work::new();
    w.ok(&["network", "--out", "net.toml"]);
    w.simulate("net.toml", 10, 3, "raw");
    assert_eq!(files(&w.path("raw"), "rdc").len(), 40);
    assert_eq!(files(&w.path("raw"), "csv").len(), 10);
}

#[test]
fn invalid_config_exits_2() {
    let w = Work::new();
    // 128 chirps do not split into 3 DDMA sub-bands
    w.write("bad.toml", &format!("{RADAR}n_chirps = 128\n{TWO_RADARS}"));
    let out = w.run(&[
        "simulate",
        "--scene",
        "scene.toml",
        "--sensors",
        "bad.toml",
        "--out",
        "raw",
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let manifest = fs::read_to_string(w.path("raw/manifest.json")).unwrap();
    assert!(manifest.contains("\"exit_code\": 2"));

    w.write("typo.toml", "[radar]\nbandwith_hz = 1e9\n");
    let out = w.run(&[
        "simulate",
        "--scene",
        "scene.toml",
        "--sensors",
        "typo.toml",
        "--out",
        "raw",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn simulate_is_deterministic() {
    let w = Work::new();
    w.simulate("two.toml", 3, 42, "a");
    w.simulate("two.toml", 3, 42, "b");
    w.simulate("two.toml", 3, 43, "c");
    let names: Vec<_> = fs::read_dir(w.path("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n != "manifest.json")
        .collect();
    assert_eq!(names.len(), 9);
    let mut differs = false;
    for n in names {
        let a = fs::read(w.path("a").join(&n)).unwrap();
        assert_eq!(a, fs::read(w.path("b").join(&n)).unwrap(), "{n:?}");
        differs |= a != fs::read(w.path("c").join(&n)).unwrap();
    }
    assert!(differs, "a different seed should change the data");
}

#[test]
fn process_empty_directory_is_fine() {
    let w = Work::new();
    fs::create_dir(w.path("none")).unwrap();
    w.ok(&["process", "--in", "none", "--out", "clouds"]);
    assert!(files(&w.path("clouds"), "csv").is_empty());
    assert!(w.path("clouds/manifest.json").is_file());
}

#[test]
fn single_target_cube_gives_one_point() {
    let w = Work::new();
    // one radar at the origin, about 20 dB per sample on the target
    w.write(
        "one.toml",
        &format!("noise_sigma = 2.5e-4\n{RADAR}\n[[sensor]]\nid = 1\nx = 0.0\ny = 0.0\n"),
    );
    let (s, c) = 20f64.to_radians().sin_cos();
    w.write(
        "target.toml",
        &format!(
            "[[scatterer]]\nposition = [{}, {}, 0.0]\nvelocity = [{}, {}, 0.0]\n",
            20.0 * c,
            20.0 * s,
            3.0 * c,
            3.0 * s
        ),
    );
    w.ok(&[
        "simulate",
        "--scene",
        "target.toml",
        "--sensors",
        "one.toml",
        "--frames",
        "1",
        "--out",
        "raw",
    ]);
    w.ok(&["process", "--in", "raw", "--out", "clouds", "--pfa", "1e-6"]);
    let csv = fs::read_to_string(w.path("clouds/s1_f0000.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 1, "{csv}");
    let f: Vec<f64> = rows[0].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((f[3].hypot(f[4]) - 20.0).abs() < 0.5, "{csv}");
    assert!((f[6] - 3.0).abs() < 0.2, "{csv}");
}

#[test]
fn corrupted_cube_exits_3_and_names_file() {
    let w = Work::new();
    w.simulate("two.toml", 1, 1, "raw");
    let victim = w.path("raw/s2_f0000.rdc");
    let bytes = fs::read(&victim).unwrap();
    fs::write(&victim, &bytes[..bytes.len() / 2]).unwrap();
    let out = w.run(&["process", "--in", "raw", "--out", "clouds"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("s2_f0000.rdc"), "{}", stderr(&out));

    fs::write(&victim, b"JUNKJUNKJUNK").unwrap();
    let out = w.run(&["process", "--in", "raw", "--out", "clouds"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("s2_f0000.rdc"));
}

fn jaccard_column(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn identical_inputs_have_unit_similarity() {
    let w = Work::new();
    w.simulate("two.toml", 3, 5, "raw");
    w.ok(&[
        "compare",
        "--radar",
        "raw",
        "--lidar",
        "raw",
        "--extrinsics",
        "two.toml",
        "--out",
        "m.csv",
    ]);
    let csv = fs::read_to_string(w.path("m.csv")).unwrap();
    let j = jaccard_column(&csv);
    assert_eq!(j.len(), 3 * 4);
    assert!(j.iter().all(|&x| x == 1.0), "{csv}");
}

#[test]
fn compare_rows_follow_paired_frames() {
    let w = Work::new();
    w.simulate("two.toml", 4, 8, "raw");
    w.ok(&["process", "--in", "raw", "--out", "clouds"]);
    // drop one lidar frame: its radar frame goes unpaired
    fs::remove_file(w.path("raw/lidar_f0002.csv")).unwrap();
    w.ok(&[
        "compare",
        "--radar",
        "clouds",
        "--lidar",
        "raw",
        "--extrinsics",
        "two.toml",
        "--cell-size",
        "2,1",
        "--out",
        "out/m.csv",
    ]);
    let csv = fs::read_to_string(w.path("out/m.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2, "{csv}");
    assert!(w.path("out/m.manifest.json").is_file());
}

#[test]
fn compare_without_lidar_exits_4() {
    let w = Work::new();
    w.simulate("two.toml", 1, 1, "raw");
    w.ok(&["process", "--in", "raw", "--out", "clouds"]);
    fs::create_dir(w.path("empty")).unwrap();
    let out = w.run(&[
        "compare",
        "--radar",
        "clouds",
        "--lidar",
        "empty",
        "--extrinsics",
        "two.toml",
        "--out",
        "m.csv",
    ]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn compare_rejects_unknown_sensor() {
    let w = Work::new();
    w.simulate("two.toml", 1, 1, "raw");
    w.ok(&["process", "--in", "raw", "--out", "clouds"]);
    w.write(
        "one.toml",
        &format!("{RADAR}\n[[sensor]]\nid = 1\nx = 0.0\ny = 0.0\n"),
    );
    let out = w.run(&[
        "compare",
        "--radar",
        "clouds",
        "--lidar",
        "raw",
        "--extrinsics",
        "one.toml",
        "--out",
        "m.csv",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("sensor 2"));
}

const HEADER: &str =
    "time_s,cell_size_m,jaccard,mean_count_radar,mean_count_lidar,dropped_points_radar,dropped_points_lidar\n";

#[test]
fn report_single_row_is_degenerate() {
    let w = Work::new();
    w.write("m.csv", &format!("{HEADER}0.05,1,0.25,0.5,2,0,0\n"));
    w.ok(&["report", "--metrics", "m.csv", "--out", "r.json"]);
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(w.path("r.json")).unwrap()).unwrap();
    let cell = &r["cells"][0];
    for key in ["min", "q1", "median", "q3", "max"] {
        assert_eq!(cell["jaccard"][key], 0.25);
        assert_eq!(cell["density_ratio"][key], 4.0);
    }
}

#[test]
fn report_errors() {
    let w = Work::new();
    let out = w.run(&["report", "--metrics", "missing.csv", "--out", "r.txt"]);
    assert_eq!(code(&out), 1);
    w.write("empty.csv", HEADER);
    let out = w.run(&["report", "--metrics", "empty.csv", "--out", "r.txt"]);
    assert_eq!(code(&out), 4);
    w.write("bad.csv", "time_s,jaccard\n0,1\n");
    let out = w.run(&["report", "--metrics", "bad.csv", "--out", "r.txt"]);
    assert_eq!(code(&out), 3);
}

fn full_run(w: &Work, tag: &str) -> Vec<(String, Vec<u8>)> {
    let raw = format!("{tag}/raw");
    let clouds = format!("{tag}/clouds");
    let metrics = format!("{tag}/metrics.csv");
    let report = format!("{tag}/report.json");
    w.simulate("net.toml", 3, 11, &raw);
    w.ok(&["process", "--in", &raw, "--out", &clouds]);
    w.ok(&[
        "compare",
        "--radar",
        &clouds,
        "--lidar",
        &raw,
        "--extrinsics",
        "net.toml",
        "--out",
        &metrics,
    ]);
    w.ok(&["report", "--metrics", &metrics, "--out", &report]);
    let mut out = Vec::new();
    for dir in [&raw, &clouds] {
        for f in fs::read_dir(w.path(dir)).unwrap() {
            let p = f.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            if name != "manifest.json" {
                out.push((
                    format!("{dir}/{name}").replacen(tag, "", 1),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.push(("metrics".into(), fs::read(w.path(&metrics)).unwrap()));
    let rep = String::from_utf8(fs::read(w.path(&report)).unwrap()).unwrap();
    // the report names its source path, which differs between the two runs
    out.push(("report".into(), rep.replace(tag, "").into_bytes()));
    out.sort();
    out
}

#[test]
fn city_pipeline_is_reproducible_and_radar_is_sparser() {
    let w = Work::new();
    w.ok(&["scene", "--archetype", "city", "--out", "scene.toml"]);
    w.ok(&["network", "--out", "net.toml"]);
    let a = full_run(&w, "one");
    let b = full_run(&w, "two");
    assert_eq!(a.len(), b.len());
    for ((na, da), (nb, db)) in a.iter().zip(&b) {
        assert_eq!(na, nb);
        assert!(da == db, "{na} differs");
    }

    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(w.path("one/report.json")).unwrap()).unwrap();
    let ratios = r["ratios"].as_array().unwrap();
    assert_eq!(ratios.len(), 3 * 4);
    assert!(
        ratios
            .iter()
            .all(|x| x["density_ratio"].as_f64().unwrap() > 1.0),
        "{ratios:?}"
    );

    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(w.path("one/raw/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(m["seed"], 11);
    assert_eq!(m["outputs_written"], 15);
    let timings = m["stages"]
        .as_array()
        .unwrap()
        .iter()
        .chain(m["items"].as_array().unwrap());
    assert!(timings
        .map(|t| t["ms"].as_f64().unwrap())
        .all(|ms| ms >= 0.0));
}
