//! End-to-end tests driving the compiled `oft` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Scratch directory removed on drop so failed assertions leave it behind
/// only for the failing test run.
struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("oft-cli-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn oft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oft"))
        .args(args)
        .env_remove("OFT_THREADS")
        .output()
        .expect("failed to launch the oft binary")
}

fn oft_ok(args: &[&str]) -> String {
    let out = oft(args);
    assert!(
        out.status.success(),
        "oft {args:?} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_raw(path: &Path) -> Vec<f32> {
    let bytes = std::fs::read(path).unwrap();
    assert_eq!(bytes.len() % 4, 0);
    bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect()
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn synth_enhance_threshold_roundtrip() {
    let dir = Scratch::new("roundtrip");
    let demo = dir.path("demo");
    oft_ok(&["synth", "-o", &s(&demo), "--dims", "24", "--seed", "3"]);
    for name in ["demo.json", "demo.raw", "demo.truth.json", "demo.truth.raw"] {
        assert!(dir.path(name).exists(), "{name} missing");
    }

    let enh = dir.path("enh");
    oft_ok(&[
        "enhance",
        &s(&dir.path("demo.json")),
        "-o",
        &s(&enh),
        "--epsilon",
        "4",
        "--directions",
        "12",
    ]);
    let enhanced = read_raw(&dir.path("enh.raw"));
    assert_eq!(enhanced.len(), 24 * 24 * 24);
    assert!(enhanced.iter().all(|v| v.is_finite() && *v >= 0.0));
    assert!(enhanced.iter().any(|&v| v > 0.0));

    let manifest = std::fs::read_to_string(dir.path("enh.manifest.json")).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(manifest["tool"], "oft");
    assert_eq!(manifest["command"], "enhance");
    assert_eq!(manifest["config"]["directions"], 12);
    for output in manifest["outputs"].as_array().unwrap() {
        assert!(
            Path::new(output.as_str().unwrap()).exists(),
            "manifest lists missing output {output}"
        );
    }

    let binary = dir.path("bin");
    let stdout = oft_ok(&[
        "threshold",
        &s(&dir.path("enh.json")),
        "-o",
        &s(&binary),
        "--percentile",
        "99",
    ]);
    assert!(stdout.contains("kept"));
    let bin = read_raw(&dir.path("bin.raw"));
    let kept = bin.iter().filter(|&&v| v == 1.0).count();
    assert!(bin.iter().all(|&v| v == 0.0 || v == 1.0));
    // Nearest-rank at the 99th percentile keeps at most 1% of the voxels.
    assert!(kept > 0 && kept <= bin.len() / 100 + 1, "kept {kept}");
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = Scratch::new("threads");
    let demo = dir.path("demo");
    oft_ok(&["synth", "-o", &s(&demo), "--dims", "20,20,12", "--seed", "11"]);

    let one = dir.path("one");
    let eight = dir.path("eight");
    for (out, threads) in [(&one, "1"), (&eight, "8")] {
        oft_ok(&[
            "enhance",
            &s(&dir.path("demo.json")),
            "-o",
            &s(out),
            "--epsilon",
            "3",
            "--directions",
            "14",
            "--threads",
            threads,
        ]);
    }
    let a = std::fs::read(dir.path("one.raw")).unwrap();
    let b = std::fs::read(dir.path("eight.raw")).unwrap();
    assert_eq!(a, b, "outputs differ across thread counts");
}

#[test]
fn rerun_reproduces_outputs_byte_for_byte() {
    let dir = Scratch::new("rerun");
    oft_ok(&["synth", "-o", &s(&dir.path("demo")), "--dims", "18", "--seed", "5"]);
    oft_ok(&[
        "enhance",
        &s(&dir.path("demo.json")),
        "-o",
        &s(&dir.path("enh")),
        "--epsilon",
        "3.5",
        "--directions",
        "10",
        "--normalize",
    ]);
    let first = std::fs::read(dir.path("enh.raw")).unwrap();
    std::fs::remove_file(dir.path("enh.raw")).unwrap();

    oft_ok(&["rerun", &s(&dir.path("enh.manifest.json"))]);
    let second = std::fs::read(dir.path("enh.raw")).unwrap();
    assert_eq!(first, second, "rerun changed the output bytes");

    // Replaying the synth manifest must also reproduce its volume exactly.
    let demo_bytes = std::fs::read(dir.path("demo.raw")).unwrap();
    std::fs::remove_file(dir.path("demo.raw")).unwrap();
    oft_ok(&["rerun", &s(&dir.path("demo.manifest.json"))]);
    assert_eq!(demo_bytes, std::fs::read(dir.path("demo.raw")).unwrap());
}

#[test]
fn skeleton_denoise_merges_and_rasterizes() {
    let dir = Scratch::new("skeleton");
    let graph = r#"{"nodes":[{"id":4,"xyz":[2.0,2.0,0.0]},{"id":9,"xyz":[2.6,2.0,0.0]},{"id":7,"xyz":[9.0,2.0,0.0]}],"edges":[[4,7],[9,7]]}"#;
    std::fs::write(dir.path("skel.json"), graph).unwrap();

    let stdout = oft_ok(&[
        "skeleton-denoise",
        &s(&dir.path("skel.json")),
        "-o",
        &s(&dir.path("clean.json")),
        "--distance",
        "1.0",
        "--rasterize",
        "12,6,1",
        "--raster-output",
        &s(&dir.path("mask")),
    ]);
    assert!(stdout.contains("down to 2 nodes / 1 edges"), "stdout: {stdout}");

    let clean: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path("clean.json")).unwrap()).unwrap();
    let nodes = clean["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 2);
    // Merged pair keeps the smaller id and moves to the centroid.
    assert_eq!(nodes[0]["id"], 4);
    assert!((nodes[0]["xyz"][0].as_f64().unwrap() - 2.3).abs() < 1e-12);

    let mask = read_raw(&dir.path("mask.raw"));
    let lit = mask.iter().filter(|&&v| v == 1.0).count();
    // One straight segment from x=2 to x=9 at y=2: eight voxels.
    assert_eq!(lit, 8, "rasterized voxel count");
}

#[test]
fn info_reports_stats_and_writes_pgm() {
    let dir = Scratch::new("info");
    oft_ok(&["synth", "-o", &s(&dir.path("demo")), "--dims", "16", "--seed", "1"]);
    let stdout = oft_ok(&[
        "info",
        &s(&dir.path("demo.json")),
        "--pgm",
        &s(&dir.path("mid.pgm")),
    ]);
    assert!(stdout.contains("dims     16x16x16"));
    assert!(stdout.contains("voxels   4096"));
    let pgm = std::fs::read(dir.path("mid.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n16 16\n255\n"));
    assert_eq!(pgm.len(), "P5\n16 16\n255\n".len() + 16 * 16);
}

#[test]
fn bench_prints_all_stage_rates() {
    let stdout = oft_ok(&["bench", "--dims", "12", "--directions", "6", "--epsilon", "3"]);
    for needle in ["line sweep", "alignment sweep", "combine", "total", "voxels/s"] {
        assert!(stdout.contains(needle), "missing {needle:?} in: {stdout}");
    }
}

#[test]
fn bad_invocations_fail_with_nonzero_exit() {
    let dir = Scratch::new("errors");

    // Missing input file.
    let out = oft(&[
        "enhance",
        &s(&dir.path("nope.json")),
        "-o",
        &s(&dir.path("x")),
        "--epsilon",
        "4",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    // --value and --percentile are mutually exclusive (rejected by the parser).
    std::fs::write(dir.path("t.json"), "{}").unwrap();
    let out = oft(&[
        "threshold",
        &s(&dir.path("t.json")),
        "-o",
        &s(&dir.path("y")),
        "--value",
        "0.5",
        "--percentile",
        "99",
    ]);
    assert!(!out.status.success());

    // Threshold needs one of the two selectors.
    let out = oft(&[
        "threshold",
        &s(&dir.path("t.json")),
        "-o",
        &s(&dir.path("y")),
    ]);
    assert!(!out.status.success());

    // Zero threads is rejected.
    let out = oft(&["bench", "--dims", "8", "--threads", "0"]);
    assert!(!out.status.success());
}
