//! The command surface as scripts see it: subcommands, file formats, and
//! the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

use bravo_eval::core::{ConfidenceMap, SubsetKind};
use bravo_eval::pngio::{read_conf_png, write_conf_png};
use bravo_eval::tools::{
    read_probmap, synth_fixture, write_probmap, CalibrationModel, FixtureSpec, ProbabilityMap,
};

fn bravo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bravo"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn small_fixture(dir: &Path, seed: u64) -> FixtureSpec {
    let spec = FixtureSpec {
        width: 64,
        height: 48,
        frames_per_subset: 2,
        error_rate: 0.25,
        calibration: CalibrationModel::Perfect,
        ood_fraction: 0.2,
        seed,
    };
    synth_fixture(&spec, dir).unwrap();
    spec
}

#[test]
fn synth_evaluate_rank_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    let out = bravo(
        &[
            "synth", "--out", "fx", "--seed", "5", "--width", "64", "--height", "48",
            "--frames", "2",
        ],
        root,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    for (i, seed_args) in [["--track", "1"], ["--track", "2"]].iter().enumerate() {
        let report_dir = format!("out{i}");
        let mut args = vec!["evaluate", "fx", "--out", &report_dir];
        args.extend_from_slice(seed_args);
        let out = bravo(&args, root);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(root.join(&report_dir).join("report.json").exists());
        assert!(root.join(&report_dir).join("report.txt").exists());
        assert!(stdout(&out).contains("bravo index"));
    }

    // Identical inputs give byte-identical reports (idempotent commands).
    let a = std::fs::read(root.join("out0/report.json")).unwrap();
    let b = std::fs::read(root.join("out1/report.json")).unwrap();
    // Reports differ only in the recorded track label.
    assert_eq!(
        String::from_utf8_lossy(&a).replace("\"track\": 1", "\"track\": 2"),
        String::from_utf8_lossy(&b)
    );

    let out = bravo(
        &["rank", "out0/report.json", "out1/report.json", "--out", "board.txt"],
        root,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rank"));
    assert!(root.join("board.txt").exists());

    let out = bravo(
        &[
            "analyze",
            "out0/report.json",
            "out1/report.json",
            "--out",
            "analysis",
        ],
        root,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(root.join("analysis/scatter.svg").exists());
    assert!(root.join("analysis/scatter.csv").exists());
    // Two reports: correlogram is skipped with a note, not an error.
    assert!(!root.join("analysis/correlogram.csv").exists());
}

#[test]
fn combine_of_one_input_is_identity_after_decode_encode() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    // Values exact in f32, so the container round-trips bit-exactly.
    let map = ProbabilityMap::new(2, 1, 4, vec![0.5, 0.25, 0.125, 0.125, 0.0, 0.75, 0.25, 0.0])
        .unwrap();
    write_probmap(&map, &root.join("in.bpm")).unwrap();

    let out = bravo(
        &[
            "combine", "in.bpm", "--out", "mean.bpm", "--pred", "pred.png", "--conf", "conf.png",
        ],
        root,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        std::fs::read(root.join("in.bpm")).unwrap(),
        std::fs::read(root.join("mean.bpm")).unwrap(),
        "single-member combine must reproduce its input bytes"
    );

    let decoded = read_probmap(&root.join("mean.bpm")).unwrap();
    assert_eq!(decoded, map);
    let pred = bravo_eval::pngio::read_class_png(&root.join("pred.png")).unwrap();
    assert_eq!(pred.labels(), &[0, 1]);

    // A malformed container is an input error, exit 1.
    std::fs::write(root.join("bad.bpm"), b"junk").unwrap();
    let out = bravo(&["combine", "bad.bpm", "--out", "x.bpm"], root);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn renormalize_maps_the_breakpoint_level() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let map = ConfidenceMap::new(3, 1, vec![3277, 0, 65535]).unwrap();
    write_conf_png(&map, &root.join("in.png")).unwrap();

    let out = bravo(&["renormalize", "in.png", "out.png"], root);
    assert_eq!(out.status.code(), Some(0));
    let mapped = read_conf_png(&root.join("out.png")).unwrap();
    assert_eq!(mapped.values(), &[52428, 0, 65535]);

    // Missing input is an I/O failure.
    let out = bravo(&["renormalize", "nope.png", "out2.png"], root);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn evaluate_exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    // Validation failure: exit 1.
    small_fixture(&root.join("fx"), 8);
    let victim = root.join("fx/acdc/acdc_00000_conf.png");
    let eight_bit = bravo_eval::core::ClassMap::new(64, 48, vec![0; 64 * 48]).unwrap();
    bravo_eval::pngio::write_class_png(&eight_bit, &victim).unwrap();
    let out = bravo(&["evaluate", "fx", "--out", "r"], root);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("WrongBitDepth"));

    // Degenerate evaluation (flawless predictions): exit 2.
    let spec = FixtureSpec {
        error_rate: 0.0,
        width: 32,
        height: 32,
        frames_per_subset: 1,
        calibration: CalibrationModel::Perfect,
        ood_fraction: 0.2,
        seed: 9,
    };
    synth_fixture(&spec, &root.join("perfect")).unwrap();
    let out = bravo(&["evaluate", "perfect", "--out", "r2"], root);
    assert_eq!(out.status.code(), Some(2));

    // Missing subset directory: exit 2 with the subset named.
    small_fixture(&root.join("partial"), 10);
    std::fs::remove_dir_all(root.join("partial").join(SubsetKind::SynRain.dir_name())).unwrap();
    std::fs::remove_file(root.join("partial/manifest.toml")).unwrap();
    let out = bravo(&["evaluate", "partial", "--out", "r3"], root);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("synrain"));

    // Unreadable submission path: exit 3.
    let out = bravo(&["evaluate", "missing-dir", "--out", "r4"], root);
    assert_eq!(out.status.code(), Some(3));

    // Usage error: exit 64.
    let out = bravo(&["evaluate", "--definitely-not-a-flag"], root);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn validate_reports_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    small_fixture(&root.join("fx"), 11);
    std::fs::remove_file(root.join("fx/smiyc/smiyc_00001_gt.png")).unwrap();

    let out = bravo(&["validate", "fx", "--out", "issues.json"], root);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(root.join("issues.json")).unwrap()).unwrap();
    let issues = json["issues"].as_array().unwrap();
    assert_eq!(issues.len(), 1);
    assert_eq!(issues[0]["rule"], "MissingFile");
    assert_eq!(issues[0]["frame_id"], "smiyc_00001");
}
