//! Binary-level checks of the CLI contract: exit codes, config loading with
//! flag overrides, curve-file families, and the thread cap.

use std::path::Path;
use std::process::{Command, Output};

fn dcsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcsplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_out(args: &[&str], out: &Path) -> Vec<String> {
    let mut all: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    all.push("--out".into());
    all.push(out.display().to_string());
    all
}

#[test]
fn catalog_prints_all_fields() {
    let out = dcsplit(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "affine",
        "abs1d",
        "neg_abs1d",
        "quadratic",
        "saddle",
        "gaussian_bump",
        "osc1d",
        "dist_to_polygon",
    ] {
        assert!(text.contains(name), "catalog output misses {name}");
    }
}

#[test]
fn criterion_exit_codes_encode_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_out(
        &[
            "criterion",
            "--field",
            "affine",
            "--level-min",
            "1",
            "--level-max",
            "3",
        ],
        &dir.path().join("affine"),
    );
    let out = dcsplit(&args.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let args = with_out(
        &[
            "criterion",
            "--field",
            "osc1d",
            "--level-min",
            "2",
            "--level-max",
            "5",
        ],
        &dir.path().join("osc"),
    );
    let out = dcsplit(&args.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn converge_osc1d_diverges() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_out(
        &[
            "converge",
            "--field",
            "osc1d",
            "--level-min",
            "2",
            "--level-max",
            "6",
        ],
        dir.path(),
    );
    let out = dcsplit(&args.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(2));
    let report = std::fs::read_to_string(dir.path().join("converge.json")).unwrap();
    assert!(report.contains("\"diverging\""));
}

#[test]
fn invalid_arguments_exit_one() {
    let out = dcsplit(&["criterion", "--field", "not_a_field"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"levels\": {\"min\": 9, \"max\": 1}}").unwrap();
    let out = dcsplit(&["converge", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("levels.min"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.json");
    let config = serde_json::json!({
        "field": {"name": "abs1d"},
        "levels": {"min": 0, "max": 1},
        "probe_count": 100,
        "seed": 7,
        "out_dir": dir.path().join("from_config")
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    // --field overrides the file's abs1d
    let override_out = dir.path().join("override");
    let out = dcsplit(&[
        "decompose",
        "--config",
        config_path.to_str().unwrap(),
        "--field",
        "neg_abs1d",
        "--out",
        override_out.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = std::fs::read_to_string(override_out.join("summary.json")).unwrap();
    assert!(summary.contains("neg_abs1d"));
    assert!(summary.contains("\"hinges_concave\": 1"));
}

#[test]
fn curve_files_family() {
    let dir = tempfile::tempdir().unwrap();
    // a closed diamond well inside the saddle domain
    let curve_path = dir.path().join("diamond.csv");
    std::fs::write(&curve_path, "0.5,0.2\n0.8,0.5\n0.5,0.8\n0.2,0.5\n0.5,0.2\n").unwrap();
    let config_path = dir.path().join("run.json");
    let config = serde_json::json!({
        "field": {"name": "saddle"},
        "levels": {"min": 2, "max": 4},
        "family": {"curve_files": [curve_path], "count": 0},
        "out_dir": dir.path().join("out")
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let out = dcsplit(&["criterion", "--config", config_path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("out/criterion.csv")).unwrap();
    assert!(csv.lines().count() > 1);
    assert!(csv.starts_with("level,curve,v_phi,v_r,rho,turn,sigma"));
    // the family is exported next to the records it indexes
    let exported = std::fs::read_to_string(dir.path().join("out/curves/curve_000.csv")).unwrap();
    assert_eq!(exported.lines().count(), 5);
    assert!(exported.starts_with("0.5,0.2"));
}

#[test]
fn thread_cap_is_honored_and_validated() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let run = |threads: &str, out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_dcsplit"))
            .env("DCSPLIT_THREADS", threads)
            .args([
                "criterion",
                "--field",
                "saddle",
                "--level-min",
                "2",
                "--level-max",
                "3",
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .expect("binary runs")
    };
    let a = run("1", dir_a.path());
    let b = run("4", dir_b.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    // results do not depend on the thread count
    assert_eq!(
        std::fs::read(dir_a.path().join("criterion.json")).unwrap(),
        std::fs::read(dir_b.path().join("criterion.json")).unwrap()
    );

    let bad = Command::new(env!("CARGO_BIN_EXE_dcsplit"))
        .env("DCSPLIT_THREADS", "many")
        .args([
            "criterion",
            "--field",
            "affine",
            "--level-min",
            "1",
            "--level-max",
            "2",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("DCSPLIT_THREADS"));
}

#[test]
fn converge_quadratic_1d_converges() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.json");
    let config = serde_json::json!({
        "field": {"name": "quadratic", "params": {"dim": 1}},
        "levels": {"min": 1, "max": 5},
        "probe_count": 300,
        "out_dir": dir.path().join("out")
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let out = dcsplit(&["converge", "--config", config_path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/converge.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["verdict"], "converging");
    let deltas: Vec<f64> = report["sup_deltas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(deltas.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn mesh_export_schema() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_out(
        &["decompose", "--field", "quadratic", "--level-max", "1"],
        dir.path(),
    );
    let out = dcsplit(&args.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(0));
    let mesh: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mesh.json")).unwrap())
            .unwrap();
    assert_eq!(mesh["level"], 1);
    assert_eq!(mesh["simplices"].as_array().unwrap().len(), 8);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "decompose");
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert!(manifest["timings_ms"].as_array().is_some());
}
