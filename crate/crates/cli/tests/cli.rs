//! End-to-end behavior of the binary: exit codes, output determinism,
//! config-file handling, and row error markers.

use std::path::Path;
use std::process::Command;

fn chanest() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chanest"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    // Unknown flag (clap).
    let out = chanest().arg("sweep").arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Empty grid.
    let dir = tempfile::tempdir().unwrap();
    let out = chanest()
        .args([
            "sweep",
            "--channel",
            "depolarizing",
            "--lambda-grid",
            "0.4:0.1:0.1",
            "--n",
            "10",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Grid outside the family range.
    let out = chanest()
        .args([
            "sweep",
            "--channel",
            "depolarizing",
            "--lambda-grid",
            "0:0.9:0.1",
            "--n",
            "10",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Bad divisibility in simulate.
    let out = chanest()
        .args([
            "simulate",
            "--channel",
            "pauli",
            "--lambda",
            "0.1,0.1,0.1",
            "--protocol",
            "pauli-separable",
            "--n",
            "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_byte_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = chanest()
            .args([
                "sweep",
                "--channel",
                "phase-damping",
                "--lambda-grid",
                "0:0.5:0.05",
                "--n",
                "2,4",
                "--cost",
                "stat,fid",
                "--method",
                "closed,enum,mc",
                "--runs",
                "500",
                "--seed",
                "11",
                "--out",
            ])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = read(&dir_a.path().join("sweep.csv"));
    let b = read(&dir_b.path().join("sweep.csv"));
    assert_eq!(a, b);
}

#[test]
fn sweep_statistical_rows_match_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = chanest()
        .args([
            "sweep",
            "--channel",
            "depolarizing",
            "--lambda-grid",
            "0:0.5:0.01",
            "--n",
            "1,10,100",
            "--cost",
            "stat",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = read(&dir.path().join("sweep.csv"));
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let n: f64 = fields[3].parse().unwrap();
        let lambda: f64 = fields[4].parse().unwrap();
        let value: f64 = fields[5].parse().unwrap();
        assert!(
            (value - lambda * (1.0 - lambda) / n).abs() < 1e-15,
            "{line}"
        );
        rows += 1;
    }
    assert_eq!(rows, 3 * 51);
}

#[test]
fn sweep_marks_unsupported_method_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = chanest()
        .args([
            "sweep",
            "--channel",
            "depolarizing",
            "--lambda-grid",
            "0:0.1:0.1",
            "--n",
            "4",
            "--cost",
            "fid",
            "--method",
            "closed",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = read(&dir.path().join("sweep.csv"));
    for line in csv.lines().skip(1) {
        assert!(line.ends_with("error:unsupported-method"), "{line}");
    }
}

#[test]
fn sweep_marks_enumeration_limit_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = chanest()
        .args([
            "sweep",
            "--channel",
            "depolarizing",
            "--lambda-grid",
            "0.1:0.1:0.1",
            "--n",
            "20000",
            "--cost",
            "stat",
            "--method",
            "enum",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = read(&dir.path().join("sweep.csv"));
    assert!(csv.contains("error:enumeration-too-large"));
}

#[test]
fn config_file_is_merged_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sweep.json");
    std::fs::write(
        &config_path,
        format!(
            r#"{{
  "channel": "depolarizing",
  "lambda-grid": "0:0.5:0.25",
  "n": "4",
  "cost": ["stat"],
  "seed": 3,
  "out": "{}"
}}"#,
            dir.path().join("from-config").display()
        ),
    )
    .unwrap();
    // Run entirely from the file.
    let out = chanest()
        .args(["sweep", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("from-config/sweep.csv"));
    assert_eq!(csv.lines().count(), 1 + 3); // header + 3 grid points
    assert!(csv.contains(",4,")); // N from the file

    // Flag overrides N.
    let override_dir = dir.path().join("override");
    let out = chanest()
        .args(["sweep", "--config"])
        .arg(&config_path)
        .args(["--n", "8", "--out"])
        .arg(&override_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = read(&override_dir.join("sweep.csv"));
    assert!(csv.contains(",8,"));
    assert!(!csv.contains(",4,"));
}

#[test]
fn simulate_json_is_deterministic_and_matches_trivial_example() {
    // Noiseless depolarizing channel: every estimate and cost is zero.
    let out = chanest()
        .args([
            "simulate",
            "--channel",
            "depolarizing",
            "--lambda",
            "0",
            "--n",
            "10",
            "--runs",
            "3",
            "--seed",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = report["run_records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    for record in records {
        assert_eq!(record["estimate"][0], 0.0);
        assert_eq!(record["cost_statistical"], 0.0);
        assert_eq!(record["cost_fidelity"], 0.0);
    }
    // Same seed, byte-identical output.
    let again = chanest()
        .args([
            "simulate",
            "--channel",
            "depolarizing",
            "--lambda",
            "0",
            "--n",
            "10",
            "--runs",
            "3",
            "--seed",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn validate_passes_and_fault_injection_fails_by_name() {
    let out = chanest().arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS affine-parametrization"));

    let out = chanest()
        .args(["validate", "--inject-fault", "affine-parametrization"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL affine-parametrization"));
}

#[test]
fn compare_pauli_marks_simplex_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = chanest()
        .args(["compare-pauli", "--step", "0.5", "--lambda2", "0.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = read(&dir.path().join("compare.csv"));
    assert!(csv.contains("invalid:simplex"));
    assert!(csv.contains(",ok"));
    // Rectangular grid: every cell present.
    assert_eq!(csv.lines().count(), 1 + 9);
}

#[test]
fn manifest_lists_outputs_with_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let out = chanest()
        .args([
            "sweep",
            "--channel",
            "amplitude-damping",
            "--lambda-grid",
            "0:1:0.5",
            "--n",
            "2",
            "--cost",
            "stat",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("manifest.json"))).unwrap();
    assert_eq!(manifest["tool"], "chanest");
    assert_eq!(manifest["command"], "sweep");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    assert_eq!(outputs[0]["file"], "sweep.csv");
    let sha = outputs[0]["sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    // The checksum matches the file on disk.
    use sha2::Digest;
    let bytes = std::fs::read(dir.path().join("sweep.csv")).unwrap();
    let digest = sha2::Sha256::digest(&bytes);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(sha, hex);
}
