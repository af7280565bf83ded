use std::fs;
use std::path::Path;
use std::process::Command;

use imrelay_cli::{manifest_path, ExperimentSpec, CURVE_HEADER, RATES_HEADER};

fn imrelay() -> Command {
    Command::new(env!("CARGO_BIN_EXE_imrelay"))
}

fn write_spec(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("experiment.txt");
    fs::write(&path, body).unwrap();
    path
}

const OUTAGE: &str = "\
n_total = 4
n_selected = 2
apm_order = 2
metric = outage
methodologies = decentralized, centralized
snr_db = 0:30:5
trials = 2000
seed = 11
output = outage.csv
";

#[test]
fn outage_sweep_writes_one_row_per_point_and_methodology() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), OUTAGE);
    let out = dir.path().join("curves/outage.csv");
    let status = imrelay().arg("--spec").arg(&spec).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CURVE_HEADER);
    assert_eq!(lines.len(), 1 + 14);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[2], "outage");
        assert!(fields[5].parse::<f64>().is_ok() && fields[6].parse::<f64>().is_ok());
    }

    let manifest = fs::read_to_string(manifest_path(&out)).unwrap();
    assert!(manifest.contains("# tool_version = imrelay-cli"));
    assert!(manifest.contains("# wall_time_s = "));
    let echoed = ExperimentSpec::parse(&manifest).unwrap();
    let original = ExperimentSpec::parse(&OUTAGE.replace("output = outage.csv", &format!("output = {}", out.display())))
        .unwrap();
    assert_eq!(echoed, original);
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), OUTAGE);
    let out = dir.path().join("cap.csv");
    let status = imrelay()
        .arg("--spec")
        .arg(&spec)
        .args(["--metric", "capacity", "--methodology", "none", "--methodology", "fpsk"])
        .args(["--snr-db", "-5:5:5", "--trials", "1000", "--seed", "3"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], "-5.0");
    assert_eq!((rows[0][1], rows[1][1]), ("none", "fpsk"));
    assert!(rows.iter().all(|r| r[2] == "capacity" && r[6].is_empty()));
}

#[test]
fn rates_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "n_total = 4\nn_selected = 2\napm_order = 2\nmetric = rates\noutput = r.csv\n");
    let out = dir.path().join("r.csv");
    assert!(imrelay().arg("--spec").arg(&spec).arg("--out").arg(&out).status().unwrap().success());
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv, format!("{RATES_HEADER}\nrates,4,2,2,3.25,4.0,3.0\n"));
}

#[test]
fn invalid_specs_fail_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    for (bad, needle) in [
        (OUTAGE.replace("0:30:5", "30:0:5"), "start <= stop"),
        (OUTAGE.replace("0:30:5", "0:30:-1"), "step > 0"),
        (OUTAGE.replace("trials = 2000", "trials = 10"), "trials must be >= 1000"),
        (OUTAGE.replace("n_selected = 2", "n_selected = 4"), "n_selected"),
    ] {
        let spec = write_spec(dir.path(), &bad);
        let output = imrelay().arg("--spec").arg(&spec).current_dir(dir.path()).output().unwrap();
        assert_eq!(output.status.code(), Some(2));
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(stderr.contains(needle), "{stderr}");
    }
    assert!(!dir.path().join("outage.csv").exists());
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let spec = write_spec(dir.path(), OUTAGE);
    let output = imrelay()
        .arg("--spec")
        .arg(&spec)
        .arg("--out")
        .arg(blocker.join("nested/out.csv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn bad_worker_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), OUTAGE);
    let output = imrelay()
        .arg("--spec")
        .arg(&spec)
        .current_dir(dir.path())
        .env("IMRELAY_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
