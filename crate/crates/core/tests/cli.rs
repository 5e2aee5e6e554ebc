//! The `bnet` binary: outputs, byte stability and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bnet(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnet"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn simulate_full_branching_is_byte_stable() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    for o in [&a, &b] {
        let r = bnet(&["simulate", "--beta", "1", "--seed", "0", "--svg"], o);
        assert_eq!(
            r.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&r.stderr)
        );
    }
    let csv = read(&a.join("trajectories.csv"));
    assert_eq!(csv, read(&b.join("trajectories.csv")));
    assert_eq!(read(&a.join("skeleton.svg")), read(&b.join("skeleton.svg")));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x,path_id"));
    // at full branching the left-most path moves left every step
    let fl: Vec<&str> = csv.lines().filter(|l| l.ends_with(",fl-30")).collect();
    assert_eq!(fl.len(), 33);
    assert_eq!(fl[0], "0,-30,fl-30");
    assert_eq!(fl[5], "5,-35,fl-30");
    assert!(read(&a.join("skeleton.svg")).contains("stroke-dasharray"));
}

#[test]
fn simulate_rejects_beta_above_one() {
    let d = tempfile::tempdir().unwrap();
    let r = bnet(&["simulate", "--beta", "2"], d.path());
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("beta"));
}

#[test]
fn boundary_touch_is_a_runtime_failure() {
    let d = tempfile::tempdir().unwrap();
    let r = bnet(
        &[
            "simulate",
            "--beta",
            "1",
            "--half-width",
            "10",
            "--height",
            "20",
        ],
        d.path(),
    );
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("boundary"));
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    let file = d.path().join("plain-file");
    std::fs::write(&file, "x").unwrap();
    let r = bnet(&["curve", "psi"], &file.join("sub"));
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn psi_curve_rows_and_limit() {
    let d = tempfile::tempdir().unwrap();
    let args = [
        "curve", "psi", "--tmin", "0.1", "--tmax", "10", "--steps", "100",
    ];
    assert_eq!(bnet(&args, d.path()).status.code(), Some(0));
    let first = read(&d.path().join("curve_psi.csv"));
    let rows: Vec<&str> = first.lines().skip(1).collect();
    assert_eq!(rows.len(), 100);
    let last: f64 = rows[99].split(',').nth(1).unwrap().parse().unwrap();
    assert!((last - 2.0).abs() < 1e-5, "{last}");
    assert_eq!(bnet(&args, d.path()).status.code(), Some(0));
    assert_eq!(first, read(&d.path().join("curve_psi.csv")));
    assert!(read(&d.path().join("curve_psi.svg")).starts_with("<svg"));
}

#[test]
fn avoidance_curve_at_zero_eps_is_zero() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        bnet(&["curve", "Psi", "--eps", "0"], d.path())
            .status
            .code(),
        Some(0)
    );
    let csv = read(&d.path().join("curve_big_psi.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("eps,t,value"));
    assert!(lines.all(|l| l.ends_with(",0")));
}

#[test]
fn invalid_curve_range_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    let r = bnet(&["curve", "flux", "--tmin", "3", "--tmax", "1"], d.path());
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn verify_structural_passes_and_writes_reports() {
    let d = tempfile::tempdir().unwrap();
    let r = bnet(&["verify", "structural", "--seed", "0"], d.path());
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stdout)
    );
    let csv = read(&d.path().join("reports.csv"));
    assert!(csv.starts_with("name,param_json,estimate,stderr,target,verdict,seed,wall_time\n"));
    assert_eq!(csv.lines().count(), 5);
    assert!(read(&d.path().join("summary.txt")).contains("4 passed, 0 failed"));
}

#[test]
fn verify_outside_the_scaling_regime_warns() {
    let d = tempfile::tempdir().unwrap();
    let r = bnet(
        &["verify", "density", "--beta", "0.5", "--replicas", "20"],
        d.path(),
    );
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&r.stderr).contains("outside the scaling regime"));
}

#[test]
fn failing_verdict_exits_one() {
    // with 10 replicas the empty fraction is a multiple of 0.1, which can
    // not come within the 0.01 allowance of 1 - Psi_{0.5}(1) = 0.353
    let d = tempfile::tempdir().unwrap();
    let r = bnet(
        &["verify", "avoidance", "--k", "1e-9", "--replicas", "10"],
        d.path(),
    );
    assert_eq!(r.status.code(), Some(1));
    assert!(read(&d.path().join("summary.txt")).contains("FAIL"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let d = tempfile::tempdir().unwrap();
    let conf = d.path().join("run.conf");
    std::fs::write(&conf, "# sample\nbeta = 1\nseed = 4\n").unwrap();
    let out = d.path().join("o");
    let r = Command::new(env!("CARGO_BIN_EXE_bnet"))
        .args([
            "--config",
            conf.to_str().unwrap(),
            "simulate",
            "--beta",
            "0.3",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0));
    let csv = read(&out.join("trajectories.csv"));
    // beta 0.3 rescales lattice time by 0.09, so non-integer times appear
    assert!(csv.lines().nth(2).unwrap().starts_with("0.09,"));
}
