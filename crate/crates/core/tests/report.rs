use std::path::PathBuf;
use std::process::Command;

use kinam::report::*;
use kinam::scenario::{builtin, parse_scenario};

const PASSING: &str = "# zero field, exact on the grid
name = quick-pass
seed = 3

[grid]
dims = 24, 24, 24
h = 0.25

[state]
sigma = 0.75
k = 1, 0, 0

[checks]
run = pipi, force-forms
";

const FAILING: &str = "name = quick-fail

[field]
uniform_B = (0, 0, 1)

[grid]
dims = 24, 24, 24
h = 0.25

[state]
sigma = 0.75

[checks]
run = pipi
tolerance = 1e-9
";

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kinam-report-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn kinam() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kinam"))
}

#[test]
fn json_round_trip() {
    let s = parse_scenario(PASSING).unwrap();
    let r = run(&s, &RunOptions::default());
    assert!(r.pass, "{r:?}");
    let text = emit_report(&r, Format::Json);
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn csv_has_one_row_per_check() {
    let s = parse_scenario(PASSING).unwrap();
    let r = run(&s, &RunOptions::default());
    let csv = emit_report(&r, Format::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,residual,tolerance,order,pass");
    assert_eq!(lines.len(), 1 + r.checks.len());
    assert!(lines[1].starts_with("quick-pass/pipi,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 5));
}

#[test]
fn runs_are_deterministic() {
    let s = parse_scenario(FAILING).unwrap();
    let a = run(&s, &RunOptions::default()).without_timing();
    let b = run(&s, &RunOptions::default()).without_timing();
    assert_eq!(emit_report(&a, Format::Json), emit_report(&b, Format::Json));
    let t = run(
        &builtin("paper-tensors").unwrap(),
        &RunOptions {
            seed: Some(9),
            ..Default::default()
        },
    );
    let u = run(
        &builtin("paper-tensors").unwrap(),
        &RunOptions {
            seed: Some(9),
            ..Default::default()
        },
    );
    assert_eq!(t.without_timing(), u.without_timing());
    assert!(t.pass);
}

#[test]
fn tolerance_scale_widens_bounds() {
    let s = parse_scenario(FAILING).unwrap();
    let strict = run(&s, &RunOptions::default());
    assert!(!strict.pass);
    let loose = run(
        &s,
        &RunOptions {
            tolerance_scale: 1e9,
            ..Default::default()
        },
    );
    assert!(loose.pass);
    assert_eq!(loose.checks[0].tolerance, 1e-9 * 1e9);
}

#[test]
fn cli_exit_codes() {
    let ok = kinam()
        .args(["--format", "csv", "run"])
        .arg(scratch("pass.scn", PASSING))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("quick-pass/force-forms"));

    let fail = kinam().arg("run").arg(scratch("fail.scn", FAILING)).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let report: RunReport = serde_json::from_slice(&fail.stdout).unwrap();
    assert!(!report.pass);

    let broken = kinam()
        .arg("run")
        .arg(scratch("broken.scn", "name = x\n[checks]\nrun = nothing\n"))
        .output()
        .unwrap();
    assert_eq!(broken.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("unknown check"));

    assert_eq!(
        kinam()
            .args(["run", "no-such-scenario"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kinam().arg("--bogus").output().unwrap().status.code(), Some(2));
    assert_eq!(kinam().output().unwrap().status.code(), Some(2));
    assert_eq!(
        kinam()
            .args(["--tolerance-scale", "-1", "verify-tensors"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cli_verify_tensors_and_listing() {
    let out = kinam().args(["--format", "csv", "verify-tensors"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let list = kinam().arg("--list-scenarios").output().unwrap();
    let text = String::from_utf8_lossy(&list.stdout);
    assert!(text.lines().any(|l| l.starts_with("paper-eq8-uniformB")));
    assert!(text.lines().any(|l| l.starts_with("landau-ground-state")));
}

#[test]
fn cli_writes_traces() {
    let text = "name = short-orbit

[field]
uniform_B = (0, 0, 1)

[grid]
dims = 64, 64
h = 0.1

[state]
sigma = 0.5
k = 0, 1

[checks]
run = ehrenfest-dynamic
dt = 0.01
steps = 20
trace = x, y
tolerance = 0.05
";
    let dir = std::env::temp_dir().join(format!("kinam-traces-{}", std::process::id()));
    let out = kinam()
        .arg("--trace")
        .arg(&dir)
        .arg("run")
        .arg(scratch("orbit.scn", text))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let file = std::fs::read_dir(&dir).unwrap().next().unwrap().unwrap().path();
    let csv = std::fs::read_to_string(file).unwrap();
    assert!(csv.lines().next().unwrap().contains("x_re"));
    assert_eq!(csv.lines().count(), 22);
}
