//! End-to-end checks of the command-line contract: output formats, file
//! schemas, and the 0/1/2/3 exit-status convention.

use std::path::PathBuf;
use std::process::{Command, Output};

use harmonic_schwarz::harmonic::HarmonicMap;
use harmonic_schwarz::series::ComplexSeries;
use harmonic_schwarz::verify::VerificationReport;
use num_complex::Complex64;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hschwarz")).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("hschwarz-cli-{}-{name}", std::process::id()))
}

#[test]
fn bound_prints_fifteen_significant_digits() {
    let out = run(&["bound", "--theorem", "1.1", "--p", "1", "--s", "4/pi"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.636619772367581");

    let out = run(&["bound", "--theorem", "1.1", "--p", "1", "--s", "1"]);
    assert_eq!(stdout(&out).trim(), "0.713140391223605");

    let out = run(&["bound", "--theorem", "lemma-b", "--p", "1", "--r", "0.5"]);
    assert_eq!(stdout(&out).trim(), "0.590334470601733");

    let out = run(&["bound", "--theorem", "moebius-ratio", "--x", "0", "--r", "0.37"]);
    assert_eq!(stdout(&out).trim(), "0.370000000000000");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["bound", "--theorem", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--theorem", "1.1", "--p", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--theorem", "1.1", "--p", "1", "--s", "9"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--inequality", "nonsense"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_three() {
    let out = run(&["compose", "-i", "/nonexistent/map.json", "--mobius-a", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["report", "-i", "/nonexistent/report.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn violations_exit_with_one() {
    // A negative tolerance demands margin >= 1 everywhere, which no sample
    // satisfies; the run must report violations through exit status 1.
    let out = run(&[
        "verify",
        "--inequality",
        "lemma1.3",
        "--samples",
        "1",
        "--p",
        "1",
        "--radii",
        "8",
        "--angles",
        "16",
        "--tol=-1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compose_mobius_is_involutive_through_files() {
    let input = temp_path("map.json");
    let once = temp_path("once.json");
    let twice = temp_path("twice.json");

    let h = ComplexSeries::new(
        Complex64::new(0.0, 0.0),
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.6, 0.1),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.1, 0.05),
        ],
    )
    .unwrap();
    let g = ComplexSeries::new(
        Complex64::new(0.0, 0.0),
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.2, 0.0)],
    )
    .unwrap();
    let map = HarmonicMap::new(h, g).unwrap();
    std::fs::write(&input, serde_json::to_string(&map).unwrap()).unwrap();

    let out = run(&[
        "compose",
        "-i",
        input.to_str().unwrap(),
        "--mobius-a",
        "0.3+0.2i",
        "--order",
        "48",
        "-o",
        once.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "compose",
        "-i",
        once.to_str().unwrap(),
        "--mobius-a",
        "0.3+0.2i",
        "--order",
        "48",
        "-o",
        twice.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let round: HarmonicMap =
        serde_json::from_str(&std::fs::read_to_string(&twice).unwrap()).unwrap();
    for k in 0..=3 {
        assert!(
            (round.h().coeff(k) - map.h().coeff(k)).norm() < 1e-10,
            "h coeff {k} drifted"
        );
        assert!((round.g().coeff(k) - map.g().coeff(k)).norm() < 1e-10);
    }
    for path in [&input, &once, &twice] {
        let _ = std::fs::remove_file(path);
    }
}

#[test]
fn compose_strip_theta_emits_series_json() {
    let input = temp_path("strip-map.json");
    let h = ComplexSeries::new(
        Complex64::new(0.0, 0.0),
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
    )
    .unwrap();
    let map = HarmonicMap::analytic(h);
    std::fs::write(&input, serde_json::to_string(&map).unwrap()).unwrap();

    let out = run(&["compose", "-i", input.to_str().unwrap(), "--strip-theta", "0", "--order", "8"]);
    assert!(out.status.success());
    let series: ComplexSeries = serde_json::from_str(&stdout(&out)).unwrap();
    // delta = tan(pi f / 4) with f = 0.5 z: delta'(0) = pi/8.
    assert!((series.coeff(1) - Complex64::new(std::f64::consts::PI / 8.0, 0.0)).norm() < 1e-15);
    let _ = std::fs::remove_file(&input);
}

#[test]
fn series_json_schema_is_stable() {
    let s = ComplexSeries::new(
        Complex64::new(0.0, 0.0),
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    )
    .unwrap();
    let json = serde_json::to_string(&HarmonicMap::analytic(s)).unwrap();
    assert!(json.starts_with(r#"{"h":{"center":[0.0,0.0],"coeffs":[[0.0,0.0],[1.0,0.0]]},"g":"#));
}

#[test]
fn verify_report_csv_and_report_rendering() {
    let report_path = temp_path("report.json");
    let csv_path = temp_path("rows.csv");
    let out = run(&[
        "verify",
        "--inequality",
        "eq1.2",
        "--samples",
        "5",
        "--seed",
        "7",
        "-o",
        report_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict         : PASS"));

    let report: VerificationReport =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.samples, 5);
    assert!(report.passed());

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("inequality,seed,p,s,grid_r,grid_theta,attained,bound,margin\n"));
    assert_eq!(csv.lines().count(), 6);

    let rendered = run(&["report", "-i", report_path.to_str().unwrap()]);
    assert!(rendered.status.success());
    assert!(stdout(&rendered).contains("inequality      : eq1.2"));

    let _ = std::fs::remove_file(&report_path);
    let _ = std::fs::remove_file(&csv_path);
}

#[test]
fn sharpness_rotation_is_flat_and_positive() {
    let trace_path = temp_path("trace.json");
    let out = run(&[
        "sharpness",
        "--family",
        "rotation",
        "--p",
        "2",
        "--seed",
        "5",
        "--iterations",
        "40",
        "-o",
        trace_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("best margin "), "{text}");
    let trace = std::fs::read_to_string(&trace_path).unwrap();
    assert!(trace.contains("\"suspected_error\": false"));
    let _ = std::fs::remove_file(&trace_path);
}
