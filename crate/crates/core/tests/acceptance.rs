//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them). Tolerances are pinned here, not configurable.

use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;

use harmonic_schwarz::bounds::{
    boundary_lower_bound, general_boundary_lower_bound, limit_slope, limit_slope_numeric,
    BoundQuery, FOUR_OVER_PI,
};
use harmonic_schwarz::series::{compose, faa_di_bruno, enumerate_partitions, ComplexSeries};
use harmonic_schwarz::verify::{
    check_boundary_theorem, mobius_witness, run_corpus, CorpusConfig, Inequality, Rng,
    VerificationReport, BOUNDARY_TOL, WITNESS_ORDER,
};

const TWO_OVER_PI: f64 = 0.636_619_772_367_581_3;

fn conclude(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion}: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hschwarz"))
}

#[test]
fn criterion_01_paper_constant_two_over_pi() {
    let output = cli()
        .args(["bound", "--theorem", "1.1", "--p", "1", "--s", "4/π"])
        .output()
        .expect("binary runs");
    let printed = String::from_utf8_lossy(&output.stdout).trim().to_string();
    let value: f64 = printed.parse().expect("numeric output");
    let exact = output.status.success() && (value - TWO_OVER_PI).abs() <= 1e-12;

    // Runtime of the evaluation itself (the process spawn is not the
    // quantity of interest).
    let _warmup = boundary_lower_bound(1, FOUR_OVER_PI).unwrap();
    let clock = Instant::now();
    let direct = boundary_lower_bound(1, FOUR_OVER_PI).unwrap();
    let elapsed = clock.elapsed();
    let fast = elapsed.as_secs_f64() < 1e-3 && (direct - TWO_OVER_PI).abs() <= 1e-12;

    conclude(
        1,
        exact && fast,
        &format!("bound 1.1 (p=1, s=4/pi) printed {printed}, evaluated in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_general_bound_coincides_at_origin() {
    let mut worst = 0.0f64;
    for p in 1..=5 {
        for s in [0.0, 0.5, 1.0, FOUR_OVER_PI] {
            let base = boundary_lower_bound(p, s).unwrap();
            let query = BoundQuery { p, s, ..BoundQuery::default() };
            let general = general_boundary_lower_bound(&query).unwrap();
            worst = worst.max((general - base).abs());
        }
    }
    conclude(2, worst <= 1e-15, &format!("max |thm1.2(a=0) - thm1.1| = {worst:.3e} over 20 pairs"));
}

#[test]
fn criterion_03_interior_bound_suite() {
    let clock = Instant::now();
    let report = run_corpus(&CorpusConfig::new(Inequality::InteriorBound, 200, 42)).unwrap();
    let elapsed = clock.elapsed().as_secs_f64();
    let ok = report.samples == 600
        && report.violations == 0
        && report.min_chain_slack.unwrap() >= -1e-9
        && elapsed < 60.0;
    conclude(
        3,
        ok,
        &format!(
            "600 samples, {} nodes, violations {}, min margin {:.3e}, chain slack {:.3e}, {elapsed:.1}s",
            report.grid_points,
            report.violations,
            report.min_margin,
            report.min_chain_slack.unwrap()
        ),
    );
}

#[test]
fn criterion_04_boundary_theorem_suite() {
    let report = run_corpus(&CorpusConfig::new(Inequality::BoundaryTheorem, 100, 42)).unwrap();
    // 100 polynomial witnesses + the monomial witness per p, plus the four
    // Möbius witnesses.
    let corpus_ok = report.samples == 307 && report.passed();

    // The a = 0.5 Möbius witness attains 3 against the transported bound
    // 3 * (2/pi) * 2/(1 + pi/4) = 2.1394211736708159307 (40-digit value).
    let witness = mobius_witness(Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), 1, WITNESS_ORDER)
        .unwrap();
    let single = check_boundary_theorem(
        &witness,
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        0,
        BOUNDARY_TOL,
    )
    .unwrap();
    let record = &single.records[0];
    let witness_ok = (record.attained - 3.0).abs() <= 1e-6
        && (record.bound - 2.139_421_173_670_816).abs() <= 1e-6;

    conclude(
        4,
        corpus_ok && witness_ok,
        &format!(
            "{} witnesses, violations {}, fd mismatches {}, a=0.5 witness attained {:.9} vs bound {:.9}",
            report.samples,
            report.violations,
            report.derivative_mismatches.unwrap_or(0),
            record.attained,
            record.bound
        ),
    );
}

#[test]
fn criterion_05_transport_identities() {
    let report = run_corpus(&CorpusConfig::new(Inequality::TransportIdentities, 34, 42)).unwrap();
    let ok = report.samples >= 100 && report.violations == 0;
    conclude(
        5,
        ok,
        &format!(
            "{} relocated samples, violations {}, worst identity deviation {:.3e}",
            report.samples, report.violations, -report.min_margin
        ),
    );
}

#[test]
fn criterion_06_limit_slope_agreement() {
    let mut worst = 0.0f64;
    for p in 1..=5 {
        for s in [0.0, 0.4, 0.8, 1.2, FOUR_OVER_PI] {
            let closed = limit_slope(p, s).unwrap();
            let numeric = limit_slope_numeric(p, s).unwrap();
            worst = worst.max((closed - numeric).abs());
        }
    }
    conclude(6, worst <= 1e-6, &format!("max |closed - Richardson| = {worst:.3e} on the 25-point lattice"));
}

#[test]
fn criterion_07_faa_di_bruno_vs_composition() {
    // Partition counts against the integer partition numbers.
    let pn = [1usize, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
    let counts_ok =
        pn.iter().enumerate().all(|(n, &c)| enumerate_partitions(n + 1).unwrap().len() == c);

    // 50 random series pairs, derivative orders 1..=8.
    let mut rng = Rng::new(42);
    let mut worst = 0.0f64;
    let order = 8;
    for _ in 0..50 {
        let outer_coeffs: Vec<Complex64> =
            (0..=order).map(|k| rng.complex_gaussian() * 0.6f64.powi(k as i32)).collect();
        let mut inner_coeffs: Vec<Complex64> =
            (0..=order).map(|k| rng.complex_gaussian() * 0.6f64.powi(k as i32)).collect();
        inner_coeffs[0] = Complex64::new(0.0, 0.0);
        let outer = ComplexSeries::new(Complex64::new(0.0, 0.0), outer_coeffs).unwrap();
        let inner = ComplexSeries::new(Complex64::new(0.0, 0.0), inner_coeffs).unwrap();
        let composed = compose(&outer, &inner).unwrap();
        let outer_derivs: Vec<Complex64> =
            (1..=order).map(|k| outer.derivative_at(k).unwrap()).collect();
        for k in 1..=order {
            let via_composition = composed.derivative_at(k).unwrap();
            let via_partition_sum = faa_di_bruno(&outer_derivs, &inner, k).unwrap();
            let rel = (via_composition - via_partition_sum).norm()
                / via_partition_sum.norm().max(1.0);
            worst = worst.max(rel);
        }
    }
    conclude(
        7,
        counts_ok && worst <= 1e-9,
        &format!("p(n) counts match for n <= 12; max relative derivative gap {worst:.3e}"),
    );
}

#[test]
fn criterion_08_strip_transport_suite() {
    let report = run_corpus(&CorpusConfig::new(Inequality::StripTransport, 50, 42)).unwrap();
    let ok = report.samples == 50 && report.violations == 0;
    conclude(
        8,
        ok,
        &format!(
            "50 strip samples, violations {}, worst deviation {:.3e}",
            report.violations, -report.min_margin
        ),
    );
}

#[test]
fn criterion_09_empirical_coefficient_bound() {
    let report = run_corpus(&CorpusConfig::new(Inequality::CoefficientBound, 200, 42)).unwrap();
    let ok = report.samples == 200 && report.violations == 0 && report.min_margin >= -1e-9;
    conclude(
        9,
        ok,
        &format!(
            "200 Poisson seeds, n <= 16, min margin {:.6e} (>= -1e-9)",
            report.min_margin
        ),
    );
}

#[test]
fn criterion_10_byte_identical_reports() {
    let dir = std::env::temp_dir();
    let first = dir.join(format!("hschwarz-acceptance-{}-1.json", std::process::id()));
    let second = dir.join(format!("hschwarz-acceptance-{}-2.json", std::process::id()));
    for path in [&first, &second] {
        let status = cli()
            .args([
                "verify",
                "--inequality",
                "lemma1.3",
                "--samples",
                "200",
                "--seed",
                "42",
                "--output",
            ])
            .arg(path)
            .status()
            .expect("binary runs");
        assert!(status.success(), "verify run failed");
    }
    let bytes_first = std::fs::read(&first).unwrap();
    let bytes_second = std::fs::read(&second).unwrap();
    // Both must also deserialize back into the report schema.
    let parsed: VerificationReport = serde_json::from_slice(&bytes_first).unwrap();
    let ok = bytes_first == bytes_second && parsed.samples == 600;
    let _ = std::fs::remove_file(&first);
    let _ = std::fs::remove_file(&second);
    conclude(
        10,
        ok,
        &format!("two seed-42 runs produced {} identical bytes", bytes_first.len()),
    );
}
