//! Command-line driver: bound evaluation, map composition, corpus
//! verification, sharpness search, and report rendering.
//!
//! Exit status contract: 0 success, 1 verification violations, 2 usage
//! errors, 3 I/O failures.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bounds::{
    analytic_schwarz_pick_bound, boundary_lower_bound, classical_harmonic_bound,
    general_boundary_lower_bound, improved_harmonic_bound, limit_slope, limit_slope_numeric,
    moebius_ratio, BoundQuery,
};
use crate::harmonic::{GridSpec, HarmonicMap};
use crate::series::DEFAULT_TRUNCATION_ORDER;
use crate::transforms::{precompose_mobius, projection, strip_to_disk};
use crate::verify::{
    run_corpus, sharpness_search, CorpusConfig, Inequality, SharpnessFamily, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hschwarz",
    version,
    about = "Interior and boundary Schwarz-type bounds for harmonic self-maps of the disk",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one of the closed-form bounds to 15 significant digits.
    Bound(BoundArgs),
    /// Transform a harmonic-map JSON file (Möbius precomposition or strip transport).
    Compose(ComposeArgs),
    /// Run a seeded verification corpus and emit its report.
    Verify(VerifyArgs),
    /// Probe the tightness of the boundary bound over a witness family.
    Sharpness(SharpnessArgs),
    /// Render a report JSON as text and plot-ready CSV.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Which bound: lemma-a | lemma-b | lemma1.3 | 1.1 | 1.2 | limit-slope |
    /// limit-slope-numeric | moebius-ratio
    #[arg(long)]
    theorem: String,
    /// Zero order p >= 1.
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Derivative aggregate; accepts a decimal or the exact token "4/pi"
    /// ("4/π"). Interpreted as |a_p| for lemma-a.
    #[arg(long, value_parser = parse_s, default_value = "0")]
    s: f64,
    /// Radius in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Interior zero (complex, e.g. "0.5" or "0.3+0.2i").
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    a: Complex64,
    /// Boundary point (unimodular complex).
    #[arg(long, value_parser = parse_complex, default_value = "1")]
    alpha: Complex64,
    /// Argument x of the Möbius ratio.
    #[arg(long, default_value_t = 0.0)]
    x: f64,
}

#[derive(Args, Debug)]
struct ComposeArgs {
    /// Input harmonic-map JSON.
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Precompose with the disk automorphism interchanging 0 and a.
    #[arg(long, value_parser = parse_complex, conflicts_with = "strip_theta")]
    mobius_a: Option<Complex64>,
    /// Project onto the angle-theta strip map and transport to the disk;
    /// emits a series JSON.
    #[arg(long)]
    strip_theta: Option<f64>,
    /// Truncation order of the result.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_ORDER)]
    order: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// lemma1.3 | boundary | eq1.2 | transport | strip
    #[arg(long)]
    inequality: String,
    /// Samples per zero order.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Zero orders to sweep (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
    p: Vec<usize>,
    /// Degrees cycle over p..=p+degree-span.
    #[arg(long, default_value_t = 4)]
    degree_span: usize,
    /// Coefficient damping in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    decay: f64,
    #[arg(long, default_value_t = 64)]
    radii: usize,
    #[arg(long, default_value_t = 256)]
    angles: usize,
    #[arg(long, default_value_t = 0.999)]
    rmax: f64,
    /// Margin tolerance; defaults to the inequality's own tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Report JSON path; stdout when omitted.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Also write per-sample rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SharpnessArgs {
    /// rotation | mobius | polynomial
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Polynomial degree for the coefficient-space family.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Simplex iteration cap; 0 means 200 per dimension.
    #[arg(long, default_value_t = 0)]
    iterations: usize,
    /// Trace JSON path; stdout summary otherwise.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Report JSON produced by `verify`.
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Plot-ready CSV output path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_s(raw: &str) -> Result<f64, String> {
    match raw.trim() {
        "4/pi" | "4/π" => Ok(4.0 / std::f64::consts::PI),
        "2/pi" | "2/π" => Ok(2.0 / std::f64::consts::PI),
        other => other.parse::<f64>().map_err(|e| e.to_string()),
    }
}

fn parse_complex(raw: &str) -> Result<Complex64, String> {
    Complex64::from_str(raw.trim()).map_err(|e| format!("invalid complex number: {e:?}"))
}

/// Fixed 15-significant-digit decimal rendering, so outputs diff cleanly
/// across implementations.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("malformed JSON in {}: {e}", path.display())))
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn run_bound(args: &BoundArgs) -> Result<i32, Failure> {
    let value = match args.theorem.as_str() {
        "lemma-a" | "lemmaA" => analytic_schwarz_pick_bound(args.p, args.s, args.r),
        "lemma-b" | "lemmaB" => classical_harmonic_bound(args.p, args.r),
        "lemma1.3" => improved_harmonic_bound(args.p, args.s, args.r),
        "1.1" | "thm1.1" => boundary_lower_bound(args.p, args.s),
        "1.2" | "thm1.2" => {
            let query = BoundQuery {
                p: args.p,
                s: args.s,
                r: 1.0,
                a: args.a,
                alpha: args.alpha,
                beta: Complex64::new(1.0, 0.0),
            };
            general_boundary_lower_bound(&query)
        }
        "limit-slope" => limit_slope(args.p, args.s),
        "limit-slope-numeric" => limit_slope_numeric(args.p, args.s),
        "moebius-ratio" => Ok(moebius_ratio(args.x, args.r)),
        other => return Err(Failure::usage(format!("unknown theorem selector '{other}'"))),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    println!("{}", format_significant(value, 15));
    Ok(EXIT_OK)
}

fn run_compose(args: &ComposeArgs) -> Result<i32, Failure> {
    let map: HarmonicMap = read_json(&args.input)?;
    match (args.mobius_a, args.strip_theta) {
        (Some(a), None) => {
            let transported = precompose_mobius(&map, a, args.order)
                .map_err(|e| Failure::usage(e.to_string()))?;
            write_or_print(args.output.as_deref(), &to_pretty_json(&transported))?;
        }
        (None, Some(theta)) => {
            let f = projection(&map, theta).map_err(|e| Failure::usage(e.to_string()))?;
            let delta =
                strip_to_disk(&f, args.order).map_err(|e| Failure::usage(e.to_string()))?;
            write_or_print(args.output.as_deref(), &to_pretty_json(&delta))?;
        }
        _ => {
            return Err(Failure::usage("exactly one of --mobius-a or --strip-theta is required"))
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let inequality = Inequality::parse(&args.inequality)
        .ok_or_else(|| Failure::usage(format!("unknown inequality '{}'", args.inequality)))?;
    let mut cfg = CorpusConfig::new(inequality, args.samples, args.seed);
    cfg.p_values = args.p.clone();
    cfg.degree_span = args.degree_span;
    cfg.decay = args.decay;
    cfg.grid = GridSpec { radii: args.radii, angles: args.angles, r_max: args.rmax };
    if let Some(tol) = args.tol {
        cfg.tolerance = tol;
    }
    let report = run_corpus(&cfg).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(csv) = &args.csv {
        std::fs::write(csv, report.to_csv())
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", csv.display())))?;
    }
    match &args.output {
        Some(path) => {
            std::fs::write(path, to_pretty_json(&report))
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
            print!("{}", report.render_text());
        }
        None => print!("{}", to_pretty_json(&report)),
    }
    if report.passed() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "violations: {} (min margin {:.3e}, worst case {:?})",
            report.violations, report.min_margin, report.worst_case
        );
        Ok(EXIT_VIOLATIONS)
    }
}

fn run_sharpness(args: &SharpnessArgs) -> Result<i32, Failure> {
    let family = SharpnessFamily::parse(&args.family)
        .ok_or_else(|| Failure::usage(format!("unknown family '{}'", args.family)))?;
    let result = sharpness_search(args.p, family, args.seed, args.degree, args.iterations)
        .map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(path) = &args.output {
        std::fs::write(path, to_pretty_json(&result))
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    }
    println!(
        "best margin {} after {} evaluations (params {:?})",
        format_significant(result.best_margin, 15),
        result.evaluations,
        result.best_params
    );
    if result.suspected_error {
        eprintln!(
            "negative margin {:.3e}: the bound forbids this; suspected implementation error",
            result.best_margin
        );
        return Ok(EXIT_VIOLATIONS);
    }
    Ok(EXIT_OK)
}

fn run_report(args: &ReportArgs) -> Result<i32, Failure> {
    let report: VerificationReport = read_json(&args.input)?;
    print!("{}", report.render_text());
    if let Some(csv) = &args.csv {
        std::fs::write(csv, report.to_csv())
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", csv.display())))?;
    }
    Ok(EXIT_OK)
}

/// Parses argv and runs the selected command, returning the process exit
/// status.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { EXIT_OK } else { EXIT_USAGE };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Bound(args) => run_bound(args),
        Command::Compose(args) => run_compose(args),
        Command::Verify(args) => run_verify(args),
        Command::Sharpness(args) => run_sharpness(args),
        Command::Report(args) => run_report(args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}
