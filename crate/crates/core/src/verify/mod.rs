//! Grid verification of every inequality and identity: sample generation,
//! per-sample checks, report merging, corpus runners, and the
//! derivative-free sharpness probe for the boundary bound.
//!
//! Reports are deterministic in the configuration: the same flags always
//! produce byte-identical JSON and CSV.

mod rng;
mod sample;
mod simplex;

pub use rng::Rng;
pub use sample::{
    generate, generate_boundary_witness, generate_strip_sample, mobius_witness, BoundaryWitness,
    SampleFamily, SampleSpec, BOUNDARY_SAMPLES, REJECTION_BUDGET, WITNESS_ORDER,
};
pub use simplex::TraceRow;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    self, classical_harmonic_bound, general_boundary_lower_bound, improved_harmonic_bound,
    BoundQuery, BoundsError, FOUR_OVER_PI,
};
use crate::harmonic::{GridSpec, HarmonicError, HarmonicMap, ZERO_ORDER_TOL};
use crate::series::{ComplexSeries, SeriesError, DEFAULT_TRUNCATION_ORDER};
use crate::transforms::{
    cayley_disk_value, precompose_mobius, strip_to_disk, strip_to_disk_value, TransformError,
};

/// Interior inequality tolerance.
pub const INTERIOR_TOL: f64 = 1e-9;

/// Boundary inequality tolerance (derivative evaluation near |z| = 1
/// amplifies round-off).
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Algebraic identity tolerance.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Transport magnitude identity tolerance.
pub const TRANSPORT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("invalid sample spec (need p >= 1, degree >= p, decay in (0,1))")]
    InvalidSpec,
    #[error("generation failed for seed {seed} after {attempts} attempts")]
    GenerationFailed { seed: u64, attempts: usize },
    #[error("witness is not unimodular at the boundary point: |w(alpha)| = {modulus}")]
    WitnessInvalid { modulus: f64 },
    #[error("cannot merge reports for different inequalities")]
    MergeMismatch,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Which inequality a corpus run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// Interior arctan bound with the Möbius sharpening.
    InteriorBound,
    /// Boundary derivative lower bounds (both boundary theorems).
    BoundaryTheorem,
    /// Coefficient bound |a_n| + |b_n| <= 4/pi.
    CoefficientBound,
    /// Zero-order and magnitude identities under disk automorphisms.
    TransportIdentities,
    /// Tangent strip-to-disk transport postconditions.
    StripTransport,
}

impl Inequality {
    pub fn label(&self) -> &'static str {
        match self {
            Inequality::InteriorBound => "lemma1.3",
            Inequality::BoundaryTheorem => "boundary",
            Inequality::CoefficientBound => "eq1.2",
            Inequality::TransportIdentities => "transport",
            Inequality::StripTransport => "strip",
        }
    }

    pub fn parse(label: &str) -> Option<Inequality> {
        match label {
            "lemma1.3" => Some(Inequality::InteriorBound),
            "boundary" | "thm1.1" | "thm1.2" => Some(Inequality::BoundaryTheorem),
            "eq1.2" => Some(Inequality::CoefficientBound),
            "transport" => Some(Inequality::TransportIdentities),
            "strip" => Some(Inequality::StripTransport),
            _ => None,
        }
    }
}

/// One CSV row: the worst node of one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub inequality: String,
    pub seed: u64,
    pub p: usize,
    pub s: f64,
    pub grid_r: f64,
    pub grid_theta: f64,
    pub attained: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Location of the corpus-wide worst margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub seed: u64,
    pub grid_index: usize,
    pub grid_r: f64,
    pub grid_theta: f64,
}

/// Aggregated verdict of a verification run. `violations == 0` is the pass
/// criterion; the minimum margin is recorded regardless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checked_inequality: String,
    pub samples: usize,
    pub grid_points: usize,
    pub tolerance: f64,
    pub violations: usize,
    pub min_margin: f64,
    pub worst_case: Option<WorstCase>,
    /// Interior runs also carry the weaker classical-bound margin.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_classical_margin: Option<f64>,
    /// Minimum slack in the chain improved <= classical <= (4/pi) r^p.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_chain_slack: Option<f64>,
    /// Boundary runs count finite-difference disagreements separately.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative_mismatches: Option<usize>,
    pub records: Vec<SampleRecord>,
}

impl VerificationReport {
    fn new(inequality: Inequality, tolerance: f64) -> Self {
        VerificationReport {
            checked_inequality: inequality.label().to_string(),
            samples: 0,
            grid_points: 0,
            tolerance,
            violations: 0,
            min_margin: f64::INFINITY,
            worst_case: None,
            min_classical_margin: None,
            min_chain_slack: None,
            derivative_mismatches: None,
            records: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.derivative_mismatches.unwrap_or(0) == 0
    }

    /// Associative, order-stable merge; worst-case ties break on the
    /// lexicographically smallest (seed, grid index).
    pub fn merge(&mut self, other: VerificationReport) -> Result<(), VerifyError> {
        if self.checked_inequality != other.checked_inequality
            || self.tolerance != other.tolerance
        {
            return Err(VerifyError::MergeMismatch);
        }
        self.samples += other.samples;
        self.grid_points += other.grid_points;
        self.violations += other.violations;
        let take_other = if other.min_margin < self.min_margin {
            true
        } else if other.min_margin == self.min_margin {
            match (&self.worst_case, &other.worst_case) {
                (Some(a), Some(b)) => (b.seed, b.grid_index) < (a.seed, a.grid_index),
                (None, Some(_)) => true,
                _ => false,
            }
        } else {
            false
        };
        if take_other {
            self.min_margin = other.min_margin;
            self.worst_case = other.worst_case;
        }
        self.min_classical_margin = merge_min(self.min_classical_margin, other.min_classical_margin);
        self.min_chain_slack = merge_min(self.min_chain_slack, other.min_chain_slack);
        self.derivative_mismatches = match (self.derivative_mismatches, other.derivative_mismatches)
        {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
        };
        self.records.extend(other.records);
        Ok(())
    }

    /// Plot-ready CSV with one row per sample (its worst node).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("inequality,seed,p,s,grid_r,grid_theta,attained,bound,margin\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.inequality, r.seed, r.p, r.s, r.grid_r, r.grid_theta, r.attained, r.bound,
                r.margin
            ));
        }
        out
    }

    /// Human-readable rendering used by the CLI `report` command.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "inequality      : {}\nsamples         : {}\ngrid points     : {}\ntolerance       : {:e}\nviolations      : {}\nmin margin      : {:.15e}\n",
            self.checked_inequality,
            self.samples,
            self.grid_points,
            self.tolerance,
            self.violations,
            self.min_margin
        ));
        if let Some(w) = &self.worst_case {
            out.push_str(&format!(
                "worst case      : seed {} at node {} (r = {:.6}, theta = {:.6})\n",
                w.seed, w.grid_index, w.grid_r, w.grid_theta
            ));
        }
        if let Some(m) = self.min_classical_margin {
            out.push_str(&format!("classical margin: {m:.15e}\n"));
        }
        if let Some(m) = self.min_chain_slack {
            out.push_str(&format!("chain slack     : {m:.15e}\n"));
        }
        if let Some(d) = self.derivative_mismatches {
            out.push_str(&format!("fd mismatches   : {d}\n"));
        }
        out.push_str(&format!(
            "verdict         : {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn merge_min(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Checks the sharpened interior bound at every grid node of one sample,
/// recording the weaker classical margin and the bound-chain slack as well.
pub fn check_interior_bound(
    w: &HarmonicMap,
    seed: u64,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let zo = w.zero_order_at(Complex64::new(0.0, 0.0), ZERO_ORDER_TOL)?;
    let s = zo.lambda_p;
    let mut report = VerificationReport::new(Inequality::InteriorBound, tol);
    report.samples = 1;
    report.grid_points = grid.node_count();

    let mut worst = (f64::INFINITY, 0usize, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut min_classical = f64::INFINITY;
    let mut min_chain = f64::INFINITY;
    for (index, (r, theta, z)) in grid.nodes().enumerate() {
        let attained = w.eval(z).norm();
        let bound = improved_harmonic_bound(zo.p, s, r)?;
        let classical = classical_harmonic_bound(zo.p, r)?;
        let linear = FOUR_OVER_PI * r.powi(zo.p as i32);
        let margin = bound - attained;
        min_classical = min_classical.min(classical - attained);
        min_chain = min_chain.min(classical - bound).min(linear - classical);
        if margin < -tol {
            report.violations += 1;
        }
        if margin < worst.0 {
            worst = (margin, index, r, theta, attained, bound);
        }
    }
    report.min_margin = worst.0;
    report.worst_case =
        Some(WorstCase { seed, grid_index: worst.1, grid_r: worst.2, grid_theta: worst.3 });
    report.min_classical_margin = Some(min_classical);
    report.min_chain_slack = Some(min_chain);
    report.records.push(SampleRecord {
        inequality: Inequality::InteriorBound.label().to_string(),
        seed,
        p: zo.p,
        s,
        grid_r: worst.2,
        grid_theta: worst.3,
        attained: worst.4,
        bound: worst.5,
        margin: worst.0,
    });
    Ok(report)
}

/// The directional derivative quantity and its lower bound at a boundary
/// witness point. Shared by the checker and the sharpness objective.
fn boundary_margin_parts(
    w: &HarmonicMap,
    zero: Complex64,
    alpha: Complex64,
) -> Result<(f64, f64, f64, usize), VerifyError> {
    let beta = w.eval(alpha);
    if (beta.norm() - 1.0).abs() > 1e-9 {
        return Err(VerifyError::WitnessInvalid { modulus: beta.norm() });
    }
    let zo = w.zero_order_at(zero, ZERO_ORDER_TOL)?;
    let s = zo.lambda_p * (1.0 - zero.norm_sqr()).powi(zo.p as i32);
    let query = BoundQuery { p: zo.p, s, r: 1.0, a: zero, alpha, beta };
    let bound = general_boundary_lower_bound(&query)?;
    let (wz, wzb) = w.wirtinger(alpha);
    let attained = (beta.conj() * (wz * alpha + wzb * alpha.conj())).re;
    Ok((attained, bound, s, zo.p))
}

/// Checks one boundary witness: the exact series derivative against the
/// transported lower bound, plus a radial finite-difference cross-check of
/// the directional quantity.
pub fn check_boundary_theorem(
    w: &HarmonicMap,
    zero: Complex64,
    alpha: Complex64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let (attained, bound, s, p) = boundary_margin_parts(w, zero, alpha)?;
    let beta = w.eval(alpha);
    let margin = attained - bound;

    // Radial difference quotient of Re(conj(beta) w(r alpha)) as r -> 1.
    let at_alpha = (beta.conj() * w.eval(alpha)).re;
    let mut fd_best = f64::INFINITY;
    for k in 3..=6 {
        let eps = 10f64.powi(-k);
        let quotient = (at_alpha - (beta.conj() * w.eval(alpha * (1.0 - eps))).re) / eps;
        fd_best = fd_best.min((quotient - attained).abs());
    }
    let fd_ok = fd_best <= 1e-3 * attained.abs().max(1.0);

    let mut report = VerificationReport::new(Inequality::BoundaryTheorem, tol);
    report.samples = 1;
    report.grid_points = 1;
    report.violations = usize::from(margin < -tol);
    report.derivative_mismatches = Some(usize::from(!fd_ok));
    report.min_margin = margin;
    report.worst_case =
        Some(WorstCase { seed, grid_index: 0, grid_r: 1.0, grid_theta: alpha.arg() });
    report.records.push(SampleRecord {
        inequality: Inequality::BoundaryTheorem.label().to_string(),
        seed,
        p,
        s,
        grid_r: 1.0,
        grid_theta: alpha.arg(),
        attained,
        bound,
        margin,
    });
    Ok(report)
}

/// Checks the coefficient bound margins `4/pi - (|a_n| + |b_n|) >= 0` for
/// `n = 1..=n_max` on a canonical map.
pub fn check_coefficient_margins(
    w: &HarmonicMap,
    seed: u64,
    n_max: usize,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let mut report = VerificationReport::new(Inequality::CoefficientBound, tol);
    report.samples = 1;
    report.grid_points = n_max;
    let mut worst = (f64::INFINITY, 1usize, 0.0f64);
    for n in 1..=n_max {
        let margin = bounds::coefficient_margin(w, n)?;
        if margin < -tol {
            report.violations += 1;
        }
        if margin < worst.0 {
            worst = (margin, n, FOUR_OVER_PI - margin);
        }
    }
    report.min_margin = worst.0;
    report.worst_case =
        Some(WorstCase { seed, grid_index: worst.1, grid_r: worst.1 as f64, grid_theta: 0.0 });
    report.records.push(SampleRecord {
        inequality: Inequality::CoefficientBound.label().to_string(),
        seed,
        p: worst.1,
        s: worst.2,
        grid_r: worst.1 as f64,
        grid_theta: 0.0,
        attained: worst.2,
        bound: FOUR_OVER_PI,
        margin: worst.0,
    });
    Ok(report)
}

/// Checks the automorphism transport package for a map with a zero at `a`:
/// the zero order survives precomposition, the first p-1 derivatives of
/// the transported map vanish, and the magnitude identity
/// `|H_p| + |G_p| = Lambda^(p)(a) (1 - |a|^2)^p` holds.
pub fn check_transport_identities(
    w: &HarmonicMap,
    a: Complex64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let zo = w.zero_order_at(a, ZERO_ORDER_TOL)?;
    let order = w.truncation_order().max(DEFAULT_TRUNCATION_ORDER);
    let transported = precompose_mobius(w, a, order)?;
    let scale = transported.coeff_scale().max(1e-12);

    let mut report = VerificationReport::new(Inequality::TransportIdentities, tol);
    report.samples = 1;
    report.grid_points = zo.p + 1;

    // Zero order must transport unchanged.
    let order_ok = transported
        .zero_order_at(Complex64::new(0.0, 0.0), ZERO_ORDER_TOL)
        .map(|t| t.p == zo.p)
        .unwrap_or(false);
    if !order_ok {
        report.violations += 1;
    }

    // D^n W(0) = 0 for n < p, at coefficient level relative to scale.
    let mut low_dev = 0.0f64;
    for n in 1..zo.p {
        let dev = transported.h().coeff(n).norm() + transported.g().coeff(n).norm();
        low_dev = low_dev.max(dev / scale);
    }
    if low_dev > IDENTITY_TOL {
        report.violations += 1;
    }

    // Magnitude identity.
    let lhs = transported.h().coeff(zo.p).norm() + transported.g().coeff(zo.p).norm();
    let rhs = zo.lambda_p * (1.0 - a.norm_sqr()).powi(zo.p as i32);
    let identity_dev = (lhs - rhs).abs() / rhs.max(1.0);
    if identity_dev > tol {
        report.violations += 1;
    }

    let margin = -(identity_dev.max(low_dev).max(if order_ok { 0.0 } else { 1.0 }));
    report.min_margin = margin;
    report.worst_case =
        Some(WorstCase { seed, grid_index: 0, grid_r: a.norm(), grid_theta: a.arg() });
    report.records.push(SampleRecord {
        inequality: Inequality::TransportIdentities.label().to_string(),
        seed,
        p: zo.p,
        s: rhs,
        grid_r: a.norm(),
        grid_theta: a.arg(),
        attained: lhs,
        bound: rhs,
        margin,
    });
    Ok(report)
}

/// Checks the tangent transport postconditions for one strip-valued `f`:
/// disk membership of `delta` on the 0.95-grid (by direct transcendental
/// evaluation of tan((pi/4) f)), zero-order preservation, the derivative
/// scaling `D^p delta(0) = (pi/4) D^p f(0)`, and the Cayley identity
/// `d = i delta` against the truncated series on |z| <= 0.5, where the
/// Cauchy tail bound certifies agreement beyond the tolerance.
pub fn check_strip_transport(
    f: &ComplexSeries,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let scale = f.coeff_scale().max(1e-12);
    let p = f.zero_order(ZERO_ORDER_TOL * scale).ok_or(VerifyError::InvalidSpec)?;
    let delta = strip_to_disk(f, DEFAULT_TRUNCATION_ORDER)?;

    let mut report = VerificationReport::new(Inequality::StripTransport, tol);
    report.samples = 1;

    // Zero order preserved.
    let delta_scale = delta.coeff_scale().max(1e-12);
    if delta.zero_order(ZERO_ORDER_TOL * delta_scale) != Some(p) {
        report.violations += 1;
    }

    // Derivative scaling at the zero.
    let dev_deriv = (delta.coeff(p) - f.coeff(p) * std::f64::consts::FRAC_PI_4).norm() / scale;
    if dev_deriv > tol {
        report.violations += 1;
    }

    // Disk membership on the 0.95-grid.
    let grid = GridSpec { radii: 24, angles: 48, r_max: 0.95 };
    let mut min_room = f64::INFINITY;
    for (_, _, z) in grid.nodes() {
        let dv = strip_to_disk_value(f.eval(z));
        min_room = min_room.min(1.0 - dv.norm());
        if dv.norm() >= 1.0 {
            report.violations += 1;
        }
    }
    report.grid_points = grid.node_count();

    // Cayley route against the series on 100 points with |z| <= 0.5.
    let mut max_cayley_dev = 0.0f64;
    for k in 0..100 {
        let z = Complex64::from_polar(0.5 * (k as f64 + 1.0) / 100.0, 0.394 * k as f64);
        let d = cayley_disk_value(f.eval(z));
        let dev = (d - Complex64::new(0.0, 1.0) * delta.eval(z)).norm();
        max_cayley_dev = max_cayley_dev.max(dev);
    }
    if max_cayley_dev > tol {
        report.violations += 1;
    }

    let margin = -(dev_deriv.max(max_cayley_dev).max(if min_room <= 0.0 { 1.0 } else { 0.0 }));
    report.min_margin = margin;
    report.worst_case = Some(WorstCase { seed, grid_index: 0, grid_r: 0.0, grid_theta: 0.0 });
    report.records.push(SampleRecord {
        inequality: Inequality::StripTransport.label().to_string(),
        seed,
        p,
        s: f.coeff(p).norm(),
        grid_r: 0.95,
        grid_theta: 0.0,
        attained: max_cayley_dev,
        bound: tol,
        margin,
    });
    Ok(report)
}

/// Configuration of a corpus run. All fields participate in the seed
/// derivation, so identical configs reproduce identical reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub inequality: Inequality,
    pub samples: usize,
    pub seed: u64,
    pub p_values: Vec<usize>,
    /// Degrees cycle over p..=p+degree_span.
    pub degree_span: usize,
    pub decay: f64,
    pub grid: GridSpec,
    pub tolerance: f64,
}

impl CorpusConfig {
    pub fn new(inequality: Inequality, samples: usize, seed: u64) -> Self {
        let tolerance = match inequality {
            Inequality::InteriorBound => INTERIOR_TOL,
            Inequality::BoundaryTheorem => BOUNDARY_TOL,
            Inequality::CoefficientBound => INTERIOR_TOL,
            Inequality::TransportIdentities => TRANSPORT_TOL,
            Inequality::StripTransport => IDENTITY_TOL,
        };
        CorpusConfig {
            inequality,
            samples,
            seed,
            p_values: vec![1, 2, 3],
            degree_span: 4,
            decay: 0.5,
            grid: GridSpec::default(),
            tolerance,
        }
    }
}

/// Per-sample seed derivation: mixes the master seed with the (p, index)
/// stream labels through the generator's own scramble.
fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut r = Rng::new(master ^ stream.wrapping_mul(0xA076_1D64_78BD_642F));
    r.next_u64().wrapping_add(index.wrapping_mul(0xE703_7ED1_A0B4_28DB))
}

/// Runs the configured corpus and merges every per-sample report.
pub fn run_corpus(cfg: &CorpusConfig) -> Result<VerificationReport, VerifyError> {
    let mut report = VerificationReport::new(cfg.inequality, cfg.tolerance);
    match cfg.inequality {
        Inequality::InteriorBound => {
            for &p in &cfg.p_values {
                for i in 0..cfg.samples {
                    let spec = SampleSpec {
                        seed: derive_seed(cfg.seed, p as u64, i as u64),
                        p,
                        degree: p + (i % (cfg.degree_span + 1)),
                        family: SampleFamily::Polynomial,
                        decay: cfg.decay,
                    };
                    let w = generate(&spec)?;
                    report.merge(check_interior_bound(&w, spec.seed, &cfg.grid, cfg.tolerance)?)?;
                }
            }
        }
        Inequality::BoundaryTheorem => {
            for &p in &cfg.p_values {
                for i in 0..cfg.samples {
                    let spec = SampleSpec {
                        seed: derive_seed(cfg.seed, p as u64, i as u64),
                        p,
                        degree: p + (i % (cfg.degree_span + 1)),
                        family: SampleFamily::Polynomial,
                        decay: cfg.decay,
                    };
                    let witness = generate_boundary_witness(&spec)?;
                    report.merge(check_boundary_theorem(
                        &witness.map,
                        witness.zero,
                        witness.alpha,
                        spec.seed,
                        cfg.tolerance,
                    )?)?;
                }
                // Closed-form monomial witness w = z^p.
                let monomial = HarmonicMap::analytic(ComplexSeries::monomial(
                    Complex64::new(0.0, 0.0),
                    p,
                    Complex64::new(1.0, 0.0),
                    DEFAULT_TRUNCATION_ORDER,
                ));
                report.merge(check_boundary_theorem(
                    &monomial,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    // Closed-form witnesses get small synthetic ids so the
                    // CSV rows cannot collide with derived sample seeds.
                    1_000 + p as u64,
                    cfg.tolerance,
                )?)?;
            }
            if cfg.p_values.contains(&1) {
                for (i, a) in [0.0, 0.3, 0.5, 0.8].into_iter().enumerate() {
                    let witness = mobius_witness(
                        Complex64::new(a, 0.0),
                        Complex64::new(1.0, 0.0),
                        1,
                        WITNESS_ORDER,
                    )?;
                    report.merge(check_boundary_theorem(
                        &witness,
                        Complex64::new(a, 0.0),
                        Complex64::new(1.0, 0.0),
                        2_000 + i as u64,
                        cfg.tolerance,
                    )?)?;
                }
            }
        }
        Inequality::CoefficientBound => {
            for i in 0..cfg.samples {
                let spec = SampleSpec {
                    seed: derive_seed(cfg.seed, 0, i as u64),
                    p: 1,
                    degree: 1,
                    family: SampleFamily::PoissonExtension,
                    decay: cfg.decay,
                };
                let w = generate(&spec)?;
                report.merge(check_coefficient_margins(&w, spec.seed, 16, cfg.tolerance)?)?;
            }
        }
        Inequality::TransportIdentities => {
            for &p in &cfg.p_values {
                for i in 0..cfg.samples {
                    let spec = SampleSpec {
                        seed: derive_seed(cfg.seed, p as u64, i as u64),
                        p,
                        degree: p + (i % (cfg.degree_span + 1)),
                        family: SampleFamily::Polynomial,
                        decay: cfg.decay,
                    };
                    let base = generate(&spec)?;
                    // Relocate the zero to a via precomposition; |a| <= 0.5
                    // keeps the truncation tail of the order-48 composition
                    // far below the identity tolerances.
                    let mut r = Rng::new(spec.seed ^ 0x5851_F42D_4C95_7F2D);
                    let a = Complex64::from_polar(
                        0.5 * r.uniform().sqrt(),
                        2.0 * std::f64::consts::PI * r.uniform(),
                    );
                    let relocated = precompose_mobius(&base, a, 48)?;
                    report.merge(check_transport_identities(
                        &relocated,
                        a,
                        spec.seed,
                        cfg.tolerance,
                    )?)?;
                }
            }
        }
        Inequality::StripTransport => {
            for i in 0..cfg.samples {
                let p = cfg.p_values[i % cfg.p_values.len()];
                let spec = SampleSpec {
                    seed: derive_seed(cfg.seed, p as u64, i as u64),
                    p,
                    degree: p + (i % (cfg.degree_span + 1)),
                    family: SampleFamily::Polynomial,
                    decay: cfg.decay,
                };
                let f = generate_strip_sample(&spec)?;
                report.merge(check_strip_transport(&f, spec.seed, cfg.tolerance)?)?;
            }
        }
    }
    Ok(report)
}

/// Parameter families for the sharpness probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharpnessFamily {
    /// w = e^{i theta} z^p; one angle parameter. The margin is constant.
    Rotation,
    /// w = e^{i theta} ((z-a)/(1-a z))^p over real a in [0, 0.9].
    Mobius,
    /// Coefficient-space search over normalized polynomial witnesses.
    Polynomial,
}

impl SharpnessFamily {
    pub fn parse(label: &str) -> Option<Self> {
        match label {
            "rotation" => Some(SharpnessFamily::Rotation),
            "mobius" => Some(SharpnessFamily::Mobius),
            "polynomial" => Some(SharpnessFamily::Polynomial),
            _ => None,
        }
    }
}

/// Outcome of the sharpness probe: the smallest boundary margin found and
/// the full evaluation trace. A negative best margin is flagged as a
/// suspected implementation error (the bound forbids it), never silently
/// returned.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub family: SharpnessFamily,
    pub p: usize,
    pub seed: u64,
    pub iterations: usize,
    pub evaluations: usize,
    pub best_margin: f64,
    pub best_params: Vec<f64>,
    /// Evaluations whose parameters left the admissible region and were
    /// projected back.
    pub projections: usize,
    pub suspected_error: bool,
    pub trace: Vec<TraceRow>,
}

const PENALTY: f64 = 1e3;

fn rotation_margin(p: usize, theta: f64) -> Result<f64, VerifyError> {
    let rotation = Complex64::from_polar(1.0, theta);
    let w = HarmonicMap::analytic(ComplexSeries::monomial(
        Complex64::new(0.0, 0.0),
        p,
        rotation,
        DEFAULT_TRUNCATION_ORDER,
    ));
    let (attained, bound, _, _) =
        boundary_margin_parts(&w, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))?;
    Ok(attained - bound)
}

fn mobius_margin(p: usize, a: f64, theta: f64) -> Result<f64, VerifyError> {
    let a = Complex64::new(a, 0.0);
    let w = mobius_witness(a, Complex64::from_polar(1.0, theta), p, WITNESS_ORDER)?;
    let (attained, bound, _, _) = boundary_margin_parts(&w, a, Complex64::new(1.0, 0.0))?;
    Ok(attained - bound)
}

fn polynomial_margin(p: usize, params: &[f64]) -> f64 {
    let tail = params.len() / 4;
    let order = DEFAULT_TRUNCATION_ORDER;
    let mut hc = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut gc = vec![Complex64::new(0.0, 0.0); order + 1];
    for k in 0..tail {
        hc[p + k] = Complex64::new(params[2 * k], params[2 * k + 1]);
        gc[p + k] = Complex64::new(params[2 * tail + 2 * k], params[2 * tail + 2 * k + 1]);
    }
    if hc[p].norm() < 1e-6 {
        return PENALTY;
    }
    if gc[p].norm() >= hc[p].norm() {
        let shrink = 0.9 * hc[p].norm() / gc[p].norm();
        for c in gc.iter_mut() {
            *c *= shrink;
        }
    }
    let h = ComplexSeries::new(Complex64::new(0.0, 0.0), hc).expect("finite");
    let g = ComplexSeries::new(Complex64::new(0.0, 0.0), gc).expect("finite");
    let w = match HarmonicMap::new(h, g) {
        Ok(w) => w,
        Err(_) => return PENALTY,
    };
    // Normalize the boundary maximum to 1 at its argmax node.
    let mut best = (0.0f64, Complex64::new(1.0, 0.0));
    for k in 0..BOUNDARY_SAMPLES {
        let t = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64;
        let z = Complex64::from_polar(1.0, t);
        let v = w.eval(z).norm();
        if v > best.0 {
            best = (v, z);
        }
    }
    if best.0 == 0.0 {
        return PENALTY;
    }
    let scale = Complex64::new(1.0 / best.0, 0.0);
    let w = HarmonicMap::new(w.h().scale(scale), w.g().scale(scale)).expect("same center");
    if !w.is_sense_preserving(&GridSpec::default()).sense_preserving {
        return PENALTY;
    }
    match boundary_margin_parts(&w, Complex64::new(0.0, 0.0), best.1) {
        Ok((attained, bound, _, _)) => attained - bound,
        Err(_) => PENALTY,
    }
}

/// Derivative-free minimization of the boundary margin over a witness
/// family. Returns the smallest margin found together with the parameters
/// and trace; no sharpness claim beyond "best found".
pub fn sharpness_search(
    p: usize,
    family: SharpnessFamily,
    seed: u64,
    degree: usize,
    iterations: usize,
) -> Result<SharpnessResult, VerifyError> {
    if p == 0 || degree < p {
        return Err(VerifyError::InvalidSpec);
    }
    type Projection = Box<dyn Fn(&mut Vec<f64>)>;
    let mut rng = Rng::new(seed);
    let (x0, step, project): (Vec<f64>, f64, Projection) = match family {
        SharpnessFamily::Rotation => (
            vec![2.0 * std::f64::consts::PI * rng.uniform()],
            0.3,
            Box::new(|_x: &mut Vec<f64>| {}),
        ),
        SharpnessFamily::Mobius => (
            vec![0.5 * rng.uniform(), 2.0 * std::f64::consts::PI * rng.uniform()],
            0.1,
            Box::new(|x: &mut Vec<f64>| {
                x[0] = x[0].clamp(0.0, 0.9);
            }),
        ),
        SharpnessFamily::Polynomial => {
            let dim = 4 * (degree - p + 1);
            let x0 = (0..dim).map(|_| rng.complex_gaussian().re * 0.5).collect();
            (x0, 0.2, Box::new(|_x: &mut Vec<f64>| {}))
        }
    };
    let dim = x0.len();
    let cap = if iterations == 0 { 200 * dim } else { iterations };

    let objective = |x: &[f64]| -> f64 {
        match family {
            SharpnessFamily::Rotation => rotation_margin(p, x[0]).unwrap_or(PENALTY),
            SharpnessFamily::Mobius => mobius_margin(p, x[0], x[1]).unwrap_or(PENALTY),
            SharpnessFamily::Polynomial => polynomial_margin(p, x),
        }
    };
    let outcome = simplex::nelder_mead(objective, |x| project(x), &x0, step, cap);
    Ok(SharpnessResult {
        family,
        p,
        seed,
        iterations: cap,
        evaluations: outcome.evaluations,
        best_margin: outcome.best_objective,
        best_params: outcome.best_params,
        projections: outcome.projections,
        suspected_error: outcome.best_objective < -1e-6,
        trace: outcome.trace,
    })
}
