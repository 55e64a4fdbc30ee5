//! Seeded construction of verification inputs: random polynomial
//! self-maps with a prescribed zero order, Poisson-extension maps from
//! perturbed circle homeomorphisms, and closed-form Blaschke-power
//! witnesses.

use num_complex::Complex64;

use super::rng::Rng;
use super::VerifyError;
use crate::harmonic::{GridSpec, HarmonicMap};
use crate::series::{ComplexSeries, DEFAULT_TRUNCATION_ORDER};
use crate::transforms::MobiusAutomorphism;

/// Boundary samples used for normalization and Fourier analysis.
pub const BOUNDARY_SAMPLES: usize = 2048;

/// Redraws allowed before generation fails loudly.
pub const REJECTION_BUDGET: usize = 1000;

/// Truncation order for Blaschke-power witnesses: their coefficients decay
/// like |a|^k, and boundary derivatives need the tail below 1e-9 at
/// |a| = 0.8.
pub const WITNESS_ORDER: usize = 128;

/// Sample family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFamily {
    Polynomial,
    PoissonExtension,
    MobiusWitness,
}

/// Deterministic recipe for one sample.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleSpec {
    pub seed: u64,
    pub p: usize,
    /// Polynomial degree of h and g (>= p).
    pub degree: usize,
    pub family: SampleFamily,
    /// Coefficient damping ratio in (0, 1).
    pub decay: f64,
}

impl SampleSpec {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.p == 0 || self.degree < self.p || !(0.0..1.0).contains(&self.decay) || self.decay == 0.0
        {
            return Err(VerifyError::InvalidSpec);
        }
        Ok(())
    }
}

/// A normalized boundary witness: the map, the boundary node where its
/// modulus attains 1 exactly, and the location of its interior zero.
#[derive(Debug, Clone)]
pub struct BoundaryWitness {
    pub map: HarmonicMap,
    pub alpha: Complex64,
    pub zero: Complex64,
}

/// Rigorous supremum bound for |w| on the unit circle from `samples`
/// equispaced boundary values: sampled max plus a second-order Taylor
/// remainder driven by the coefficient sums K1 and K2.
fn certified_boundary_sup(values_max: f64, k1: f64, k2: f64, samples: usize) -> f64 {
    let dt = 2.0 * std::f64::consts::PI / samples as f64;
    // |w| near the true max: |w|^2 has second derivative bounded by
    // 2 (sup|w| K2 + K1^2), and sup|w| <= sampled + K1 dt / 2.
    let sup_coarse = values_max + k1 * dt / 2.0;
    let curvature = 2.0 * (sup_coarse * k2 + k1 * k1);
    (values_max * values_max + curvature * dt * dt / 8.0).sqrt()
}

fn boundary_nodes() -> impl Iterator<Item = (usize, Complex64)> {
    (0..BOUNDARY_SAMPLES).map(|k| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64;
        (k, Complex64::from_polar(1.0, t))
    })
}

struct PolynomialDraw {
    h: ComplexSeries,
    g: ComplexSeries,
    /// Sampled boundary maximum of |w| and its node index.
    boundary_max: f64,
    argmax: usize,
    /// Rigorous sup bound over the whole circle.
    certified_sup: f64,
}

/// Draws h = z^p A(z), g = z^p B(z) with damped complex-Gaussian
/// coefficients. B is rescaled against a coefficient lower bound for
/// |h'|/|z|^{p-1}, which makes |g'| < |h'| hold on the whole closed disk
/// (not just the certification grid) and enforces |B(0)| < |A(0)|; draws
/// whose A admits no such bound are rejected by the caller.
fn draw_polynomial(rng: &mut Rng, p: usize, degree: usize, decay: f64) -> Option<PolynomialDraw> {
    let tail = degree - p;
    let a: Vec<Complex64> =
        (0..=tail).map(|k| rng.complex_gaussian() * decay.powi(k as i32)).collect();
    let mut b: Vec<Complex64> =
        (0..=tail).map(|k| rng.complex_gaussian() * decay.powi(k as i32)).collect();
    let ratio = 0.15 + 0.7 * rng.uniform();

    // |h'(z)| / |z|^{p-1} >= p|A_0| - sum (p+k)|A_k| on the closed disk.
    let derivative_floor = (p as f64) * a[0].norm()
        - a.iter().enumerate().skip(1).map(|(k, c)| (p + k) as f64 * c.norm()).sum::<f64>();
    if derivative_floor <= 0.0 {
        return None;
    }
    let derivative_cap: f64 =
        b.iter().enumerate().map(|(k, c)| (p + k) as f64 * c.norm()).sum();
    if derivative_cap > 0.0 {
        let shrink = ratio * derivative_floor / derivative_cap;
        for c in b.iter_mut() {
            *c *= shrink;
        }
    }
    let order = DEFAULT_TRUNCATION_ORDER.max(degree);
    let mut hc = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut gc = vec![Complex64::new(0.0, 0.0); order + 1];
    hc[p..=degree].copy_from_slice(&a);
    gc[p..=degree].copy_from_slice(&b);
    let h = ComplexSeries::new(Complex64::new(0.0, 0.0), hc).expect("finite");
    let g = ComplexSeries::new(Complex64::new(0.0, 0.0), gc).expect("finite");

    let w = HarmonicMap::new(h.clone(), g.clone()).expect("same center");
    let mut boundary_max = 0.0;
    let mut argmax = 0;
    for (k, z) in boundary_nodes() {
        let v = w.eval(z).norm();
        if v > boundary_max {
            boundary_max = v;
            argmax = k;
        }
    }
    let (mut k1, mut k2) = (0.0, 0.0);
    for k in 1..=degree {
        let m = h.coeff(k).norm() + g.coeff(k).norm();
        k1 += k as f64 * m;
        k2 += (k * k) as f64 * m;
    }
    let certified_sup = certified_boundary_sup(boundary_max, k1, k2, BOUNDARY_SAMPLES);
    Some(PolynomialDraw { h, g, boundary_max, argmax, certified_sup })
}

/// Deterministic sample construction. Identical specs yield bit-identical
/// maps; the rejection budget is an error, never a silent reseed.
pub fn generate(spec: &SampleSpec) -> Result<HarmonicMap, VerifyError> {
    spec.validate()?;
    match spec.family {
        SampleFamily::Polynomial => {
            let mut rng = Rng::new(spec.seed);
            let grid = GridSpec::default();
            for _ in 0..REJECTION_BUDGET {
                let Some(draw) = draw_polynomial(&mut rng, spec.p, spec.degree, spec.decay)
                else {
                    continue;
                };
                // Certified self-map: divide by a rigorous sup bound so the
                // interior inequalities hold with no grid caveat.
                let scale = Complex64::new(1.0 / (draw.certified_sup * (1.0 + 1e-9)), 0.0);
                let w = HarmonicMap::new(draw.h.scale(scale), draw.g.scale(scale))
                    .expect("same center");
                if w.is_sense_preserving(&grid).sense_preserving {
                    return Ok(w);
                }
            }
            Err(VerifyError::GenerationFailed { seed: spec.seed, attempts: REJECTION_BUDGET })
        }
        SampleFamily::PoissonExtension => {
            let mut rng = Rng::new(spec.seed);
            Ok(poisson_extension(&mut rng, spec.decay))
        }
        SampleFamily::MobiusWitness => {
            let mut rng = Rng::new(spec.seed);
            let radius = 0.8 * rng.uniform().sqrt();
            let a = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * rng.uniform());
            let rotation = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.uniform());
            mobius_witness(a, rotation, spec.p, WITNESS_ORDER)
        }
    }
}

/// Polynomial witness for the boundary theorems: the boundary maximum 1 is
/// attained exactly at a grid node, which becomes the witness point alpha.
pub fn generate_boundary_witness(spec: &SampleSpec) -> Result<BoundaryWitness, VerifyError> {
    spec.validate()?;
    if spec.family != SampleFamily::Polynomial {
        return Err(VerifyError::InvalidSpec);
    }
    let mut rng = Rng::new(spec.seed);
    let grid = GridSpec::default();
    for _ in 0..REJECTION_BUDGET {
        let Some(draw) = draw_polynomial(&mut rng, spec.p, spec.degree, spec.decay) else {
            continue;
        };
        let scale = Complex64::new(1.0 / draw.boundary_max, 0.0);
        let map = HarmonicMap::new(draw.h.scale(scale), draw.g.scale(scale)).expect("same center");
        // Hypothesis guards: sense-preserving, and the derivative aggregate
        // respects the coefficient bound.
        if !map.is_sense_preserving(&grid).sense_preserving {
            continue;
        }
        let s = map.h().coeff(spec.p).norm() + map.g().coeff(spec.p).norm();
        if s > crate::bounds::FOUR_OVER_PI {
            continue;
        }
        let t = 2.0 * std::f64::consts::PI * draw.argmax as f64 / BOUNDARY_SAMPLES as f64;
        let alpha = Complex64::from_polar(1.0, t);
        return Ok(BoundaryWitness { map, alpha, zero: Complex64::new(0.0, 0.0) });
    }
    Err(VerifyError::GenerationFailed { seed: spec.seed, attempts: REJECTION_BUDGET })
}

/// `rotation * ((z - a)/(1 - conj(a) z))^p` as a harmonic map (g = 0).
/// An exact self-map with a zero of order p at `a` and, by construction,
/// `Lambda^(p)(a) (1 - |a|^2)^p = 1`.
pub fn mobius_witness(
    a: Complex64,
    rotation: Complex64,
    p: usize,
    order: usize,
) -> Result<HarmonicMap, VerifyError> {
    if p == 0 {
        return Err(VerifyError::InvalidSpec);
    }
    let blaschke = MobiusAutomorphism::new(a)?.series(order).scale(Complex64::new(-1.0, 0.0));
    let mut power = ComplexSeries::monomial(Complex64::new(0.0, 0.0), 0, Complex64::new(1.0, 0.0), order);
    for _ in 0..p {
        power = power.mul_truncated(&blaschke, order);
    }
    Ok(HarmonicMap::analytic(power.scale(rotation)))
}

/// Harmonic extension of `F(e^{it}) = exp(i (t + theta0 + P(t)))`, a
/// rotation composed with a bounded trigonometric perturbation, read off
/// through Fourier coefficients on the boundary sample grid: non-negative
/// frequencies feed h, negative frequencies feed g.
fn poisson_extension(rng: &mut Rng, decay: f64) -> HarmonicMap {
    let theta0 = 2.0 * std::f64::consts::PI * rng.uniform();
    let harmonics = 4;
    let mut amps = Vec::with_capacity(harmonics);
    let mut phases = Vec::with_capacity(harmonics);
    let mut total = 0.0;
    for j in 0..harmonics {
        let raw = rng.uniform() * decay.powi(j as i32);
        amps.push(raw);
        phases.push(2.0 * std::f64::consts::PI * rng.uniform());
        total += raw;
    }
    // Cap the total perturbation so the boundary function stays a gentle
    // deformation of the rotation.
    let cap = 0.55 * rng.uniform();
    if total > 0.0 {
        for a in amps.iter_mut() {
            *a *= cap / total;
        }
    }

    let order = DEFAULT_TRUNCATION_ORDER;
    let mut positive = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut negative = vec![Complex64::new(0.0, 0.0); order + 1];
    for (k, _) in boundary_nodes() {
        let t = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64;
        let mut phase = t + theta0;
        for j in 0..harmonics {
            phase += amps[j] * ((j as f64 + 1.0) * t + phases[j]).cos();
        }
        let f = Complex64::from_polar(1.0, phase);
        let base = Complex64::from_polar(1.0, -t);
        let mut pw = Complex64::new(1.0, 0.0);
        for n in 0..=order {
            positive[n] += f * pw;
            negative[n] += f * pw.conj();
            pw *= base;
        }
    }
    let inv = 1.0 / BOUNDARY_SAMPLES as f64;
    let hc: Vec<Complex64> = positive.iter().map(|c| c * inv).collect();
    let mut gc: Vec<Complex64> = negative.iter().map(|c| (c * inv).conj()).collect();
    gc[0] = Complex64::new(0.0, 0.0); // canonical form
    let h = ComplexSeries::new(Complex64::new(0.0, 0.0), hc).expect("finite");
    let g = ComplexSeries::new(Complex64::new(0.0, 0.0), gc).expect("finite");
    HarmonicMap::new(h, g).expect("same center")
}

/// Strip-valued analytic sample `f = z^p A(z)` normalized so that
/// `|Re f| < 1` on the closed disk, certified by the boundary remainder
/// bound. Used by the strip-transport suite.
pub fn generate_strip_sample(spec: &SampleSpec) -> Result<ComplexSeries, VerifyError> {
    spec.validate()?;
    let mut rng = Rng::new(spec.seed);
    let tail = spec.degree - spec.p;
    let coeffs: Vec<Complex64> =
        (0..=tail).map(|k| rng.complex_gaussian() * spec.decay.powi(k as i32)).collect();
    let order = DEFAULT_TRUNCATION_ORDER.max(spec.degree);
    let mut fc = vec![Complex64::new(0.0, 0.0); order + 1];
    fc[spec.p..=spec.degree].copy_from_slice(&coeffs);
    let f = ComplexSeries::new(Complex64::new(0.0, 0.0), fc).expect("finite");

    // Re f is harmonic, so its sup over the closed disk sits on the circle.
    let mut max_re = 0.0f64;
    for (_, z) in boundary_nodes() {
        max_re = max_re.max(f.eval(z).re.abs());
    }
    let mut k2 = 0.0;
    for k in 1..=spec.degree {
        k2 += (k * k) as f64 * f.coeff(k).norm();
    }
    let dt = 2.0 * std::f64::consts::PI / BOUNDARY_SAMPLES as f64;
    let sup = max_re + k2 * dt * dt / 8.0;
    Ok(f.scale(Complex64::new(1.0 / (sup * (1.0 + 1e-9)), 0.0)))
}
