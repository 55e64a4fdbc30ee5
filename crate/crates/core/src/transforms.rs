//! Constructive transport machinery: disk automorphisms and precomposition,
//! the directional projection of a harmonic map onto an analytic strip map,
//! and the tangent transport that carries strip maps back into the disk.

use num_complex::Complex64;
use thiserror::Error;

use crate::harmonic::{HarmonicError, HarmonicMap};
use crate::series::{compose, ComplexSeries, SeriesError};

/// How close to the unit circle the automorphism parameter may sit.
const DISK_MARGIN: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("automorphism parameter {0} is not strictly inside the disk")]
    ParameterOutsideDisk(Complex64),
    #[error("map must vanish at the origin (canonical form) before projection")]
    CanonicalizationRequired,
    #[error("strip map must vanish at the origin; f(0) = {0}")]
    NotNormalized(Complex64),
    #[error("|Re zeta| = {0} exceeds pi/2")]
    OutsideStrip(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

/// The involutive disk automorphism `phi_a(z) = (a - z) / (1 - conj(a) z)`,
/// which interchanges `a` and `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusAutomorphism {
    a: Complex64,
}

impl MobiusAutomorphism {
    pub fn new(a: Complex64) -> Result<Self, TransformError> {
        if a.norm() >= 1.0 - DISK_MARGIN {
            return Err(TransformError::ParameterOutsideDisk(a));
        }
        Ok(MobiusAutomorphism { a })
    }

    pub fn parameter(&self) -> Complex64 {
        self.a
    }

    /// `(a - z) / (1 - conj(a) z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a - z) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// `phi_a'(z) = (|a|^2 - 1) / (1 - conj(a) z)^2`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - self.a.conj() * z;
        Complex64::new(self.a.norm_sqr() - 1.0, 0.0) / (d * d)
    }

    /// Power series about 0:
    /// `phi_a(z) = a - (1 - |a|^2) sum_{k>=1} conj(a)^{k-1} z^k`.
    pub fn series(&self, order: usize) -> ComplexSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = self.a;
        let factor = -(1.0 - self.a.norm_sqr());
        let mut pw = Complex64::new(1.0, 0.0);
        for c in coeffs.iter_mut().skip(1) {
            *c = factor * pw;
            pw *= self.a.conj();
        }
        ComplexSeries::new(Complex64::new(0.0, 0.0), coeffs).expect("finite by construction")
    }
}

/// `W = w ∘ phi_a` as a harmonic map about 0, truncated at `order`. Both
/// component compositions run through the analytic chain; the conjugate
/// part stays a plain analytic series that is conjugated at evaluation.
pub fn precompose_mobius(
    w: &HarmonicMap,
    a: Complex64,
    order: usize,
) -> Result<HarmonicMap, TransformError> {
    let mobius = MobiusAutomorphism::new(a)?;
    let phi = mobius.series(order);
    let h = compose(&w.h().with_order(order).recenter(a), &phi)?;
    let g = compose(&w.g().with_order(order).recenter(a), &phi)?;
    Ok(HarmonicMap::new(h, g)?)
}

/// The analytic strip map `f = e^{-i theta} h + e^{i theta} g`, which
/// satisfies `Re f(z) = Re(w(z) e^{-i theta})` pointwise and maps into
/// `{|Re| < 1}` whenever `|w| < 1`.
pub fn projection(w: &HarmonicMap, theta: f64) -> Result<ComplexSeries, TransformError> {
    if !w.vanishes_at_origin() {
        return Err(TransformError::CanonicalizationRequired);
    }
    let f = w
        .h()
        .scale(Complex64::from_polar(1.0, -theta))
        .add(&w.g().scale(Complex64::from_polar(1.0, theta)))?;
    Ok(f)
}

/// Maclaurin series of `tan` through `order`, from the recurrence
/// `(k+1) t_{k+1} = [z^k](1 + tan^2)`.
pub fn tangent_series(order: usize) -> ComplexSeries {
    let mut t = vec![0.0f64; order + 1];
    if order >= 1 {
        t[1] = 1.0;
    }
    for k in 1..order {
        let mut sq = 0.0;
        for i in 0..=k {
            sq += t[i] * t[k - i];
        }
        t[k + 1] = sq / (k + 1) as f64;
    }
    ComplexSeries::new(
        Complex64::new(0.0, 0.0),
        t.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    )
    .expect("finite by construction")
}

/// The strip-to-disk transport `delta = tan((pi/4) f)` as a truncated
/// series. Preserves the zero order and scales the p-th derivative by
/// pi/4; the caller certifies strip membership of `f` on its grid.
pub fn strip_to_disk(f: &ComplexSeries, order: usize) -> Result<ComplexSeries, TransformError> {
    let f0 = f.coeff(0);
    if f0.norm() > 1e-12 * f.coeff_scale().max(1.0) {
        return Err(TransformError::NotNormalized(f0));
    }
    let mut inner = f.with_order(order).scale(Complex64::new(std::f64::consts::FRAC_PI_4, 0.0));
    let mut coeffs = inner.coeffs().to_vec();
    coeffs[0] = Complex64::new(0.0, 0.0);
    inner = ComplexSeries::new(inner.center(), coeffs)?;
    Ok(compose(&tangent_series(order), &inner)?)
}

/// Direct transcendental evaluation of the transport at a point:
/// `tan((pi/4) f_value)`.
pub fn strip_to_disk_value(f_value: Complex64) -> Complex64 {
    (Complex64::new(std::f64::consts::FRAC_PI_4, 0.0) * f_value).tan()
}

/// The Cayley route `d = (e^{i pi f / 2} - 1) / (e^{i pi f / 2} + 1)`,
/// which satisfies `d = i delta`.
pub fn cayley_disk_value(f_value: Complex64) -> Complex64 {
    let zeta = (Complex64::new(0.0, std::f64::consts::FRAC_PI_2) * f_value).exp();
    (zeta - Complex64::new(1.0, 0.0)) / (zeta + Complex64::new(1.0, 0.0))
}

/// Both sides of the elementary inequality
/// `tan(|Re zeta| / 2) <= |(e^{i zeta} - 1) / (e^{i zeta} + 1)|`
/// for `|Re zeta| <= pi/2`.
pub fn tangent_half_inequality(zeta: Complex64) -> Result<(f64, f64), TransformError> {
    if zeta.re.abs() > std::f64::consts::FRAC_PI_2 {
        return Err(TransformError::OutsideStrip(zeta.re.abs()));
    }
    let lhs = (zeta.re.abs() / 2.0).tan();
    let e = (Complex64::new(0.0, 1.0) * zeta).exp();
    let rhs = ((e - Complex64::new(1.0, 0.0)) / (e + Complex64::new(1.0, 0.0))).norm();
    Ok((lhs, rhs))
}
