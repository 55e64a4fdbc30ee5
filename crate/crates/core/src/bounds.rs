//! Closed-form evaluation of the interior and boundary bounds: the
//! Schwarz–Pick bound for analytic maps with a zero of order p, the
//! arctan bound for harmonic maps, its Möbius-sharpened refinement, the
//! boundary derivative lower bounds (with and without the automorphism
//! transport factor), and the limit slope that connects them.
//!
//! Every function here is a total deterministic scalar map with no state,
//! so the property suites can sweep them exhaustively.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};
use thiserror::Error;

use crate::harmonic::HarmonicMap;

/// `4/pi`, the universal cap on `|a_n| + |b_n|` for harmonic self-maps.
pub const FOUR_OVER_PI: f64 = 4.0 / PI;

/// Unimodularity tolerance for boundary points.
const UNIT_MODULUS_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("zero order p must be >= 1")]
    ZeroOrderOutOfRange,
    #[error("radius {0} outside [0, 1]")]
    RadiusOutOfRange(f64),
    #[error("derivative aggregate s = {0} is negative")]
    NegativeAggregate(f64),
    #[error("derivative aggregate s = {0} exceeds 4/pi; input violates the coefficient bound")]
    CoefficientBoundViolation(f64),
    #[error("|a_p| = {0} outside [0, 1]")]
    ApModulusOutOfRange(f64),
    #[error("{name} = {value} is not unimodular")]
    NotUnimodular { name: &'static str, value: Complex64 },
    #[error("interior point a = {0} outside the open disk")]
    NotInDisk(Complex64),
    #[error("coefficient index {index} exceeds truncation order {truncation}")]
    IndexOutOfRange { index: usize, truncation: usize },
    #[error("map must be in canonical form centered at 0")]
    NotCanonical,
}

/// Inputs for the boundary bound with an interior zero: order `p`, the
/// derivative aggregate `s`, and the geometric data `(a, alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub p: usize,
    pub s: f64,
    pub r: f64,
    pub a: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Default for BoundQuery {
    fn default() -> Self {
        BoundQuery {
            p: 1,
            s: 0.0,
            r: 0.0,
            a: Complex64::new(0.0, 0.0),
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
        }
    }
}

impl BoundQuery {
    pub fn validate(&self) -> Result<(), BoundsError> {
        if self.p == 0 {
            return Err(BoundsError::ZeroOrderOutOfRange);
        }
        if self.s < 0.0 {
            return Err(BoundsError::NegativeAggregate(self.s));
        }
        if !(0.0..=1.0).contains(&self.r) {
            return Err(BoundsError::RadiusOutOfRange(self.r));
        }
        if self.a.norm() >= 1.0 {
            return Err(BoundsError::NotInDisk(self.a));
        }
        if (self.alpha.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(BoundsError::NotUnimodular { name: "alpha", value: self.alpha });
        }
        if (self.beta.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(BoundsError::NotUnimodular { name: "beta", value: self.beta });
        }
        Ok(())
    }
}

fn check_p(p: usize) -> Result<(), BoundsError> {
    if p == 0 {
        Err(BoundsError::ZeroOrderOutOfRange)
    } else {
        Ok(())
    }
}

fn check_r(r: f64) -> Result<(), BoundsError> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(BoundsError::RadiusOutOfRange(r))
    }
}

fn check_s(s: f64) -> Result<(), BoundsError> {
    if s < 0.0 {
        Err(BoundsError::NegativeAggregate(s))
    } else if s > FOUR_OVER_PI {
        // Rejected rather than clamped: exceeding 4/pi signals an input bug
        // that the verifier must surface.
        Err(BoundsError::CoefficientBoundViolation(s))
    } else {
        Ok(())
    }
}

/// Schwarz–Pick bound for an analytic self-map with a zero of order `p`:
/// `r^p (r + |a_p|) / (1 + |a_p| r)`.
pub fn analytic_schwarz_pick_bound(p: usize, ap_mod: f64, r: f64) -> Result<f64, BoundsError> {
    check_p(p)?;
    check_r(r)?;
    if !(0.0..=1.0).contains(&ap_mod) {
        return Err(BoundsError::ApModulusOutOfRange(ap_mod));
    }
    Ok(r.powi(p as i32) * (r + ap_mod) / (1.0 + ap_mod * r))
}

/// Harmonic Schwarz bound `(4/pi) arctan(r^p)`.
pub fn classical_harmonic_bound(p: usize, r: f64) -> Result<f64, BoundsError> {
    check_p(p)?;
    check_r(r)?;
    Ok(FOUR_OVER_PI * (r.powi(p as i32)).atan())
}

/// Sharpened harmonic bound
/// `M_p(r; s) = (4/pi) arctan[ r^p (r + (pi/4) s) / (1 + (pi/4) s r) ]`
/// with `s = |a_p| + |b_p|`.
pub fn improved_harmonic_bound(p: usize, s: f64, r: f64) -> Result<f64, BoundsError> {
    check_p(p)?;
    check_r(r)?;
    check_s(s)?;
    let c = FRAC_PI_4 * s;
    Ok(FOUR_OVER_PI * (r.powi(p as i32) * (r + c) / (1.0 + c * r)).atan())
}

/// `4/pi - (|a_n| + |b_n|)` for a map in canonical form at 0. Negative
/// values are findings, not errors; the verifier surfaces them.
pub fn coefficient_margin(w: &HarmonicMap, n: usize) -> Result<f64, BoundsError> {
    if w.center().norm() != 0.0 || w.g().coeff(0).norm() > 1e-12 * w.coeff_scale().max(1.0) {
        return Err(BoundsError::NotCanonical);
    }
    if n > w.truncation_order() {
        return Err(BoundsError::IndexOutOfRange { index: n, truncation: w.truncation_order() });
    }
    Ok(FOUR_OVER_PI - (w.h().coeff(n).norm() + w.g().coeff(n).norm()))
}

/// Boundary derivative lower bound at the point 1:
/// `(2/pi) [(p+1) + (pi/4)(p-1) s] / [1 + (pi/4) s]`.
pub fn boundary_lower_bound(p: usize, s: f64) -> Result<f64, BoundsError> {
    check_p(p)?;
    check_s(s)?;
    let c = FRAC_PI_4 * s;
    Ok((2.0 / PI) * ((p as f64 + 1.0) + c * (p as f64 - 1.0)) / (1.0 + c))
}

/// Closed form of `lim_{r->1^-} (1 - M_p(r; s)^2) / (1 - r)`, which equals
/// twice the boundary lower bound since `M_p(1) = 1`.
pub fn limit_slope(p: usize, s: f64) -> Result<f64, BoundsError> {
    check_p(p)?;
    check_s(s)?;
    let c = FRAC_PI_4 * s;
    Ok(FOUR_OVER_PI * ((p as f64 + 1.0) + c * (p as f64 - 1.0)) / (1.0 + c))
}

/// Numeric variant of [`limit_slope`]: difference quotients at
/// `r = 1 - 10^{-k}`, `k = 2..=8`, with one Richardson step; among the
/// extrapolants the one with the most stable successor is returned.
pub fn limit_slope_numeric(p: usize, s: f64) -> Result<f64, BoundsError> {
    check_p(p)?;
    check_s(s)?;
    let quotient = |k: i32| -> Result<f64, BoundsError> {
        let eps = 10f64.powi(-k);
        let m = improved_harmonic_bound(p, s, 1.0 - eps)?;
        Ok((1.0 - m * m) / eps)
    };
    let q: Vec<f64> = (2..=8).map(quotient).collect::<Result<_, _>>()?;
    // One Richardson step with mesh ratio 10 removes the O(1-r) term.
    let extrap: Vec<f64> = q.windows(2).map(|w| (10.0 * w[1] - w[0]) / 9.0).collect();
    let mut best = extrap[0];
    let mut best_gap = f64::INFINITY;
    for w in extrap.windows(2) {
        let gap = (w[0] - w[1]).abs();
        if gap < best_gap {
            best_gap = gap;
            best = w[0];
        }
    }
    Ok(best)
}

/// Boundary bound at an arbitrary boundary point `alpha` for a map with an
/// interior zero at `a`, with `s = Lambda_w^(p)(a) (1 - |a|^2)^p`:
/// the point-1 bound times the conformal factor `(1-|a|^2)/|1 - conj(a) alpha|^2`.
pub fn general_boundary_lower_bound(q: &BoundQuery) -> Result<f64, BoundsError> {
    q.validate()?;
    check_s(q.s)?;
    // Deliberately not delegating to boundary_lower_bound: the coincidence
    // of the two at a = 0, alpha = 1 is a verified property, so the
    // formula is evaluated on an independent path here.
    let c = FRAC_PI_4 * q.s;
    let base = (2.0 / PI) * ((q.p as f64 + 1.0) + c * (q.p as f64 - 1.0)) / (1.0 + c);
    let transport = (1.0 - q.a.norm_sqr()) / (1.0 - q.a.conj() * q.alpha).norm_sqr();
    Ok(base * transport)
}

/// The Möbius ratio `phi(x) = (r + (pi/4) x) / (1 + (pi/4) x r)`, increasing
/// in `x` for fixed `r < 1`.
pub fn moebius_ratio(x: f64, r: f64) -> f64 {
    (r + FRAC_PI_4 * x) / (1.0 + FRAC_PI_4 * x * r)
}
