//! Truncated complex power series: evaluation, differentiation,
//! composition, recentering, and the partition-sum engine for higher
//! derivatives of compositions.
//!
//! A series is exact through its truncation order; every operation that
//! produces a series states which coefficients it guarantees. Nothing here
//! is symbolic — coefficients are `f64` complex numbers throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default truncation order used by the higher-level modules. Every
/// verified identity involves derivatives of order well below this.
pub const DEFAULT_TRUNCATION_ORDER: usize = 32;

/// Upper limit for partition enumeration. p(20) = 627 terms, still
/// instantaneous; no bound check ever needs more.
pub const PARTITION_CAP: usize = 20;

/// Absolute tolerance for the composition center-match precondition.
const CENTER_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("derivative order {order} exceeds truncation order {truncation}")]
    OrderExceedsTruncation { order: usize, truncation: usize },
    #[error("inner series value at its center ({inner}) does not match outer center ({outer})")]
    CenterMismatch { inner: Complex64, outer: Complex64 },
    #[error("partition order {0} outside supported range 1..={PARTITION_CAP}")]
    PartitionOrderOutOfRange(usize),
    #[error("need {needed} outer derivatives, got {got}")]
    InsufficientOuterDerivatives { needed: usize, got: usize },
    #[error("series must have at least one coefficient")]
    Empty,
    #[error("non-finite coefficient at index {0}")]
    NonFiniteCoefficient(usize),
    #[error("series centers differ: {0} vs {1}")]
    CenterDiffers(Complex64, Complex64),
}

/// A power series `sum_k c_k (z - center)^k` truncated at a fixed order.
///
/// Invariant: `coeffs.len() == truncation_order + 1` and every coefficient
/// is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SeriesRepr", try_from = "SeriesRepr")]
pub struct ComplexSeries {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

/// On-disk form: `{"center":[re,im],"coeffs":[[re,im],...]}`.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    center: (f64, f64),
    coeffs: Vec<(f64, f64)>,
}

impl From<ComplexSeries> for SeriesRepr {
    fn from(s: ComplexSeries) -> Self {
        SeriesRepr {
            center: (s.center.re, s.center.im),
            coeffs: s.coeffs.iter().map(|c| (c.re, c.im)).collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for ComplexSeries {
    type Error = SeriesError;
    fn try_from(r: SeriesRepr) -> Result<Self, SeriesError> {
        ComplexSeries::new(
            Complex64::new(r.center.0, r.center.1),
            r.coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        )
    }
}

impl ComplexSeries {
    /// Builds a series from its coefficient list, validating finiteness.
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if !center.re.is_finite() || !center.im.is_finite() {
            return Err(SeriesError::NonFiniteCoefficient(usize::MAX));
        }
        for (k, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(SeriesError::NonFiniteCoefficient(k));
            }
        }
        Ok(ComplexSeries { center, coeffs })
    }

    /// The zero series about `center` with the given truncation order.
    pub fn zero(center: Complex64, order: usize) -> Self {
        ComplexSeries { center, coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    /// The identity map `z` as a series about `center`: `center + (z - center)`.
    pub fn identity(center: Complex64, order: usize) -> Self {
        let mut s = Self::zero(center, order);
        s.coeffs[0] = center;
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// `c (z - center)^k`, truncated at `order >= k`.
    pub fn monomial(center: Complex64, k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(center, order.max(k));
        s.coeffs[k] = c;
        s
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `(z - center)^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest coefficient magnitude; the natural scale for tolerances.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation of the truncated series at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let dz = z - self.center;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * dz + c;
        }
        acc
    }

    /// `D^k s(center) = k! c_k`.
    pub fn derivative_at(&self, k: usize) -> Result<Complex64, SeriesError> {
        if k > self.truncation_order() {
            return Err(SeriesError::OrderExceedsTruncation {
                order: k,
                truncation: self.truncation_order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// Termwise derivative as a series of order `N - 1` (order 0 stays 0).
    pub fn differentiate(&self) -> ComplexSeries {
        if self.coeffs.len() == 1 {
            return Self::zero(self.center, 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (k as f64))
            .collect();
        ComplexSeries { center: self.center, coeffs }
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: Complex64) -> ComplexSeries {
        ComplexSeries {
            center: self.center,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Coefficientwise sum; both series must share a center. The result is
    /// truncated at the larger of the two orders.
    pub fn add(&self, other: &ComplexSeries) -> Result<ComplexSeries, SeriesError> {
        if self.center != other.center {
            return Err(SeriesError::CenterDiffers(self.center, other.center));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(ComplexSeries { center: self.center, coeffs })
    }

    /// Truncates or zero-pads to the requested order.
    pub fn with_order(&self, order: usize) -> ComplexSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        ComplexSeries { center: self.center, coeffs }
    }

    /// Cauchy product truncated at `order`.
    pub fn mul_truncated(&self, other: &ComplexSeries, order: usize) -> ComplexSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        ComplexSeries { center: self.center, coeffs }
    }

    /// Re-expands the series about `new_center` by exact binomial
    /// expansion of each monomial. Exact for polynomial inputs.
    pub fn recenter(&self, new_center: Complex64) -> ComplexSeries {
        let n = self.truncation_order();
        let d = new_center - self.center;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        // powers[m] = d^m
        let mut powers = Vec::with_capacity(n + 1);
        let mut dp = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            powers.push(dp);
            dp *= d;
        }
        for j in 0..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in j..=n {
                acc += self.coeffs[k] * binomial(k, j) * powers[k - j];
            }
            coeffs[j] = acc;
        }
        ComplexSeries { center: new_center, coeffs }
    }

    /// Index of the first coefficient with `|c_k| > tol`, or `None` when
    /// every coefficient sits below the tolerance.
    pub fn zero_order(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > tol)
    }
}

/// Composition `outer(inner(z))` about `inner.center`, exact through the
/// common truncation order.
///
/// Requires `inner(inner.center) = outer.center` so the composition is a
/// formal power series; the constant term is treated as exactly matched
/// after the check.
pub fn compose(outer: &ComplexSeries, inner: &ComplexSeries) -> Result<ComplexSeries, SeriesError> {
    let offset = inner.coeff(0) - outer.center();
    if offset.norm() > CENTER_MATCH_TOL * (1.0 + outer.center().norm()) {
        return Err(SeriesError::CenterMismatch { inner: inner.coeff(0), outer: outer.center() });
    }
    let order = outer.truncation_order().min(inner.truncation_order());
    let mut t = inner.with_order(order);
    t.coeffs[0] = Complex64::new(0.0, 0.0);

    // Horner over the outer coefficients in series arithmetic.
    let mut acc = ComplexSeries::zero(inner.center(), order);
    for k in (0..=order).rev() {
        acc = acc.mul_truncated(&t, order);
        acc.coeffs[0] += outer.coeff(k);
    }
    Ok(acc)
}

/// One multiplicity vector `(k_1, ..., k_n)` with `k_1 + 2 k_2 + ... + n k_n = n`
/// and its exact weight `n! / (k_1! ... k_n!)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTerm {
    multiplicities: Vec<usize>,
    weight: u128,
}

impl PartitionTerm {
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `n! / (k_1! ... k_n!)` as an exact integer.
    pub fn weight(&self) -> u128 {
        self.weight
    }

    pub fn weight_f64(&self) -> f64 {
        self.weight as f64
    }

    /// `k_1 + ... + k_n`, the derivative order of the outer function.
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// Enumerates every multiplicity vector with weighted degree `n`, together
/// with its exact multinomial weight. The count equals the integer
/// partition number p(n).
pub fn enumerate_partitions(n: usize) -> Result<Vec<PartitionTerm>, SeriesError> {
    if n == 0 || n > PARTITION_CAP {
        return Err(SeriesError::PartitionOrderOutOfRange(n));
    }
    let mut out = Vec::new();
    let mut mults = vec![0usize; n];
    descend(n, n, &mut mults, &mut out);
    Ok(out)
}

// Fills multiplicities for parts of size <= part, with `remaining` weight
// left to distribute. Parts are chosen largest-first so the output order
// is deterministic.
fn descend(remaining: usize, part: usize, mults: &mut Vec<usize>, out: &mut Vec<PartitionTerm>) {
    if remaining == 0 {
        let n = mults.len();
        let mut denom: u128 = 1;
        for &k in mults.iter() {
            denom *= factorial_u128(k);
        }
        out.push(PartitionTerm { multiplicities: mults.clone(), weight: factorial_u128(n) / denom });
        return;
    }
    if part == 0 {
        return;
    }
    for count in (0..=remaining / part).rev() {
        mults[part - 1] = count;
        descend(remaining - count * part, part - 1, mults, out);
        mults[part - 1] = 0;
    }
}

/// `D^n (m ∘ q)` at `q`'s center from the partition sum
/// `sum weight · (D^{k_1+...+k_n} m)(q) · prod_j (D^j q / j!)^{k_j}`.
///
/// `outer_derivs[j-1]` must hold `(D^j m)(q(center))` for `j = 1..=n`.
pub fn faa_di_bruno(
    outer_derivs: &[Complex64],
    inner: &ComplexSeries,
    n: usize,
) -> Result<Complex64, SeriesError> {
    if outer_derivs.len() < n {
        return Err(SeriesError::InsufficientOuterDerivatives { needed: n, got: outer_derivs.len() });
    }
    if inner.truncation_order() < n {
        return Err(SeriesError::OrderExceedsTruncation {
            order: n,
            truncation: inner.truncation_order(),
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for term in enumerate_partitions(n)? {
        let mut prod = outer_derivs[term.total_multiplicity() - 1];
        for (j, &kj) in term.multiplicities().iter().enumerate() {
            // D^j q / j! is exactly the inner coefficient c_j.
            for _ in 0..kj {
                prod *= inner.coeff(j + 1);
            }
        }
        sum += prod * term.weight_f64();
    }
    Ok(sum)
}

/// `k!` as f64; exact through k = 18, within one ulp beyond.
pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

fn factorial_u128(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Binomial coefficient as f64 via the multiplicative formula.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
