//! Python bindings: the series and harmonic-map carriers, every
//! closed-form bound, the transport machinery, and the verification
//! corpus runners.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use harmonic_schwarz::bounds;
use harmonic_schwarz::harmonic::{GridSpec, HarmonicMap, ZERO_ORDER_TOL};
use harmonic_schwarz::series::{ComplexSeries, DEFAULT_TRUNCATION_ORDER};
use harmonic_schwarz::transforms;
use harmonic_schwarz::verify;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Truncated complex power series about a center point.
#[pyclass(name = "Series", from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: ComplexSeries,
}

#[pymethods]
impl PySeries {
    #[new]
    #[pyo3(signature = (coeffs, center = Complex64::new(0.0, 0.0)))]
    fn new(coeffs: Vec<Complex64>, center: Complex64) -> PyResult<Self> {
        Ok(PySeries { inner: ComplexSeries::new(center, coeffs).map_err(value_error)? })
    }

    #[getter]
    fn center(&self) -> Complex64 {
        self.inner.center()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn truncation_order(&self) -> usize {
        self.inner.truncation_order()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    fn derivative_at(&self, k: usize) -> PyResult<Complex64> {
        self.inner.derivative_at(k).map_err(value_error)
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn zero_order(&self, tol: f64) -> Option<usize> {
        self.inner.zero_order(tol)
    }

    fn recenter(&self, new_center: Complex64) -> Self {
        PySeries { inner: self.inner.recenter(new_center) }
    }

    /// Transport into the disk: tan((pi/4) series), order-preserving at 0.
    #[pyo3(signature = (order = DEFAULT_TRUNCATION_ORDER))]
    fn strip_to_disk(&self, order: usize) -> PyResult<Self> {
        Ok(PySeries { inner: transforms::strip_to_disk(&self.inner, order).map_err(value_error)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySeries { inner: serde_json::from_str(text).map_err(value_error)? })
    }

    fn __repr__(&self) -> String {
        format!("Series(order={}, center={})", self.inner.truncation_order(), self.inner.center())
    }
}

/// Harmonic map w = h + conj(g) of the unit disk.
#[pyclass(name = "HarmonicMap", from_py_object)]
#[derive(Clone)]
struct PyHarmonicMap {
    inner: HarmonicMap,
}

#[pymethods]
impl PyHarmonicMap {
    #[new]
    fn new(h: PySeries, g: PySeries) -> PyResult<Self> {
        Ok(PyHarmonicMap { inner: HarmonicMap::new(h.inner, g.inner).map_err(value_error)? })
    }

    #[staticmethod]
    fn analytic(h: PySeries) -> Self {
        PyHarmonicMap { inner: HarmonicMap::analytic(h.inner) }
    }

    #[getter]
    fn h(&self) -> PySeries {
        PySeries { inner: self.inner.h().clone() }
    }

    #[getter]
    fn g(&self) -> PySeries {
        PySeries { inner: self.inner.g().clone() }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    /// (w_z, w_zbar) at z.
    fn wirtinger(&self, z: Complex64) -> (Complex64, Complex64) {
        self.inner.wirtinger(z)
    }

    fn directional_derivative(&self, z: Complex64, alpha: f64) -> Complex64 {
        self.inner.directional_derivative(z, alpha)
    }

    /// (Lambda, lambda): max and min directional derivative modulus.
    fn directional_extremes(&self, z: Complex64) -> (f64, f64) {
        self.inner.directional_extremes(z)
    }

    fn jacobian(&self, z: Complex64) -> f64 {
        self.inner.jacobian(z)
    }

    fn dilatation(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.dilatation(z).map_err(value_error)
    }

    /// (p, a_p, b_p, |a_p| + |b_p|) at the zero z0.
    #[pyo3(signature = (z0 = Complex64::new(0.0, 0.0), tol = ZERO_ORDER_TOL))]
    fn zero_order_at(&self, z0: Complex64, tol: f64) -> PyResult<(usize, Complex64, Complex64, f64)> {
        let zo = self.inner.zero_order_at(z0, tol).map_err(value_error)?;
        Ok((zo.p, zo.a_p, zo.b_p, zo.lambda_p))
    }

    /// (verdict, min Jacobian) over the polar grid.
    #[pyo3(signature = (radii = 64, angles = 256, rmax = 0.999))]
    fn is_sense_preserving(&self, radii: usize, angles: usize, rmax: f64) -> (bool, f64) {
        let report = self.inner.is_sense_preserving(&GridSpec { radii, angles, r_max: rmax });
        (report.sense_preserving, report.min_jacobian)
    }

    /// w ∘ phi_a as a new map about 0.
    #[pyo3(signature = (a, order = DEFAULT_TRUNCATION_ORDER))]
    fn precompose_mobius(&self, a: Complex64, order: usize) -> PyResult<Self> {
        Ok(PyHarmonicMap {
            inner: transforms::precompose_mobius(&self.inner, a, order).map_err(value_error)?,
        })
    }

    /// Analytic strip map e^{-i theta} h + e^{i theta} g.
    fn projection(&self, theta: f64) -> PyResult<PySeries> {
        Ok(PySeries { inner: transforms::projection(&self.inner, theta).map_err(value_error)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyHarmonicMap { inner: serde_json::from_str(text).map_err(value_error)? })
    }

    fn __repr__(&self) -> String {
        format!("HarmonicMap(order={})", self.inner.truncation_order())
    }
}

#[pyfunction]
fn analytic_schwarz_pick_bound(p: usize, ap_mod: f64, r: f64) -> PyResult<f64> {
    bounds::analytic_schwarz_pick_bound(p, ap_mod, r).map_err(value_error)
}

#[pyfunction]
fn classical_harmonic_bound(p: usize, r: f64) -> PyResult<f64> {
    bounds::classical_harmonic_bound(p, r).map_err(value_error)
}

#[pyfunction]
fn improved_harmonic_bound(p: usize, s: f64, r: f64) -> PyResult<f64> {
    bounds::improved_harmonic_bound(p, s, r).map_err(value_error)
}

#[pyfunction]
fn boundary_lower_bound(p: usize, s: f64) -> PyResult<f64> {
    bounds::boundary_lower_bound(p, s).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (p, s, a = Complex64::new(0.0, 0.0), alpha = Complex64::new(1.0, 0.0)))]
fn general_boundary_lower_bound(p: usize, s: f64, a: Complex64, alpha: Complex64) -> PyResult<f64> {
    let query = bounds::BoundQuery { p, s, r: 1.0, a, alpha, beta: Complex64::new(1.0, 0.0) };
    bounds::general_boundary_lower_bound(&query).map_err(value_error)
}

#[pyfunction]
fn limit_slope(p: usize, s: f64) -> PyResult<f64> {
    bounds::limit_slope(p, s).map_err(value_error)
}

#[pyfunction]
fn limit_slope_numeric(p: usize, s: f64) -> PyResult<f64> {
    bounds::limit_slope_numeric(p, s).map_err(value_error)
}

#[pyfunction]
fn moebius_ratio(x: f64, r: f64) -> f64 {
    bounds::moebius_ratio(x, r)
}

#[pyfunction]
fn coefficient_margin(w: &PyHarmonicMap, n: usize) -> PyResult<f64> {
    bounds::coefficient_margin(&w.inner, n).map_err(value_error)
}

/// Deterministic sample generation; family is "polynomial",
/// "poisson_extension" or "mobius_witness".
#[pyfunction]
#[pyo3(signature = (seed, p, degree, family = "polynomial", decay = 0.5))]
fn generate(seed: u64, p: usize, degree: usize, family: &str, decay: f64) -> PyResult<PyHarmonicMap> {
    let family = match family {
        "polynomial" => verify::SampleFamily::Polynomial,
        "poisson_extension" => verify::SampleFamily::PoissonExtension,
        "mobius_witness" => verify::SampleFamily::MobiusWitness,
        other => return Err(value_error(format!("unknown family '{other}'"))),
    };
    let spec = verify::SampleSpec { seed, p, degree, family, decay };
    Ok(PyHarmonicMap { inner: verify::generate(&spec).map_err(value_error)? })
}

#[pyfunction]
#[pyo3(signature = (a, rotation = Complex64::new(1.0, 0.0), p = 1, order = verify::WITNESS_ORDER))]
fn mobius_witness(a: Complex64, rotation: Complex64, p: usize, order: usize) -> PyResult<PyHarmonicMap> {
    Ok(PyHarmonicMap { inner: verify::mobius_witness(a, rotation, p, order).map_err(value_error)? })
}

/// Runs a verification corpus; returns the report as a JSON string.
/// Inequality is one of "lemma1.3", "boundary", "eq1.2", "transport",
/// "strip".
#[pyfunction]
#[pyo3(signature = (inequality, samples, seed = 42, p_values = vec![1, 2, 3], radii = 64, angles = 256, rmax = 0.999))]
fn run_corpus(
    inequality: &str,
    samples: usize,
    seed: u64,
    p_values: Vec<usize>,
    radii: usize,
    angles: usize,
    rmax: f64,
) -> PyResult<String> {
    let inequality = verify::Inequality::parse(inequality)
        .ok_or_else(|| value_error(format!("unknown inequality '{inequality}'")))?;
    let mut cfg = verify::CorpusConfig::new(inequality, samples, seed);
    cfg.p_values = p_values;
    cfg.grid = GridSpec { radii, angles, r_max: rmax };
    let report = verify::run_corpus(&cfg).map_err(value_error)?;
    Ok(serde_json::to_string(&report).expect("serializable"))
}

/// Nelder–Mead probe of the boundary margin; family is "rotation",
/// "mobius" or "polynomial". Returns (best_margin, best_params).
#[pyfunction]
#[pyo3(signature = (family, p = 1, seed = 42, degree = 3, iterations = 0))]
fn sharpness_search(
    family: &str,
    p: usize,
    seed: u64,
    degree: usize,
    iterations: usize,
) -> PyResult<(f64, Vec<f64>)> {
    let family = verify::SharpnessFamily::parse(family)
        .ok_or_else(|| value_error(format!("unknown family '{family}'")))?;
    let result =
        verify::sharpness_search(p, family, seed, degree, iterations).map_err(value_error)?;
    if result.suspected_error {
        return Err(value_error(format!(
            "negative margin {}: suspected implementation error",
            result.best_margin
        )));
    }
    Ok((result.best_margin, result.best_params))
}

#[pyfunction]
fn tangent_half_inequality(zeta: Complex64) -> PyResult<(f64, f64)> {
    transforms::tangent_half_inequality(zeta).map_err(value_error)
}

#[pymodule]
fn harmonic_schwarz_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PyHarmonicMap>()?;
    m.add_function(wrap_pyfunction!(analytic_schwarz_pick_bound, m)?)?;
    m.add_function(wrap_pyfunction!(classical_harmonic_bound, m)?)?;
    m.add_function(wrap_pyfunction!(improved_harmonic_bound, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(general_boundary_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(limit_slope, m)?)?;
    m.add_function(wrap_pyfunction!(limit_slope_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(moebius_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_margin, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(mobius_witness, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_search, m)?)?;
    m.add_function(wrap_pyfunction!(tangent_half_inequality, m)?)?;
    m.add("DEFAULT_TRUNCATION_ORDER", DEFAULT_TRUNCATION_ORDER)?;
    m.add("FOUR_OVER_PI", bounds::FOUR_OVER_PI)?;
    Ok(())
}
