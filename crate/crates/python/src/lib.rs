//! Python module `grandlp`: function and weight specs, grand norms, A-space
//! norms, transforms and verification suites. Structured results come back
//! as plain dicts and lists.

use gl::{Error, FunctionSpec, GrandNormParams, MeasurableSet, Variant, WeightSpec};
use grand_lebesgue as gl;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

create_exception!(grandlp, GrandLpError, PyException);
create_exception!(
    grandlp,
    MembershipError,
    GrandLpError,
    "The function is not in the space."
);
create_exception!(grandlp, AccuracyError, GrandLpError, "The accuracy target was not met.");

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    if e.is_membership_failure() {
        MembershipError::new_err(msg)
    } else if e.is_accuracy_failure() {
        AccuracyError::new_err(msg)
    } else {
        match e {
            Error::InvalidParameter(_)
            | Error::DimensionMismatch { .. }
            | Error::UnknownSuite { .. }
            | Error::Precondition(_) => PyValueError::new_err(msg),
            _ => GrandLpError::new_err(msg),
        }
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(format!("invalid JSON: {e}"))
}

/// Serializes through JSON into Python objects.
fn to_object<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(json_err)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    serde_json::from_value(Value::String(name.replace('-', "_"))).map_err(|_| {
        PyValueError::new_err(format!(
            "unknown variant `{name}` (generalized, equivalent, classical, plain_theta)"
        ))
    })
}

#[pyclass(name = "Function", module = "grandlp", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyFunction {
    inner: FunctionSpec,
}

fn wrap(inner: FunctionSpec) -> PyFunction {
    PyFunction { inner }
}

#[pymethods]
impl PyFunction {
    #[staticmethod]
    fn exp_abs() -> Self {
        wrap(FunctionSpec::exp_abs())
    }

    #[staticmethod]
    fn gaussian(q: f64) -> Self {
        wrap(FunctionSpec::gaussian(q))
    }

    #[staticmethod]
    fn power_decay(s: f64) -> Self {
        wrap(FunctionSpec::power_decay(s))
    }

    #[staticmethod]
    fn constant(c: f64) -> Self {
        wrap(FunctionSpec::constant(c))
    }

    /// Indicator of `[lo, hi]`.
    #[staticmethod]
    fn interval(lo: f64, hi: f64) -> Self {
        wrap(FunctionSpec::interval(lo, hi))
    }

    /// Indicator of the box `∏ [lo_k, hi_k]`.
    #[staticmethod]
    fn indicator(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        wrap(FunctionSpec::indicator(lo, hi))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let f: FunctionSpec = serde_json::from_str(text).map_err(json_err)?;
        f.validate().map_err(to_py)?;
        Ok(wrap(f))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn translate(&self, shift: f64) -> PyResult<Self> {
        self.inner.clone().translate(shift).map(wrap).map_err(to_py)
    }

    fn modulate(&self, freq: f64) -> PyResult<Self> {
        self.inner.clone().modulate(freq).map(wrap).map_err(to_py)
    }

    fn scale(&self, factor: f64) -> Self {
        wrap(self.inner.clone().scale(factor))
    }

    /// Restriction to `[lo, hi]`.
    fn restrict(&self, lo: f64, hi: f64) -> PyResult<Self> {
        self.inner
            .clone()
            .restrict(&MeasurableSet::interval(lo, hi))
            .map(wrap)
            .map_err(to_py)
    }

    /// Restriction to `E_n = (n/(n+1), 1)`.
    fn restrict_family(&self, n: u32) -> PyResult<Self> {
        self.inner
            .clone()
            .restrict(&MeasurableSet::family(n))
            .map(wrap)
            .map_err(to_py)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.inner.clone().plus(other.inner.clone()).map(wrap).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.inner.clone().times(other.inner.clone()).map(wrap).map_err(to_py)
    }

    fn __call__(&self, x: f64) -> PyResult<Complex64> {
        self.inner.eval(&[x]).map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    fn __repr__(&self) -> String {
        format!("Function({})", self.inner.label())
    }
}

#[pyclass(name = "Weight", module = "grandlp", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyWeight {
    inner: WeightSpec,
}

#[pymethods]
impl PyWeight {
    #[staticmethod]
    fn unit() -> Self {
        PyWeight {
            inner: WeightSpec::unit(),
        }
    }

    #[staticmethod]
    fn constant(c: f64) -> Self {
        PyWeight {
            inner: WeightSpec::constant(c),
        }
    }

    /// `(1+|x|)^s`.
    #[staticmethod]
    fn power_growth(s: f64) -> Self {
        PyWeight {
            inner: WeightSpec::power_growth(s),
        }
    }

    /// `(1+|x|)^{-s}`.
    #[staticmethod]
    fn power_decay(s: f64) -> Self {
        PyWeight {
            inner: WeightSpec::power_decay(s),
        }
    }

    #[staticmethod]
    fn gaussian(q: f64) -> Self {
        PyWeight {
            inner: WeightSpec::gaussian(q),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let w: WeightSpec = serde_json::from_str(text).map_err(json_err)?;
        w.validate().map_err(to_py)?;
        Ok(PyWeight { inner: w })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(&[x])
    }

    /// The declared submultiplicativity flag.
    #[getter]
    fn is_beurling(&self) -> bool {
        self.inner.claims_beurling()
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    fn __repr__(&self) -> String {
        format!("Weight({})", self.inner.label())
    }
}

#[pyclass(name = "GrandNormResult", module = "grandlp", frozen, get_all)]
pub struct PyGrandNormResult {
    value: f64,
    argmax: f64,
    error_bound: f64,
    boundary: String,
    variant: String,
    p: f64,
    theta: f64,
    /// `(eps, phi, err)` in ascending ε.
    curve: Vec<(f64, f64, f64)>,
    json: String,
}

fn tag<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

impl PyGrandNormResult {
    fn from_result(r: &gl::GrandNormResult) -> PyResult<Self> {
        Ok(PyGrandNormResult {
            value: r.value,
            argmax: r.argmax,
            error_bound: r.error_bound,
            boundary: tag(&r.boundary),
            variant: tag(&r.variant),
            p: r.p,
            theta: r.theta,
            curve: r.curve.iter().map(|c| (c.eps, c.phi, c.err)).collect(),
            json: serde_json::to_string(r).map_err(json_err)?,
        })
    }
}

#[pymethods]
impl PyGrandNormResult {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!(
            "GrandNormResult(value={}, argmax={}, error_bound={:e})",
            self.value, self.argmax, self.error_bound
        )
    }
}

fn params(
    p: f64,
    theta: f64,
    weight: Option<&PyWeight>,
    variant: &str,
    eps_grid: usize,
    tol: f64,
) -> PyResult<GrandNormParams> {
    let w = weight.map(|w| w.inner.clone()).unwrap_or_else(WeightSpec::unit);
    Ok(GrandNormParams::new(p, theta, w)
        .variant(parse_variant(variant)?)
        .grid(eps_grid)
        .tolerance(tol))
}

/// `sup_ε ε^θ ‖f‖_{L^{p-ε}(a^{ε/p})}` for the default variant.
#[pyfunction]
#[pyo3(signature = (f, p, theta, weight=None, variant="generalized", eps_grid=256, tol=1e-8))]
fn grand_norm(
    f: &PyFunction,
    p: f64,
    theta: f64,
    weight: Option<&PyWeight>,
    variant: &str,
    eps_grid: usize,
    tol: f64,
) -> PyResult<PyGrandNormResult> {
    let params = params(p, theta, weight, variant, eps_grid, tol)?;
    let r = gl::grand_norm(&f.inner, &params).map_err(to_py)?;
    PyGrandNormResult::from_result(&r)
}

/// `(eps, phi, err)` on the sweep grid.
#[pyfunction]
#[pyo3(signature = (f, p, theta, weight=None, variant="generalized", eps_grid=256, tol=1e-8))]
fn epsilon_curve(
    f: &PyFunction,
    p: f64,
    theta: f64,
    weight: Option<&PyWeight>,
    variant: &str,
    eps_grid: usize,
    tol: f64,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let params = params(p, theta, weight, variant, eps_grid, tol)?;
    let curve = gl::epsilon_curve(&f.inner, &params).map_err(to_py)?;
    Ok(curve.iter().map(|c| (c.eps, c.phi, c.err)).collect())
}

/// Time-side grand norm under `grandizer` plus frequency-side grand norm
/// under `weight`. Returns a dict with `value`, `time`, `freq` and
/// `diagnostics`.
#[pyfunction]
#[pyo3(signature = (f, p, theta1, q=None, theta2=None, grandizer=None, weight=None, numeric=false, fft_n=16384, fft_r=40.0, tol=1e-8))]
#[allow(clippy::too_many_arguments)]
fn ap_norm(
    py: Python<'_>,
    f: &PyFunction,
    p: f64,
    theta1: f64,
    q: Option<f64>,
    theta2: Option<f64>,
    grandizer: Option<&PyWeight>,
    weight: Option<&PyWeight>,
    numeric: bool,
    fft_n: usize,
    fft_r: f64,
    tol: f64,
) -> PyResult<Py<PyAny>> {
    let time = params(p, theta1, grandizer, "generalized", 256, tol)?;
    let freq = params(
        q.unwrap_or(p),
        theta2.unwrap_or(theta1),
        weight,
        "generalized",
        256,
        tol,
    )?;
    let strategy = gl::FourierStrategy {
        prefer_analytic: !numeric,
        half_width: fft_r,
        samples: fft_n,
    };
    let r = gl::ap_norm(&f.inner, &gl::APNormParams::new(time, freq).strategy(strategy)).map_err(to_py)?;
    to_object(py, &r)
}

/// Closed-form transform in the variable `g`, or None outside the catalog.
#[pyfunction]
fn fourier_analytic(f: &PyFunction) -> Option<String> {
    match gl::fourier_analytic(&f.inner) {
        gl::Analytic::Transform { formula, .. } => Some(formula),
        gl::Analytic::Unsupported { .. } => None,
    }
}

/// Sampled transform `∫ f e^{-iγx}`: dict with `gamma`, `re`, `im`,
/// `error_estimate` and `warnings`.
#[pyfunction]
#[pyo3(signature = (f, half_width=40.0, samples=16384))]
fn fourier_numeric(py: Python<'_>, f: &PyFunction, half_width: f64, samples: usize) -> PyResult<Py<PyAny>> {
    let t = gl::fourier_numeric(&f.inner, half_width, samples).map_err(to_py)?;
    let gamma: Vec<f64> = (0..t.len()).map(|k| t.gamma(k)).collect();
    let out = serde_json::json!({
        "gamma": gamma,
        "re": t.re,
        "im": t.im,
        "error_estimate": t.error_estimate,
        "truncation_bound": t.truncation_bound,
        "warnings": t.warnings,
    });
    to_object(py, &out)
}

/// Runs a verification suite. `config` is an optional JSON object with
/// suite settings; the report comes back as a dict.
#[pyfunction]
#[pyo3(signature = (name, config=None))]
fn run_suite(py: Python<'_>, name: &str, config: Option<&str>) -> PyResult<Py<PyAny>> {
    let mut value: Value = match config {
        Some(text) => serde_json::from_str(text).map_err(json_err)?,
        None => Value::Object(Default::default()),
    };
    let Value::Object(map) = &mut value else {
        return Err(PyValueError::new_err("config must be a JSON object"));
    };
    map.insert("suite".into(), Value::String(name.into()));
    let cfg: gl::SuiteConfig = serde_json::from_value(value).map_err(json_err)?;
    let report = gl::run_suite(&cfg).map_err(to_py)?;
    to_object(py, &report)
}

/// Norms of `e^{-|t|} χ_{E_n}` for `n = 1..n_max` with the closed-form
/// lower bound at `eps0`.
#[pyfunction]
#[pyo3(signature = (p=2.0, theta=1.0, n_max=16, eps0=None, tol=1e-8))]
fn prop5_sequence(py: Python<'_>, p: f64, theta: f64, n_max: u32, eps0: Option<f64>, tol: f64) -> PyResult<Py<PyAny>> {
    let s = gl::prop5_sequence(p, theta, n_max, eps0, tol).map_err(to_py)?;
    to_object(py, &s)
}

#[pymodule]
fn grandlp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunction>()?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PyGrandNormResult>()?;
    m.add_function(wrap_pyfunction!(grand_norm, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_curve, m)?)?;
    m.add_function(wrap_pyfunction!(ap_norm, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(prop5_sequence, m)?)?;
    m.add("GrandLpError", m.py().get_type::<GrandLpError>())?;
    m.add("MembershipError", m.py().get_type::<MembershipError>())?;
    m.add("AccuracyError", m.py().get_type::<AccuracyError>())?;
    m.add("SUITES", gl::verify::SUITES.to_vec())?;
    Ok(())
}
