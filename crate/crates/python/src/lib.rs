//! Python bindings. Exact values come back as `fractions.Fraction`; report
//! objects come back as plain dicts mirroring the CLI JSON.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};
use serde::Serialize;
use serde_json::Value;

use syzygy_core::bounds::{self, Form};
use syzygy_core::exactnum::{self, Rational};
use syzygy_core::stability;
use syzygy_core::twist::{self, HilbertPoly};
use syzygy_core::varieties::{self, Variety};
use syzygy_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NotFound { .. } => PyKeyError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Accepts `int`, `str` ("p/q") or anything with `numerator`/`denominator`.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(v) = obj.extract::<i64>() {
        return Ok(Rational::from(v));
    }
    if let Ok(s) = obj.extract::<String>() {
        return s.parse().map_err(py_err);
    }
    let numer = obj.getattr("numerator")?.str()?.to_string();
    let denom = obj.getattr("denominator")?.str()?.to_string();
    format!("{numer}/{denom}").parse().map_err(py_err)
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((r.to_string(),))
}

/// JSON value to Python, turning rational strings into `Fraction`.
fn to_python<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => match s.parse::<Rational>() {
            Ok(r) => fraction(py, &r)?,
            Err(_) => PyString::new(py, s).into_any(),
        },
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_python(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, to_python(py, v)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_python(py, &json)
}

fn json_text<T: Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Variety", module = "syzygy", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyVariety {
    inner: Variety,
}

#[pymethods]
impl PyVariety {
    #[new]
    #[pyo3(signature = (dim, h_top, c1_dot_h, name = String::new()))]
    fn new(dim: u32, h_top: i64, c1_dot_h: i64, name: String) -> PyResult<Self> {
        Variety::new(name, dim, h_top, c1_dot_h)
            .map(|inner| PyVariety { inner })
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        varieties::catalog_lookup(name)
            .map(|inner| PyVariety { inner })
            .map_err(py_err)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.dim()
    }

    #[getter]
    fn h_top(&self) -> i64 {
        self.inner.h_top()
    }

    #[getter]
    fn c1_dot_h(&self) -> i64 {
        self.inner.c1_dot_h()
    }

    #[getter]
    fn genus(&self) -> i64 {
        self.inner.genus()
    }

    fn to_json(&self) -> PyResult<String> {
        json_text(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Variety(dim={}, h_top={}, c1_dot_h={}, name={:?}, genus={})",
            self.inner.dim(),
            self.inner.h_top(),
            self.inner.c1_dot_h(),
            self.inner.name(),
            self.inner.genus()
        )
    }
}

/// `binom(y + k, k)` with the piecewise real-argument convention.
#[pyfunction]
fn genbinom<'py>(py: Python<'py>, y: &Bound<'py, PyAny>, k: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &exactnum::genbinom(&to_rational(y)?, k))
}

#[pyfunction]
#[pyo3(signature = (variety, rank, degree, form = "simplified"))]
fn sections_bound<'py>(
    py: Python<'py>,
    variety: &PyVariety,
    rank: i64,
    degree: i64,
    form: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let form = match form {
        "simplified" => Form::SimplifiedForm,
        "lemma" => Form::LemmaSumForm,
        other => {
            return Err(PyValueError::new_err(format!(
                "form must be simplified or lemma, got {other:?}"
            )))
        }
    };
    let r = bounds::sections_bound(&variety.inner, rank, degree, form).map_err(py_err)?;
    report(py, &r)
}

#[pyfunction]
fn check_stability<'py>(
    py: Python<'py>,
    variety: &PyVariety,
    degree: i64,
    h0: i64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = stability::check_stability(&variety.inner, degree, h0).map_err(py_err)?;
    report(py, &r)
}

/// `hilbert` lists the coefficients constant term first.
#[pyfunction]
#[pyo3(signature = (variety, degree, hilbert, regularity = 0))]
fn minimal_stable_twist<'py>(
    py: Python<'py>,
    variety: &PyVariety,
    degree: i64,
    hilbert: Vec<Bound<'py, PyAny>>,
    regularity: i64,
) -> PyResult<Bound<'py, PyAny>> {
    let coefficients = hilbert
        .iter()
        .map(to_rational)
        .collect::<PyResult<Vec<_>>>()?;
    let poly = HilbertPoly::new(coefficients, regularity);
    let cert = twist::minimal_stable_twist(&variety.inner, degree, &poly).map_err(py_err)?;
    report(py, &cert)
}

#[pyfunction]
fn catalog() -> Vec<PyVariety> {
    varieties::catalog()
        .iter()
        .map(|v| PyVariety { inner: v.clone() })
        .collect()
}

#[pymodule]
pub fn syzygy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVariety>()?;
    m.add_function(wrap_pyfunction!(genbinom, m)?)?;
    m.add_function(wrap_pyfunction!(sections_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_stability, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_stable_twist, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    Ok(())
}
