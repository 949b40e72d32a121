//! Python bindings. Reports cross the boundary as plain dicts built from
//! their JSON form, so their keys match the CLI output exactly.

use pyo3::exceptions::{PyArithmeticError, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;
use uniqpair::certificate::{self, CertifyOptions, FourierCheck};
use uniqpair::confined::{self, ZeroPolicy};
use uniqpair::criticality::{self, Convention};
use uniqpair::hermite;
use uniqpair::{sobolev, Complex64, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => PyOverflowError::new_err(e.to_string()),
        Error::Domain(_) | Error::Precondition(_) => PyValueError::new_err(e.to_string()),
        Error::Numeric(_) | Error::Consistency(_) => PyArithmeticError::new_err(e.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn interval(a: f64, b: f64) -> PyResult<confined::Interval> {
    confined::Interval::new(a, b).map_err(py_err)
}

#[pyclass(name = "HermiteExpansion", frozen, from_py_object)]
#[derive(Clone)]
struct PyExpansion(hermite::HermiteExpansion);

#[pymethods]
impl PyExpansion {
    #[new]
    #[pyo3(signature = (coeffs))]
    fn new(coeffs: Vec<Complex64>) -> PyResult<Self> {
        hermite::HermiteExpansion::new(coeffs).map(Self).map_err(py_err)
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn l2_norm_sq(&self) -> f64 {
        self.0.l2_norm_sq()
    }

    fn eval(&self, xs: Vec<f64>) -> Vec<Complex64> {
        self.0.eval(&xs)
    }

    /// The Fourier transform, `c_n ↦ (−i)^n c_n`.
    fn fourier(&self) -> Self {
        Self(hermite::fourier_diagonal(&self.0))
    }

    fn h_norm_sq(&self) -> f64 {
        sobolev::h_norm_sq_spectral(&self.0)
    }

    fn uncertainty_ratio(&self) -> PyResult<f64> {
        sobolev::uncertainty_ratio(&self.0).map_err(py_err)
    }

    /// Both norm routes; `nodes` defaults to the smallest exact rule.
    #[pyo3(signature = (nodes=None))]
    fn norm_report<'py>(&self, py: Python<'py>, nodes: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let m = nodes.unwrap_or((2 * self.0.degree() + 2).max(2));
        let rule = hermite::gauss_hermite(m).map_err(py_err)?;
        to_dict(py, &sobolev::h_norm_sq_quadrature(&self.0, &rule).map_err(py_err)?)
    }

    fn __repr__(&self) -> String {
        format!("HermiteExpansion(degree={})", self.0.degree())
    }
}

#[pyclass(name = "PointSet", frozen, from_py_object)]
#[derive(Clone)]
struct PyPointSet(criticality::PointSet);

fn parse_convention(name: &str) -> PyResult<Convention> {
    match name {
        "angular" => Ok(Convention::Angular),
        "ordinary" => Ok(Convention::Ordinary),
        other => Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
    }
}

#[pymethods]
impl PyPointSet {
    #[new]
    #[pyo3(signature = (points, convention="angular", first_index=0, alpha=None))]
    fn new(points: Vec<f64>, convention: &str, first_index: i64, alpha: Option<f64>) -> PyResult<Self> {
        let tail = alpha.map(|alpha| criticality::TailModel { alpha });
        criticality::PointSet::new(points, parse_convention(convention)?, tail)
            .map(|s| Self(s.with_first_index(first_index)))
            .map_err(py_err)
    }

    /// `±sqrt(π|j|/2)` for `|j| ≤ depth` (or `0 ≤ j ≤ depth`).
    #[staticmethod]
    #[pyo3(signature = (depth, two_sided=true))]
    fn sqrt_family(depth: usize, two_sided: bool) -> Self {
        Self(criticality::sqrt_family(depth, two_sided))
    }

    #[getter]
    fn points(&self) -> Vec<f64> {
        self.0.points.clone()
    }

    #[getter]
    fn convention(&self) -> &'static str {
        match self.0.convention {
            Convention::Angular => "angular",
            Convention::Ordinary => "ordinary",
        }
    }

    #[getter]
    fn first_index(&self) -> i64 {
        self.0.first_index
    }

    fn gap_count(&self) -> usize {
        self.0.gap_count()
    }

    fn convert(&self) -> Self {
        Self(criticality::convert_convention(&self.0))
    }

    fn spacing_products<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &criticality::spacing_products(&self.0))
    }

    #[pyo3(signature = (tol=1e-8))]
    fn gse<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let report = py.detach(|| criticality::gse_report(&self.0, tol)).map_err(py_err)?;
        to_dict(py, &report)
    }

    #[pyo3(signature = (tol=1e-8))]
    fn lemma<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let report = py.detach(|| criticality::lemma_checks(&self.0, tol)).map_err(py_err)?;
        to_dict(py, &report)
    }

    fn __len__(&self) -> usize {
        self.0.points.len()
    }

    fn __repr__(&self) -> String {
        format!("PointSet({} points, convention={:?})", self.0.points.len(), self.convention())
    }
}

#[pyfunction]
fn eval_hermite(n: usize, xs: Vec<f64>) -> PyResult<Vec<f64>> {
    hermite::eval_hermite(n, &xs).map_err(py_err)
}

/// `(nodes, weights)` with weights folded so that `Σ w g(x) ≈ ∫ g`.
#[pyfunction]
fn gauss_hermite(m: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = hermite::gauss_hermite(m).map_err(py_err)?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=1e-8))]
fn ground_energy(py: Python<'_>, a: f64, b: f64, tol: f64) -> PyResult<f64> {
    let iv = interval(a, b)?;
    py.detach(|| confined::ground_energy(iv, tol)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, b, k, grid=1024))]
fn solve_confined<'py>(py: Python<'py>, a: f64, b: f64, k: usize, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    let iv = interval(a, b)?;
    let result = py.detach(|| confined::solve_confined(iv, k, grid)).map_err(py_err)?;
    to_dict(py, &result)
}

/// `(e_down, e_up)` for the n-th confined level.
#[pyfunction]
#[pyo3(signature = (a, b, n=0, relaxed=false))]
fn box_bounds(a: f64, b: f64, n: usize, relaxed: bool) -> PyResult<(f64, f64)> {
    let policy = if relaxed { ZeroPolicy::Relaxed } else { ZeroPolicy::Strict };
    let bounds = confined::box_bounds_with(interval(a, b)?, n, policy).map_err(py_err)?;
    Ok((bounds.e_down, bounds.e_up))
}

#[pyfunction]
fn rayleigh_quotient(a: f64, b: f64, samples: Vec<Complex64>) -> PyResult<f64> {
    certificate::rayleigh_quotient(interval(a, b)?, &samples).map_err(py_err)
}

/// Certificate for box-sine witnesses with the given per-gap weights.
#[pyfunction]
#[pyo3(signature = (lam, f_weights, mu=None, f_hat_weights=None, tol=1e-8, fourier_check="enforce"))]
fn certify<'py>(
    py: Python<'py>,
    lam: &PyPointSet,
    f_weights: Vec<Complex64>,
    mu: Option<&PyPointSet>,
    f_hat_weights: Option<Vec<Complex64>>,
    tol: f64,
    fourier_check: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let fourier_check = match fourier_check {
        "enforce" => FourierCheck::Enforce,
        "report" => FourierCheck::Report,
        other => return Err(PyValueError::new_err(format!("unknown fourier_check {other:?}"))),
    };
    let opts = CertifyOptions {
        tol,
        fourier_check,
        ..CertifyOptions::default()
    };
    let cert = py
        .detach(|| {
            let f = certificate::build_vanishing_function(&lam.0, &f_weights)?;
            let f_hat = match (mu, &f_hat_weights) {
                (Some(m), Some(w)) => Some(certificate::build_vanishing_function(&m.0, w)?),
                (None, None) => None,
                _ => return Err(Error::Precondition("mu and f_hat_weights must be given together".into())),
            };
            certificate::certify(&lam.0, mu.map(|m| &m.0), &f, f_hat.as_ref(), &opts)
        })
        .map_err(py_err)?;
    to_dict(py, &cert)
}

#[pymodule]
#[pyo3(name = "uniqpair")]
fn uniqpair_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpansion>()?;
    m.add_class::<PyPointSet>()?;
    m.add_function(wrap_pyfunction!(eval_hermite, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_hermite, m)?)?;
    m.add_function(wrap_pyfunction!(ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(solve_confined, m)?)?;
    m.add_function(wrap_pyfunction!(box_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(rayleigh_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
