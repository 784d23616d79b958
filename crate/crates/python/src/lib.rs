//! Python bindings. Reports come back as plain dicts with the same field
//! names as the CLI's JSON output.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyRange;
use serde::Serialize;

use einstein_gap::char_numbers as cn;
use einstein_gap::curvature_lab::{run_glue_lab, CutoffProfile, GluingConfig};
use einstein_gap::geography::{self, KPolicy};
use einstein_gap::lattice::{build_blowup_lattice, lattice_sweep};
use einstein_gap::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InternalInconsistency(_) | Error::QuadratureUnconverged { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn policy(name: &str) -> PyResult<KPolicy> {
    match name {
        "min" => Ok(KPolicy::Min),
        "max" => Ok(KPolicy::Max),
        other => Err(PyValueError::new_err(format!(
            "k_policy must be 'min' or 'max', got {other:?}"
        ))),
    }
}

/// Euler characteristic and signature of a closed oriented 4-manifold.
#[pyclass(
    frozen,
    eq,
    hash,
    skip_from_py_object,
    name = "CharNumbers",
    module = "einstein_gap"
)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyCharNumbers(cn::CharNumbers);

#[pymethods]
impl PyCharNumbers {
    #[new]
    fn new(chi: i64, tau: i64) -> Self {
        Self(cn::CharNumbers::new(chi, tau))
    }

    #[getter]
    fn chi(&self) -> i64 {
        self.0.chi
    }

    #[getter]
    fn tau(&self) -> i64 {
        self.0.tau
    }

    /// 2χ + 3τ.
    fn c1sq(&self) -> i64 {
        self.0.c1sq()
    }

    fn blow_up(&self, k: u64) -> Self {
        Self(cn::blow_up_invariants(self.0, k))
    }

    fn hitchin_thorpe<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cn::hitchin_thorpe_status(self.0))
    }

    /// `(b+, b-)` assuming b₁ = 0.
    fn betti(&self) -> PyResult<(i64, i64)> {
        cn::betti_from_chi_tau(self.0).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("CharNumbers(chi={}, tau={})", self.0.chi, self.0.tau)
    }
}

#[pyfunction]
fn hitchin_thorpe_status<'py>(py: Python<'py>, chi: i64, tau: i64) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &cn::hitchin_thorpe_status(cn::CharNumbers::new(chi, tau)),
    )
}

#[pyfunction]
#[pyo3(signature = (chi, tau, b1 = 0))]
fn betti_numbers(chi: i64, tau: i64, b1: i64) -> PyResult<(i64, i64)> {
    cn::betti_with_b1(cn::CharNumbers::new(chi, tau), b1).map_err(py_err)
}

/// Scalar-curvature bound for M with invariants (chi, tau), k blow-ups.
/// The value is `multiplier × 32π²`.
#[pyfunction]
fn sw_lower_bound<'py>(py: Python<'py>, chi: i64, tau: i64, k: u64) -> PyResult<Bound<'py, PyAny>> {
    let b = cn::sw_lower_bound(cn::CharNumbers::new(chi, tau), k).map_err(py_err)?;
    let out = to_py(py, &b)?;
    out.set_item("value", b.value())?;
    Ok(out)
}

#[pyfunction]
fn einstein_obstructed<'py>(py: Python<'py>, c1sq_x: i64, k: i64) -> PyResult<Bound<'py, PyAny>> {
    let r = cn::einstein_obstructed(c1sq_x, k).map_err(py_err)?;
    let out = to_py(py, &r)?;
    out.set_item("obstructed", r.obstructed())?;
    Ok(out)
}

#[pyfunction]
fn admissible_k_range(py: Python<'_>, c1sq_x: i64) -> PyResult<Bound<'_, PyRange>> {
    let r = cn::admissible_k_range(c1sq_x);
    let (start, stop) = (r.start as isize, r.end as isize);
    PyRange::new(py, start, stop)
}

#[pyfunction]
#[pyo3(signature = (j_max, k_policy = "min"))]
fn fermat_family_catalog<'py>(
    py: Python<'py>,
    j_max: u32,
    k_policy: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let rows = geography::fermat_family_catalog_with(j_max, policy(k_policy)?).map_err(py_err)?;
    to_py(py, &rows)
}

#[pyfunction]
#[pyo3(signature = (j_max, k_policy = "min"))]
fn catalog_csv(j_max: u32, k_policy: &str) -> PyResult<String> {
    let rows = geography::fermat_family_catalog_with(j_max, policy(k_policy)?).map_err(py_err)?;
    geography::catalog_to_csv(&rows).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (c1sq, b_plus, b_minus, k, trials = 1000, boost_scale = 1.0, seed = 0, rel_tol = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn lattice_verify<'py>(
    py: Python<'py>,
    c1sq: i64,
    b_plus: usize,
    b_minus: usize,
    k: usize,
    trials: usize,
    boost_scale: f64,
    seed: u64,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let summary = py
        .detach(|| {
            let lat = build_blowup_lattice(c1sq, b_plus, b_minus, k)?;
            lattice_sweep(&lat, trials, boost_scale, seed, rel_tol)
        })
        .map_err(py_err)?;
    to_py(py, &summary)
}

#[pyfunction]
#[pyo3(signature = (t_grid = None, resolution = None, fd_step = 1e-3, cutoff_degree = 5))]
fn glue_lab<'py>(
    py: Python<'py>,
    t_grid: Option<Vec<f64>>,
    resolution: Option<[usize; 4]>,
    fd_step: f64,
    cutoff_degree: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let defaults = GluingConfig::default();
    let cfg = GluingConfig {
        t_grid: t_grid.unwrap_or(defaults.t_grid),
        quad_resolution: resolution.unwrap_or(defaults.quad_resolution),
        fd_step,
        cutoff: CutoffProfile::new(cutoff_degree).map_err(py_err)?,
        ..GluingConfig::default()
    };
    let report = py
        .detach(|| {
            cfg.validate_for_scaling()?;
            run_glue_lab(&cfg)
        })
        .map_err(py_err)?;
    let out = to_py(py, &report)?;
    out.set_item("passed", report.passed())?;
    Ok(out)
}

#[pymodule(name = "einstein_gap")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCharNumbers>()?;
    m.add_function(wrap_pyfunction!(hitchin_thorpe_status, m)?)?;
    m.add_function(wrap_pyfunction!(betti_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(sw_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_obstructed, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_k_range, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_family_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_csv, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_verify, m)?)?;
    m.add_function(wrap_pyfunction!(glue_lab, m)?)?;
    Ok(())
}
