//! Python bindings: schemes built from configuration keys, single-stencil
//! weights and reconstructions, and whole runs.

use std::fmt::Write as _;
use std::path::PathBuf;

use lopweno::harness::{self, presets, Precision, RunOptions};
use lopweno::weno::IDEAL_WEIGHTS;
use lopweno::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Divergence { .. } | Error::Inadmissible { .. } | Error::Io { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn config_text(scheme: &str, lop: bool, params: Option<&Bound<'_, PyDict>>) -> PyResult<String> {
    let mut text = format!("scheme = {scheme}\n");
    if lop {
        text.push_str("lop = true\n");
    }
    if let Some(params) = params {
        for (k, v) in params.iter() {
            let _ = writeln!(text, "{} = {}", k.str()?, v.str()?);
        }
    }
    Ok(text)
}

/// A reconstruction scheme, e.g. `Scheme("im", lop=True, im_k=2, im_a=0.1)`.
#[pyclass(name = "Scheme", frozen)]
struct PyScheme {
    inner: lopweno::Scheme,
}

#[pymethods]
impl PyScheme {
    #[new]
    #[pyo3(signature = (name, lop = false, **params))]
    fn new(name: &str, lop: bool, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let config = harness::parse_config(&config_text(name, lop, params)?).map_err(to_py)?;
        Ok(PyScheme { inner: config.scheme })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn is_lop(&self) -> bool {
        self.inner.is_lop()
    }

    /// Normalized weights for smoothness indicators `beta` and the ideal
    /// interface weights.
    fn weights(&self, beta: [f64; 3]) -> [f64; 3] {
        self.inner.weights(&beta, &IDEAL_WEIGHTS)
    }

    /// `(omega_js, omega, op)` for smoothness indicators `beta`.
    fn weights_detailed(&self, beta: [f64; 3]) -> ([f64; 3], [f64; 3], bool) {
        let info = self.inner.weights_detailed(&beta, &IDEAL_WEIGHTS);
        (info.omega_js, info.omega, info.op_flag)
    }

    /// Value at the right interface of the centre cell of five averages.
    fn reconstruct(&self, window: [f64; 5]) -> f64 {
        self.inner.reconstruct(&window)
    }

    fn __repr__(&self) -> String {
        format!("Scheme({})", self.inner.name())
    }
}

/// Solves a configuration on its finest level.
///
/// Returns a dict with `state`, `time`, `steps`, `cells`, `l1` and `linf`.
#[pyfunction]
fn solve<'py>(py: Python<'py>, config: &str) -> PyResult<Bound<'py, PyDict>> {
    let config = harness::parse_config(config).map_err(to_py)?;
    let n = *config.levels.last().expect("parsed configs have levels");
    let sol = py.detach(|| harness::solve(&config, n, None)).map_err(to_py)?;
    let (l1, linf) = sol.errors().map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("scheme", &sol.scheme)?;
    out.set_item("state", PyList::new(py, &sol.state)?)?;
    out.set_item("cells", sol.geometry.cells())?;
    out.set_item("time", sol.stats.time)?;
    out.set_item("steps", sol.stats.steps)?;
    out.set_item("l1", l1)?;
    out.set_item("linf", linf)?;
    Ok(out)
}

/// `(N, L1, L1_order, Linf, Linf_order)` for every level of a configuration.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn error_table(py: Python<'_>, config: &str) -> PyResult<Vec<(usize, f64, Option<f64>, f64, Option<f64>)>> {
    let config = harness::parse_config(config).map_err(to_py)?;
    let report = py
        .detach(|| harness::runner::error_report(&config))
        .map_err(to_py)?;
    Ok(report
        .rows
        .iter()
        .map(|r| (r.n(), r.l1, r.l1_order, r.linf, r.linf_order))
        .collect())
}

/// Runs a configuration and returns the paths of the CSV files written.
#[pyfunction]
#[pyo3(signature = (config, out_dir, full_precision = false, trace = false))]
fn run_config(py: Python<'_>, config: &str, out_dir: PathBuf, full_precision: bool, trace: bool) -> PyResult<Vec<PathBuf>> {
    let config = harness::parse_config(config).map_err(to_py)?;
    let opts = RunOptions {
        precision: if full_precision { Precision::Full } else { Precision::Table },
        trace,
    };
    py.detach(|| harness::run_config(&config, &out_dir, opts)).map_err(to_py)
}

/// Names of the registered presets.
#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    presets::registry().iter().map(|p| p.name).collect()
}

#[pymodule]
fn lopweno_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScheme>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(error_table, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add("IDEAL_WEIGHTS", IDEAL_WEIGHTS)?;
    Ok(())
}
