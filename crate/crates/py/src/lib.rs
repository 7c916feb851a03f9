//! Python bindings: thin wrappers returning plain Python values or JSON text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use vircat::modinv;
use vircat::modular;

fn runtime(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn check_m(m: u32) -> PyResult<u32> {
    if (3..=modular::MINIMAL_MAX_M).contains(&m) {
        Ok(m)
    } else {
        Err(PyValueError::new_err(format!("m = {m} outside 3..={}", modular::MINIMAL_MAX_M)))
    }
}

/// Runs the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let out = vircat::cli::dispatch(std::iter::once("vircat".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

/// Modular data of the minimal model with parameter `m`, as JSON text.
#[pyfunction]
fn modular_data(m: u32) -> PyResult<String> {
    let d = modular::minimal_modular(check_m(m)?).map_err(runtime)?;
    Ok(vircat::format::to_json_string(&d.to_json()))
}

/// Labels of the minimal model together with the fusion tensor `N[a][b][c]`.
#[pyfunction]
fn fusion_rules(m: u32) -> PyResult<(Vec<String>, Vec<Vec<Vec<u32>>>)> {
    let (_, ring) = modular::minimal_model_data(check_m(m)?).map_err(runtime)?;
    Ok((ring.labels().to_vec(), ring.dense()))
}

#[pyfunction]
fn quantum_dimensions(m: u32) -> PyResult<Vec<f64>> {
    let (_, ring) = modular::minimal_model_data(check_m(m)?).map_err(runtime)?;
    Ok(ring.dims().to_vec())
}

/// `(label, type)` for each physical invariant found by the search.
#[pyfunction]
fn invariants(m: u32) -> PyResult<Vec<(String, String)>> {
    let found = modinv::classified_invariants(check_m(m)?).map_err(runtime)?;
    Ok(found.into_iter().map(|(_, l)| (l.to_string(), l.kind.to_string())).collect())
}

/// Quantum 6j symbol `{a b c; d e f}` at level `k`, spins as twice the SU(2) spin.
#[pyfunction]
fn sixj(k: u32, a: u32, b: u32, c: u32, d: u32, e: u32, f: u32) -> PyResult<f64> {
    vircat::sixj::sixj(k, [a, b, c, d, e, f]).map_err(|err| PyValueError::new_err(err.to_string()))
}

/// Whether the cocycle file content (JSON text) on the group `spec` is a coboundary.
#[pyfunction]
fn group_cocycle_trivial(spec: &str, cocycle_json: &str) -> PyResult<bool> {
    let g = vircat::cocycle::AbelianGroup::parse(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let v: serde_json::Value = serde_json::from_str(cocycle_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let c = vircat::cocycle::GroupCocycle::from_json(g, &v).map_err(runtime)?;
    Ok(vircat::cocycle::group_h2(&c).trivial)
}

#[pymodule]
fn pyvircat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(modular_data, m)?)?;
    m.add_function(wrap_pyfunction!(fusion_rules, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_dimensions, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(sixj, m)?)?;
    m.add_function(wrap_pyfunction!(group_cocycle_trivial, m)?)?;
    Ok(())
}
