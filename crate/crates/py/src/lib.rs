//! Python bindings. Instances and curves cross the boundary as the same JSON
//! documents the command-line tool reads and writes; rationals stay strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pwl_wardrop::homotopy::sample as sample_curve;
use pwl_wardrop::instances::{nested_braess, paper_example};
use pwl_wardrop::io::{check_continuity, to_json, CurveFile, InstanceFile};
use pwl_wardrop::number::{format_rational, parse_rational};
use pwl_wardrop::oracle::verify_equilibrium;
use pwl_wardrop::{Error, SolverOptions};

fn py_err(err: Error) -> PyErr {
    match err {
        Error::Invariant(_) | Error::Singular | Error::ZeroPivot | Error::Budget(_) | Error::Convergence(_) => {
            PyRuntimeError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn parse_json<T: for<'de> serde::Deserialize<'de>>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Solves an instance given as JSON and returns the curve as JSON.
#[pyfunction]
#[pyo3(signature = (instance, lambda_max=None, max_pivots=100_000))]
fn solve(instance: &str, lambda_max: Option<&str>, max_pivots: usize) -> PyResult<String> {
    let bundle = parse_json::<InstanceFile>(instance)?.to_bundle().map_err(py_err)?;
    let lambda_max = lambda_max.map(parse_rational).transpose().map_err(py_err)?;
    let opts = SolverOptions { lambda_max, max_pivots, ..bundle.options() };
    let (net, _, curve) = bundle.solve(&opts).map_err(py_err)?;
    Ok(to_json(&CurveFile::from_curve(&net, &curve, Some(&bundle))))
}

/// Flow and potential of a curve at demand `lam`, as rational strings.
#[pyfunction]
fn sample(curve: &str, lam: &str) -> PyResult<(Vec<String>, Vec<String>)> {
    let parsed = parse_json::<CurveFile>(curve)?.to_curve().map_err(py_err)?;
    check_continuity(&parsed).map_err(py_err)?;
    let (x, pi) = sample_curve(&parsed, &parse_rational(lam).map_err(py_err)?).map_err(py_err)?;
    Ok((x.iter().map(format_rational).collect(), pi.iter().map(format_rational).collect()))
}

/// Equilibrium gap of a flow (internal edge order) and its certificate
/// potential.
#[pyfunction]
fn verify(instance: &str, flow: Vec<String>) -> PyResult<(String, Vec<String>)> {
    let bundle = parse_json::<InstanceFile>(instance)?.to_bundle().map_err(py_err)?;
    let (net, costs) = bundle.build().map_err(py_err)?;
    let x = flow.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
    let cert = verify_equilibrium(&net, &costs, &x).map_err(py_err)?;
    Ok((format_rational(&cert.gap), cert.potential.iter().map(format_rational).collect()))
}

/// Nested Braess instance as JSON; `eps` replaces the constant costs.
#[pyfunction]
#[pyo3(signature = (j, eps=None))]
fn braess(j: usize, eps: Option<&str>) -> PyResult<String> {
    let eps = eps.map(parse_rational).transpose().map_err(py_err)?;
    Ok(to_json(&InstanceFile::from_bundle(&nested_braess(j, eps).map_err(py_err)?)))
}

/// Worked example instance as JSON.
#[pyfunction]
fn example(name: &str) -> PyResult<String> {
    Ok(to_json(&InstanceFile::from_bundle(&paper_example(name).map_err(py_err)?)))
}

#[pymodule]
fn pwlwardrop(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(braess, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    Ok(())
}
