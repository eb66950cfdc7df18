use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lowesa_core::oracle::DEFAULT_PATH_BUDGET;
use lowesa_core::{BackpropConfig, Error, NoiseSummary};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } | Error::TooManyQubits { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "PauliString", frozen, eq)]
#[derive(PartialEq)]
struct PyPauliString {
    inner: lowesa_core::PauliString,
}

#[pymethods]
impl PyPauliString {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPauliString { inner: text.parse().map_err(to_py)? })
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.inner.weight()
    }

    fn zero_state_expectation(&self) -> f64 {
        self.inner.zero_state_expectation()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliString('{}')", self.inner)
    }
}

#[pyclass(name = "NoisyCircuit", frozen)]
struct PyNoisyCircuit {
    inner: lowesa_core::NoisyCircuit,
}

#[pymethods]
impl PyNoisyCircuit {
    /// Parses the line-oriented circuit format.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyNoisyCircuit { inner: text.parse().map_err(to_py)? })
    }

    #[staticmethod]
    #[pyo3(signature = (family, n, layers, seed=0, p=0.0))]
    fn benchmark(family: &str, n: usize, layers: usize, seed: u64, p: f64) -> PyResult<Self> {
        let noise = lowesa_core::LocalPauliNoise::symmetric(p).map_err(to_py)?;
        let family = family.parse().map_err(to_py)?;
        Ok(PyNoisyCircuit { inner: lowesa_core::gen_benchmark(family, n, layers, seed, noise).map_err(to_py)? })
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    #[getter]
    fn num_rotations(&self) -> usize {
        self.inner.num_rotations()
    }

    #[getter]
    fn num_params(&self) -> usize {
        self.inner.num_params()
    }

    fn is_injective(&self) -> bool {
        self.inner.is_injective()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }
}

#[pyclass(name = "SurrogateSeries", frozen)]
struct PySurrogateSeries {
    inner: lowesa_core::SurrogateSeries,
}

#[pymethods]
impl PySurrogateSeries {
    /// Parses a coefficient file.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PySurrogateSeries { inner: text.parse().map_err(to_py)? })
    }

    fn evaluate(&self, theta: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&theta).map_err(to_py)
    }

    /// `(frequency vector, coefficient)` pairs in canonical order.
    fn terms(&self) -> Vec<(String, f64)> {
        self.inner.iter().map(|(w, d)| (w.to_string(), d)).collect()
    }

    fn truncate(&self, cutoff: usize) -> Self {
        PySurrogateSeries { inner: self.inner.truncate(cutoff) }
    }

    fn bind_fixed(&self, fixed: Vec<(usize, f64)>) -> PyResult<Self> {
        Ok(PySurrogateSeries { inner: self.inner.bind_fixed(&fixed).map_err(to_py)? })
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.inner.meta().cutoff
    }

    #[getter]
    fn num_params(&self) -> usize {
        self.inner.meta().num_params
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyfunction]
#[pyo3(signature = (circuit, obs, cutoff, workers=1))]
fn backpropagate(
    py: Python<'_>,
    circuit: &PyNoisyCircuit,
    obs: &PyPauliString,
    cutoff: usize,
    workers: usize,
) -> PyResult<PySurrogateSeries> {
    let cfg = BackpropConfig::new(cutoff).workers(workers);
    let (inner, _) = py
        .detach(|| lowesa_core::backpropagate_with(&circuit.inner, &obs.inner, &cfg))
        .map_err(to_py)?;
    Ok(PySurrogateSeries { inner })
}

#[pyfunction]
fn dense_simulate(circuit: &PyNoisyCircuit, theta: Vec<f64>, obs: &PyPauliString) -> PyResult<f64> {
    lowesa_core::dense_simulate(&circuit.inner, &theta, &obs.inner).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (circuit, obs, budget=DEFAULT_PATH_BUDGET))]
fn exact_series(circuit: &PyNoisyCircuit, obs: &PyPauliString, budget: u64) -> PyResult<PySurrogateSeries> {
    Ok(PySurrogateSeries { inner: lowesa_core::exact_series(&circuit.inner, &obs.inner, budget).map_err(to_py)? })
}

#[pyfunction]
fn parseval_distance(a: &PySurrogateSeries, b: &PySurrogateSeries) -> PyResult<f64> {
    lowesa_core::parseval_distance(&a.inner, &b.inner).map_err(to_py)
}

/// `(tight, exponential)` bounds on the truncation error.
#[pyfunction]
#[pyo3(signature = (cutoff, p, pz, eta=0.0))]
fn theoretical_bound(cutoff: usize, p: f64, pz: f64, eta: f64) -> PyResult<(f64, f64)> {
    let b = lowesa_core::theoretical_bound(cutoff, &NoiseSummary::new(p, pz).with_eta(eta)).map_err(to_py)?;
    Ok((b.tight, b.exponential))
}

#[pymodule]
#[pyo3(name = "lowesa")]
fn lowesa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauliString>()?;
    m.add_class::<PyNoisyCircuit>()?;
    m.add_class::<PySurrogateSeries>()?;
    m.add_function(wrap_pyfunction!(backpropagate, m)?)?;
    m.add_function(wrap_pyfunction!(dense_simulate, m)?)?;
    m.add_function(wrap_pyfunction!(exact_series, m)?)?;
    m.add_function(wrap_pyfunction!(parseval_distance, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_bound, m)?)?;
    Ok(())
}
