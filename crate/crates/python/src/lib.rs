//! Python bindings: grid diagrams, samplers, invariants and exact counts.

use gridlinks_core::enumerate::exact_table_by_enumeration;
use gridlinks_core::exact::{self, BigRational};
use gridlinks_core::experiment::{grid_sweep, Experiment};
use gridlinks_core::{invariants, sampler, GridError};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: GridError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((q.numer().clone(), q.denom().clone()))
}

/// An n x n grid diagram given by the black and white dot columns of each
/// row (1-based, rows numbered bottom to top).
#[pyclass(
    module = "gridlinks",
    name = "LinkGrid",
    eq,
    frozen,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyLinkGrid(gridlinks_core::LinkGrid);

#[pymethods]
impl PyLinkGrid {
    #[new]
    fn new(black_col: Vec<usize>, white_col: Vec<usize>) -> PyResult<Self> {
        gridlinks_core::grid::validate_link(black_col, white_col)
            .map(PyLinkGrid)
            .map_err(value_error)
    }

    /// Parses the compact text form `n;b1,b2,..;w1,w2,..`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(PyLinkGrid).map_err(value_error)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn black_col(&self) -> Vec<usize> {
        self.0.black_col().to_vec()
    }

    #[getter]
    fn white_col(&self) -> Vec<usize> {
        self.0.white_col().to_vec()
    }

    fn transition_permutation(&self) -> Vec<usize> {
        self.0.transition_permutation()
    }

    fn mirror(&self) -> Self {
        PyLinkGrid(self.0.mirror())
    }

    fn component_count(&self) -> usize {
        invariants::component_count(&self.0)
    }

    fn writhe(&self) -> i64 {
        invariants::writhe(&self.0)
    }

    /// `(row, col, sign)` for every crossing.
    fn crossings(&self) -> Vec<(usize, usize, i32)> {
        invariants::crossings(&self.0)
            .into_iter()
            .map(|c| (c.row, c.col, c.sign))
            .collect()
    }

    fn total_arc_length(&self) -> usize {
        self.0.total_arc_length()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "LinkGrid({:?}, {:?})",
            self.0.black_col(),
            self.0.white_col()
        )
    }
}

/// A one-component diagram as the cyclic visiting orders of rows and columns.
#[pyclass(
    module = "gridlinks",
    name = "KnotLoop",
    eq,
    frozen,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyKnotLoop(gridlinks_core::KnotLoop);

#[pymethods]
impl PyKnotLoop {
    #[new]
    fn new(rho: Vec<usize>, kappa: Vec<usize>) -> PyResult<Self> {
        gridlinks_core::KnotLoop::new(rho, kappa)
            .map(PyKnotLoop)
            .map_err(value_error)
    }

    #[getter]
    fn rho(&self) -> Vec<usize> {
        self.0.rho().to_vec()
    }

    #[getter]
    fn kappa(&self) -> Vec<usize> {
        self.0.kappa().to_vec()
    }

    fn size(&self) -> usize {
        invariants::knot_size(&self.0)
    }

    fn length(&self) -> usize {
        invariants::knot_length(&self.0)
    }

    fn to_link(&self) -> PyLinkGrid {
        PyLinkGrid(self.0.to_link())
    }

    fn __repr__(&self) -> String {
        format!("KnotLoop({:?}, {:?})", self.0.rho(), self.0.kappa())
    }
}

/// Seeded random stream; equal (seed, stream_index) give equal draws.
#[pyclass(module = "gridlinks", name = "RandomStream")]
struct PyRandomStream(sampler::RandomStream);

#[pymethods]
impl PyRandomStream {
    #[new]
    #[pyo3(signature = (seed, stream_index = 0))]
    fn new(seed: u64, stream_index: u64) -> Self {
        PyRandomStream(sampler::RandomStream::new(seed, stream_index))
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed()
    }

    #[getter]
    fn stream_index(&self) -> u64 {
        self.0.stream_index()
    }
}

fn check_n(n: usize) -> PyResult<()> {
    if n < 2 {
        return Err(value_error(GridError::TooSmall(n, 2)));
    }
    Ok(())
}

/// Uniform random valid n x n diagram.
#[pyfunction]
fn sample_link(n: usize, rs: &mut PyRandomStream) -> PyResult<PyLinkGrid> {
    check_n(n)?;
    Ok(PyLinkGrid(sampler::sample_link(n, &mut rs.0)))
}

/// Uniform random knot using every row and column.
#[pyfunction]
fn sample_full_knot(n: usize, rs: &mut PyRandomStream) -> PyResult<PyKnotLoop> {
    check_n(n)?;
    Ok(PyKnotLoop(sampler::sample_full_knot(n, &mut rs.0)))
}

/// Knot closed at the first return to the starting row.
#[pyfunction]
fn sample_closing_knot(n: usize, rs: &mut PyRandomStream) -> PyResult<PyKnotLoop> {
    check_n(n)?;
    Ok(PyKnotLoop(sampler::sample_closing_knot(n, &mut rs.0)))
}

#[pyfunction]
fn count_links(n: usize) -> BigInt {
    exact::count_links(n)
}

#[pyfunction]
fn count_knots(n: usize) -> BigInt {
    exact::count_knots(n)
}

/// Number of n x n diagrams with exactly k components.
#[pyfunction]
fn count_components(n: usize, k: usize) -> BigInt {
    exact::cbar_table_recurrence(n, k.max(1)).c(n, k)
}

#[pyfunction]
fn expected_components(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyAny>> {
    check_n(n)?;
    fraction(py, &exact::expected_components(n))
}

#[pyfunction]
fn variance_components(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyAny>> {
    check_n(n)?;
    fraction(py, &exact::variance_components(n))
}

/// Brute-force component counts for n <= 7, as `(k, count)` pairs.
#[pyfunction]
fn enumerate_components(n: usize) -> PyResult<Vec<(usize, u64)>> {
    let row = exact_table_by_enumeration(n).map_err(value_error)?;
    Ok((1..row.counts.len()).map(|k| (k, row.c(k))).collect())
}

/// Deterministic Monte Carlo sweep. Returns one dict of summary statistics
/// per grid size.
#[pyfunction]
#[pyo3(signature = (experiment, ns, samples, seed = 0))]
fn sweep<'py>(
    py: Python<'py>,
    experiment: &str,
    ns: Vec<usize>,
    samples: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let e: Experiment = experiment.parse().map_err(value_error)?;
    if e == Experiment::WritheLength {
        return Err(PyValueError::new_err(
            "writhe-length is binned by length; use the CLI",
        ));
    }
    for &n in &ns {
        check_n(n)?;
    }
    let rows = py.detach(|| grid_sweep(e, &ns, samples, seed));
    rows.iter()
        .map(|(n, s)| {
            let d = PyDict::new(py);
            d.set_item("n", n)?;
            d.set_item("count", s.count)?;
            d.set_item("mean", s.mean)?;
            d.set_item("variance", s.variance())?;
            d.set_item("m4", s.fourth_moment())?;
            d.set_item("kurtosis", s.kurtosis().ok())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn gridlinks(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLinkGrid>()?;
    m.add_class::<PyKnotLoop>()?;
    m.add_class::<PyRandomStream>()?;
    m.add_function(wrap_pyfunction!(sample_link, m)?)?;
    m.add_function(wrap_pyfunction!(sample_full_knot, m)?)?;
    m.add_function(wrap_pyfunction!(sample_closing_knot, m)?)?;
    m.add_function(wrap_pyfunction!(count_links, m)?)?;
    m.add_function(wrap_pyfunction!(count_knots, m)?)?;
    m.add_function(wrap_pyfunction!(count_components, m)?)?;
    m.add_function(wrap_pyfunction!(expected_components, m)?)?;
    m.add_function(wrap_pyfunction!(variance_components, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_components, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
