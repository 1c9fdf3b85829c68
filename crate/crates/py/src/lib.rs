//! Python bindings. Reports come back as plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use certkit::cyclic::{self, CycleVector as CoreCycle, SolveOptions};
use certkit::funceq::{self, FunctionTable};
use certkit::gcdperfect::{self, GcdSet};
use certkit::kernel::{format_rational, parse_rational, ExactScalar};
use certkit::pinopt;
use certkit::rectconcur::{self, RectangleConfig};
use certkit::tripack::{self, PackingInstance as CorePacking, PairStrategy};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Smallest number of pin moves reaching doubled area `doubled_area`.
#[pyfunction]
#[pyo3(signature = (doubled_area, cap = None))]
fn min_moves<'py>(py: Python<'py>, doubled_area: u64, cap: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let bound = pinopt::lower_bound(doubled_area).map_err(value_err)?;
    let cert = pinopt::min_moves(doubled_area, cap.unwrap_or(2 * bound + 8)).map_err(value_err)?;
    to_py(py, &cert)
}

#[pyfunction]
fn pins_lower_bound(doubled_area: u64) -> PyResult<u64> {
    pinopt::lower_bound(doubled_area).map_err(value_err)
}

#[pyfunction]
fn oracle_min_moves(doubled_area: u64, radius: u64) -> PyResult<u64> {
    pinopt::oracle_min_moves(doubled_area, radius).map_err(value_err)
}

/// Violations of both rules for `values[n-1] = f(n)`.
#[pyfunction]
fn check_table<'py>(py: Python<'py>, values: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
    let table = FunctionTable::new(values).map_err(value_err)?;
    to_py(py, &funceq::check_table(&table))
}

/// Whether the forcing induction up to `limit` replays cleanly.
#[pyfunction]
fn replay_forced_trace(limit: u64) -> bool {
    funceq::replay_trace(&funceq::forced_trace(limit)).passed()
}

#[pyfunction]
fn is_gcd_perfect(elements: Vec<u64>) -> PyResult<bool> {
    Ok(gcdperfect::is_gcd_perfect(&GcdSet::new(elements).map_err(value_err)?).verdict)
}

#[pyfunction]
fn gcd_structure<'py>(py: Python<'py>, elements: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
    let set = GcdSet::new(elements).map_err(value_err)?;
    to_py(py, &gcdperfect::structure_report(&set).map_err(value_err)?)
}

#[pyfunction]
fn construct_gcd_set(p: Vec<u64>, q: Vec<u64>) -> PyResult<Vec<u64>> {
    Ok(gcdperfect::construct(&p, &q).map_err(value_err)?.elements().to_vec())
}

#[pyfunction]
#[pyo3(signature = (size, max_element, node_budget = gcdperfect::DEFAULT_NODE_BUDGET))]
fn search_gcd_sets(size: usize, max_element: u64, node_budget: u64) -> PyResult<Vec<Vec<u64>>> {
    let outcome = gcdperfect::search_size(size, max_element, node_budget).map_err(value_err)?;
    Ok(outcome.sets.iter().map(|s| s.elements().to_vec()).collect())
}

/// Concurrency reports for `count` seeded random configurations.
#[pyfunction]
#[pyo3(signature = (seed, count, perturb = None))]
fn certify_batch<'py>(py: Python<'py>, seed: u64, count: usize, perturb: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(count);
    for _ in 0..count {
        let (t, h_a, h_b) = rectconcur::random_instance(&mut rng);
        let mut config = rectconcur::build_config(t, h_a, h_b).map_err(value_err)?;
        if let Some(f) = perturb {
            config = RectangleConfig::with_heights(t, h_a, h_b, config.h_c * f).map_err(value_err)?;
        }
        reports.push(rectconcur::certify_concurrency(&config));
    }
    to_py(py, &reports)
}

/// Inverted unit triangles inside an equilateral triangle of side `side_len`.
#[pyclass(name = "PackingInstance", frozen)]
struct PyPacking {
    inner: CorePacking,
}

#[pymethods]
impl PyPacking {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: CorePacking::parse(text).map_err(value_err)? })
    }

    /// Row tessellation of side `side` (rational string) with inset `margin`.
    #[staticmethod]
    #[pyo3(signature = (side, margin = "0"))]
    fn tessellate(side: &str, margin: &str) -> PyResult<Self> {
        let side = parse_rational(side).map_err(value_err)?;
        let margin: ExactScalar = parse_rational(margin).map_err(value_err)?;
        Ok(Self { inner: tripack::tessellate(&side, &margin).map_err(value_err)? })
    }

    #[getter]
    fn side_len(&self) -> String {
        format_rational(&self.inner.side_len)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_text(&self) -> PyResult<String> {
        self.inner.to_text().map_err(value_err)
    }

    /// Anchors as float pairs.
    fn anchors(&self) -> Vec<(f64, f64)> {
        self.inner.anchors.iter().map(|a| a.to_f64()).collect()
    }

    #[pyo3(signature = (brute_force = false))]
    fn validate<'py>(&self, py: Python<'py>, brute_force: bool) -> PyResult<Bound<'py, PyAny>> {
        let strategy = if brute_force { PairStrategy::BruteForce } else { PairStrategy::Grid };
        to_py(py, &tripack::validate_packing_with(&self.inner, strategy))
    }
}

/// A positive vector `(a₁, …, a₂ₙ)` for the cyclic system.
#[pyclass(name = "CycleVector", frozen)]
struct PyCycle {
    inner: CoreCycle,
}

#[pymethods]
impl PyCycle {
    #[new]
    fn new(entries: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: CoreCycle::new(entries).map_err(value_err)? })
    }

    #[staticmethod]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: CoreCycle::random(n, seed).map_err(value_err)? })
    }

    #[staticmethod]
    fn canonical(n: usize) -> PyResult<Self> {
        Ok(Self { inner: cyclic::canonical_solution(n).map_err(value_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn entries(&self) -> Vec<f64> {
        self.inner.entries().to_vec()
    }

    fn max_residual(&self) -> f64 {
        cyclic::residuals(&self.inner).max_abs
    }

    #[pyo3(signature = (tol = 1e-10, max_iter = 200))]
    fn solve(&self, tol: f64, max_iter: usize) -> PyResult<Self> {
        let outcome = cyclic::solve(&self.inner, &SolveOptions { tol, max_iter }).map_err(value_err)?;
        Ok(Self { inner: outcome.solution })
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn identity_checks<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cyclic::identity_checks(&self.inner, tol).map_err(value_err)?)
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn minmax_certificate<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cyclic::minmax_certificate(&self.inner, tol).map_err(value_err)?)
    }

    fn __repr__(&self) -> String {
        format!("CycleVector({:?})", self.inner.entries())
    }
}

#[pymodule]
fn certkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(min_moves, m)?)?;
    m.add_function(wrap_pyfunction!(pins_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_min_moves, m)?)?;
    m.add_function(wrap_pyfunction!(check_table, m)?)?;
    m.add_function(wrap_pyfunction!(replay_forced_trace, m)?)?;
    m.add_function(wrap_pyfunction!(is_gcd_perfect, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_structure, m)?)?;
    m.add_function(wrap_pyfunction!(construct_gcd_set, m)?)?;
    m.add_function(wrap_pyfunction!(search_gcd_sets, m)?)?;
    m.add_function(wrap_pyfunction!(certify_batch, m)?)?;
    m.add_class::<PyPacking>()?;
    m.add_class::<PyCycle>()?;
    Ok(())
}
