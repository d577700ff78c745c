//! Python bindings for the `rbcsp` crate.

use std::time::Duration;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use rbcsp_core::analysis::{self, ProfileVariant};
use rbcsp_core::encode::{encode_direct, write_dimacs};
use rbcsp_core::io::{format_instance, parse_instance};
use rbcsp_core::mac::{self, SearchConfig};
use rbcsp_core::tabu::{self, TabuConfig};
use rbcsp_core::{Assignment, Error, Model, Status};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "InstanceParams", from_py_object)]
#[derive(Clone)]
struct PyParams(rbcsp_core::InstanceParams);

#[pymethods]
impl PyParams {
    #[new]
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (k, n, alpha, r, p, model = "RB", forced = false, seed = 0))]
    fn new(
        k: usize,
        n: usize,
        alpha: f64,
        r: f64,
        p: f64,
        model: &str,
        forced: bool,
        seed: u64,
    ) -> PyResult<Self> {
        let model: Model = model.parse().map_err(py_err)?;
        let params = rbcsp_core::InstanceParams::new(k, n, alpha, r, p)
            .with_model(model)
            .with_forced(forced)
            .with_seed(seed);
        params.validate().map_err(py_err)?;
        Ok(PyParams(params))
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }
    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }
    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }
    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }
    #[getter]
    fn model(&self) -> String {
        self.0.model.to_string()
    }
    #[getter]
    fn forced(&self) -> bool {
        self.0.forced
    }
    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    /// Copy with a different seed.
    fn with_seed(&self, seed: u64) -> Self {
        PyParams(self.0.with_seed(seed))
    }

    /// Copy with a different tightness.
    fn with_p(&self, p: f64) -> Self {
        PyParams(self.0.with_p(p))
    }

    /// `(d, m)` for these parameters.
    fn dims(&self) -> PyResult<(usize, usize)> {
        let dims = rbcsp_core::derive_dims(&self.0).map_err(py_err)?;
        Ok((dims.d, dims.m))
    }

    fn __repr__(&self) -> String {
        format!("InstanceParams({})", rbcsp_core::io::params_line(&self.0))
    }
}

#[pyclass(name = "Instance", from_py_object)]
#[derive(Clone)]
struct PyInstance(rbcsp_core::Instance);

#[pymethods]
impl PyInstance {
    /// Builds an instance from `(scope, forbidden_tuples)` pairs.
    #[new]
    fn new(n: usize, d: usize, k: usize, constraints: Vec<(Vec<usize>, Vec<Vec<usize>>)>) -> PyResult<Self> {
        let cs = constraints
            .into_iter()
            .map(|(scope, tuples)| rbcsp_core::Constraint::new(scope, tuples, d))
            .collect::<rbcsp_core::Result<Vec<_>>>()
            .map_err(py_err)?;
        Ok(PyInstance(rbcsp_core::Instance::new(n, d, k, cs).map_err(py_err)?))
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyInstance(parse_instance(text).map_err(py_err)?.instance))
    }

    fn to_text(&self) -> String {
        format_instance(&self.0, None, None)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }
    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }
    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }
    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    /// Constraints as `(scope, forbidden_tuples)` pairs.
    fn constraints(&self) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
        self.0
            .constraints()
            .iter()
            .map(|c| (c.scope().to_vec(), c.forbidden_tuples().collect()))
            .collect()
    }

    fn satisfies(&self, assignment: Vec<usize>) -> PyResult<bool> {
        rbcsp_core::satisfies(&self.0, &Assignment::new(assignment)).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, d={}, k={}, m={})", self.0.n(), self.0.d(), self.0.k(), self.0.m())
    }
}

#[pyclass(name = "GeneratedInstance", frozen)]
struct PyGenerated(rbcsp_core::GeneratedInstance);

#[pymethods]
impl PyGenerated {
    #[getter]
    fn params(&self) -> PyParams {
        PyParams(self.0.params)
    }
    #[getter]
    fn instance(&self) -> PyInstance {
        PyInstance(self.0.instance.clone())
    }
    #[getter]
    fn forced_solution(&self) -> Option<Vec<usize>> {
        self.0.forced_solution.as_ref().map(|a| a.values().to_vec())
    }

    /// Instance file text, metadata included.
    fn to_text(&self) -> String {
        rbcsp_core::io::format_generated(&self.0)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let file = parse_instance(text).map_err(py_err)?;
        Ok(PyGenerated(file.into_generated().map_err(py_err)?))
    }
}

#[pyclass(name = "SolveOutcome", frozen, get_all)]
struct PyOutcome {
    /// "SAT", "UNSAT" or "TIMEOUT".
    status: String,
    witness: Option<Vec<usize>>,
    nodes: u64,
    backtracks: u64,
    flips: u64,
    solutions: Option<u64>,
    elapsed: f64,
}

impl From<rbcsp_core::SolveOutcome> for PyOutcome {
    fn from(o: rbcsp_core::SolveOutcome) -> Self {
        PyOutcome {
            status: o.status.to_string(),
            witness: o.witness.map(Assignment::into_inner),
            nodes: o.nodes,
            backtracks: o.backtracks,
            flips: o.flips,
            solutions: o.solutions,
            elapsed: o.elapsed.as_secs_f64(),
        }
    }
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        format!(
            "SolveOutcome(status={}, nodes={}, backtracks={}, flips={})",
            self.status, self.nodes, self.backtracks, self.flips
        )
    }
}

#[pyfunction]
fn generate(params: &PyParams) -> PyResult<PyGenerated> {
    Ok(PyGenerated(rbcsp_core::generate(&params.0).map_err(py_err)?))
}

#[pyfunction]
fn sample_batch(params: &PyParams, count: usize, seed: u64) -> PyResult<Vec<PyGenerated>> {
    let batch = rbcsp_core::sample_batch(&params.0, count, seed).map_err(py_err)?;
    Ok(batch.into_iter().map(PyGenerated).collect())
}

fn search_config(
    node_limit: Option<u64>,
    backtrack_limit: Option<u64>,
    time_limit: Option<f64>,
    randomized: bool,
    tie_seed: u64,
    count_all: bool,
) -> PyResult<SearchConfig> {
    let time_limit = match time_limit {
        Some(s) if s > 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(PyValueError::new_err(format!("bad time limit {s}"))),
        None => None,
    };
    Ok(SearchConfig {
        node_limit,
        backtrack_limit,
        time_limit,
        randomized,
        tie_seed,
        count_all,
    })
}

#[pyfunction]
#[pyo3(signature = (instance, node_limit = None, backtrack_limit = None, time_limit = None, randomized = false, tie_seed = 0, count_all = false))]
#[allow(clippy::too_many_arguments)]
fn solve_mac(
    py: Python<'_>,
    instance: &PyInstance,
    node_limit: Option<u64>,
    backtrack_limit: Option<u64>,
    time_limit: Option<f64>,
    randomized: bool,
    tie_seed: u64,
    count_all: bool,
) -> PyResult<PyOutcome> {
    let cfg = search_config(node_limit, backtrack_limit, time_limit, randomized, tie_seed, count_all)?;
    let out = py.detach(|| mac::solve_mac(&instance.0, &cfg)).map_err(py_err)?;
    Ok(out.into())
}

#[pyfunction]
#[pyo3(signature = (instance, max_flips = 100_000, tabu_tenure = 10, restarts = 1, seed = 0, weight_learning = true))]
fn solve_tabu(
    py: Python<'_>,
    instance: &PyInstance,
    max_flips: u64,
    tabu_tenure: u64,
    restarts: u64,
    seed: u64,
    weight_learning: bool,
) -> PyResult<PyOutcome> {
    let cfg = TabuConfig {
        max_flips,
        tabu_tenure,
        restarts,
        seed,
        weight_learning,
        self_check: false,
    };
    let out = py.detach(|| tabu::solve_tabu(&instance.0, &cfg)).map_err(py_err)?;
    Ok(out.into())
}

/// `(status, solution_count)` by exhaustive enumeration.
#[pyfunction]
fn brute_force(py: Python<'_>, instance: &PyInstance) -> PyResult<(String, u64)> {
    let (status, count) = py.detach(|| mac::brute_force(&instance.0)).map_err(py_err)?;
    Ok((status.to_string(), count))
}

#[pyfunction]
#[pyo3(signature = (instance, runs, tie_seed = 0, backtrack_limit = None))]
fn survival_runs(
    py: Python<'_>,
    instance: &PyInstance,
    runs: usize,
    tie_seed: u64,
    backtrack_limit: Option<u64>,
) -> PyResult<Vec<u64>> {
    let cfg = search_config(None, backtrack_limit, None, true, tie_seed, false)?;
    py.detach(|| mac::survival_runs(&instance.0, runs, &cfg)).map_err(py_err)
}

#[pyfunction]
fn p_critical(alpha: f64, r: f64) -> f64 {
    analysis::p_critical(alpha, r)
}

#[pyfunction]
fn r_critical(alpha: f64, p: f64) -> f64 {
    analysis::r_critical(alpha, p)
}

/// `(p_cr, r_cr, conditions_for_r, conditions_for_p, k_exp_condition)`.
#[pyfunction]
fn check_conditions(params: &PyParams) -> (f64, f64, bool, bool, bool) {
    let rep = analysis::check_conditions(&params.0);
    (rep.p_cr, rep.r_cr, rep.conditions_r.all(), rep.conditions_p.all(), rep.k_exp_condition)
}

/// Natural log of the expected solution count, unforced or forced.
#[pyfunction]
#[pyo3(signature = (params, forced = false))]
fn ln_expected_solutions(params: &PyParams, forced: bool) -> PyResult<f64> {
    let dims = rbcsp_core::derive_dims(&params.0).map_err(py_err)?;
    Ok(if forced {
        analysis::forced_expected_solutions(&params.0, &dims)
    } else {
        analysis::expected_solutions(&params.0, &dims)
    })
}

/// `[(delta, exponent), ...]` for the "forced" or "unforced" variant.
#[pyfunction]
#[pyo3(signature = (params, variant = "forced", grid_size = 101))]
fn distance_profile(params: &PyParams, variant: &str, grid_size: usize) -> PyResult<Vec<(f64, f64)>> {
    let variant = match variant {
        "forced" => ProfileVariant::Forced,
        "unforced" => ProfileVariant::Unforced,
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    let prof = analysis::distance_profile(&params.0, variant, grid_size).map_err(py_err)?;
    Ok(prof.grid)
}

/// `(var_count, clauses)` of the direct encoding.
#[pyfunction]
#[pyo3(signature = (instance, amo = true))]
fn encode(instance: &PyInstance, amo: bool) -> (usize, Vec<Vec<i64>>) {
    let cnf = encode_direct(&instance.0, amo);
    (cnf.var_count, cnf.clauses)
}

#[pyfunction]
#[pyo3(signature = (instance, amo = true))]
fn to_dimacs(instance: &PyInstance, amo: bool) -> String {
    write_dimacs(&encode_direct(&instance.0, amo), &[])
}

#[pymodule]
fn rbcsp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyGenerated>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(sample_batch, m)?)?;
    m.add_function(wrap_pyfunction!(solve_mac, m)?)?;
    m.add_function(wrap_pyfunction!(solve_tabu, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(survival_runs, m)?)?;
    m.add_function(wrap_pyfunction!(p_critical, m)?)?;
    m.add_function(wrap_pyfunction!(r_critical, m)?)?;
    m.add_function(wrap_pyfunction!(check_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(ln_expected_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(distance_profile, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(to_dimacs, m)?)?;
    m.add("SAT", Status::Sat.to_string())?;
    m.add("UNSAT", Status::Unsat.to_string())?;
    m.add("TIMEOUT", Status::Timeout.to_string())?;
    Ok(())
}
