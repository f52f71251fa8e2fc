//! Python bindings: the exact laws, oracles, and the growth state machine,
//! exposed in-process. Exact rationals cross the boundary as
//! `(numerator, denominator)` tuples of Python ints, ready for
//! `fractions.Fraction`.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hyperrec::combinatorics::StirlingTable;
use hyperrec::error::Error;
use hyperrec::global_profile;
use hyperrec::growth::{DrawSource, TreeState};
use hyperrec::local_profile;
use hyperrec::montecarlo::{run_local, SimConfig};
use hyperrec::oracle;
use hyperrec::rational::ExactRational;

type PyRational = (BigInt, BigInt);

fn convert(r: &ExactRational) -> PyRational {
    (r.numer().clone(), r.denom().clone())
}

fn to_py_err(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Exact mean of the containment level of vertex `k` at age `n`.
#[pyfunction]
fn exact_mean(theta: u32, n: u64, k: u64) -> PyResult<PyRational> {
    local_profile::exact_mean(theta, n, k)
        .map(|r| convert(&r))
        .map_err(to_py_err)
}

/// Exact variance of the containment level of vertex `k` at age `n`.
#[pyfunction]
fn exact_variance(theta: u32, n: u64, k: u64) -> PyResult<PyRational> {
    local_profile::exact_variance(theta, n, k)
        .map(|r| convert(&r))
        .map_err(to_py_err)
}

/// Exact pmf of the containment level, as a list of
/// `(numerator, denominator)` pairs over the support `1 ..= n - k + 1`.
#[pyfunction]
#[pyo3(signature = (theta, n, k, table_cap=2000))]
fn exact_pmf(theta: u32, n: u64, k: u64, table_cap: usize) -> PyResult<Vec<PyRational>> {
    if k > n {
        return Err(PyValueError::new_err(format!("k={k} exceeds n={n}")));
    }
    let m = (n - k) as usize;
    if m > table_cap {
        return Err(PyValueError::new_err(format!(
            "pmf needs Stirling row {m}, cap is {table_cap}"
        )));
    }
    let table = StirlingTable::new(m);
    local_profile::exact_pmf(theta, n, k, &table)
        .map(|pmf| pmf.probabilities.iter().map(convert).collect())
        .map_err(to_py_err)
}

/// Moment generating function of the containment level at `t`.
#[pyfunction]
fn mgf(theta: u32, n: u64, k: u64, t: f64) -> PyResult<f64> {
    local_profile::mgf(theta, n, k, t).map_err(to_py_err)
}

/// Exact joint moments of `(X1, X2)` at age `n`.
#[pyfunction]
fn global_moments(py: Python<'_>, theta: u32, n: u64) -> PyResult<Py<PyDict>> {
    let m = global_profile::second_moments_recurrence(theta, n).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("e1", convert(&m.e1))?;
    dict.set_item("e2", convert(&m.e2))?;
    dict.set_item("e11", convert(&m.e11))?;
    dict.set_item("e12", convert(&m.e12))?;
    dict.set_item("e22", convert(&m.e22))?;
    dict.set_item("var1", convert(&m.var1()))?;
    dict.set_item("cov12", convert(&m.cov12()))?;
    dict.set_item("var2", convert(&m.var2()))?;
    Ok(dict.into())
}

/// Entries of the limit of `Sigma_n / n`.
#[pyfunction]
fn asymptotic_cov(py: Python<'_>, theta: u32) -> PyResult<Py<PyDict>> {
    let cov = global_profile::asymptotic_cov(theta).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("var1", convert(&cov.var1))?;
    dict.set_item("cov12", convert(&cov.cov12))?;
    dict.set_item("var2", convert(&cov.var2))?;
    Ok(dict.into())
}

/// CLT descriptors for `X1`: centering divisor, limit variance, and the
/// conditional-variance-sum limit.
#[pyfunction]
fn clt_params(py: Python<'_>, theta: u32) -> PyResult<Py<PyDict>> {
    let params = global_profile::clt_params(theta).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("theta", theta)?;
    dict.set_item("limit_variance", convert(&params.limit_variance))?;
    dict.set_item("vn_limit", convert(&params.vn_limit))?;
    Ok(dict.into())
}

/// Martingale factors `(r_n, s_n)` at age `n`.
#[pyfunction]
fn martingale_factors(theta: u32, n: u64) -> PyResult<(PyRational, PyRational)> {
    let f = global_profile::martingale_factors(theta, n).map_err(to_py_err)?;
    Ok((convert(&f.r), convert(&f.s)))
}

/// Trivariate hypergeometric mass `P(Q1 = q1, Q2 = q2)`.
#[pyfunction]
fn hypergeom_pmf(
    tau: u64,
    n1: u64,
    n2: u64,
    s: u64,
    q1: u64,
    q2: u64,
) -> PyResult<PyRational> {
    oracle::hypergeom_pmf(tau, n1, n2, s, q1, q2)
        .map(|r| convert(&r))
        .map_err(to_py_err)
}

/// Exact law of `(X1, X2)` at age `n` by forward DP, as a dict keyed by
/// `(x1, x2)` tuples.
#[pyfunction]
#[pyo3(signature = (theta, n, budget=30))]
fn dp_joint_distribution(
    py: Python<'_>,
    theta: u32,
    n: u64,
    budget: u64,
) -> PyResult<Py<PyDict>> {
    let dp = oracle::dp_joint_distribution_with_budget(theta, n, budget).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    for (&(x1, x2), p) in &dp[n as usize].mass {
        dict.set_item((x1, x2), convert(p))?;
    }
    Ok(dict.into())
}

/// Sample the containment level of vertex `k` at age `n` by drawing the
/// independent step indicators; returns one value per replicate.
#[pyfunction]
fn simulate_local(theta: u32, n: u64, k: u64, replicates: u64, seed: u64) -> PyResult<Vec<u32>> {
    let config = SimConfig {
        theta,
        n,
        replicates,
        master_seed: seed,
        tracked_vertex: Some(k),
        record_martingale: false,
    };
    run_local(&config)
        .map(|run| run.values)
        .map_err(to_py_err)
}

/// A growing hyperrecursive tree bound to a seeded draw stream.
#[pyclass]
struct Tree {
    state: TreeState,
    draws: DrawSource,
}

#[pymethods]
impl Tree {
    #[new]
    #[pyo3(signature = (theta, seed=0))]
    fn new(theta: u32, seed: u64) -> PyResult<Self> {
        let state = TreeState::init(theta).map_err(to_py_err)?;
        Ok(Tree {
            state,
            draws: DrawSource::seeded(seed),
        })
    }

    /// Perform `steps` growth steps.
    fn grow(&mut self, steps: u64) -> PyResult<()> {
        self.state
            .grow_many(steps, &mut self.draws)
            .map_err(to_py_err)
    }

    #[getter]
    fn age(&self) -> u64 {
        self.state.age
    }

    #[getter]
    fn theta(&self) -> u32 {
        self.state.theta
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.state.vertex_count()
    }

    /// Containment level of the vertex labeled `k` (0 picks the
    /// representative originator).
    fn containment(&self, k: u64) -> PyResult<u32> {
        self.state.containment_of(k).map_err(to_py_err)
    }

    /// Counts per containment level `1..=max_level`, with an overflow
    /// bucket at the end.
    fn profile(&self, max_level: usize) -> Vec<u64> {
        self.state.global_profile(max_level)
    }

    /// `(X1, X2)`: counts at the two smallest containment levels.
    fn x1_x2(&self) -> (u64, u64) {
        self.state.x1_x2()
    }

    /// Exact martingale value `r_n X1 + s_n` of the current state.
    fn martingale_value(&self) -> PyResult<PyRational> {
        global_profile::martingale_value(&self.state)
            .map(|r| convert(&r))
            .map_err(to_py_err)
    }

    /// JSON snapshot of the full state.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.state)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let (x1, x2) = self.state.x1_x2();
        format!(
            "Tree(theta={}, age={}, vertices={}, x1={x1}, x2={x2})",
            self.state.theta,
            self.state.age,
            self.state.vertex_count()
        )
    }
}

#[pymodule]
fn hyperrec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Tree>()?;
    m.add_function(wrap_pyfunction!(exact_mean, m)?)?;
    m.add_function(wrap_pyfunction!(exact_variance, m)?)?;
    m.add_function(wrap_pyfunction!(exact_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(mgf, m)?)?;
    m.add_function(wrap_pyfunction!(global_moments, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_cov, m)?)?;
    m.add_function(wrap_pyfunction!(clt_params, m)?)?;
    m.add_function(wrap_pyfunction!(martingale_factors, m)?)?;
    m.add_function(wrap_pyfunction!(hypergeom_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(dp_joint_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_local, m)?)?;
    Ok(())
}
