//! Python bindings. Rationals cross the boundary as `"p/q"` strings; weights
//! may also be given as Python ints. Structured results come back as dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;
use serde::Serialize;
use voting_power::divisor;
use voting_power::fixedpoint::{self, AbFamily};
use voting_power::indices;
use voting_power::rational::format_rational;
use voting_power::verify::{self, Suite, VerifyBounds};
use voting_power::{Engine, EngineConfig, Error, IndexKind, QuotaMode, Rational};

create_exception!(voting_power, VotingPowerError, PyValueError);
create_exception!(voting_power, DegenerateSystemError, VotingPowerError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::DegenerateSystem(_) => DegenerateSystemError::new_err(e.to_string()),
        _ => VotingPowerError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for voting_power::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = value.extract::<i64>() {
        return Ok(voting_power::rational::int(i));
    }
    let text: String = value
        .extract()
        .map_err(|_| VotingPowerError::new_err("expected an int or a \"p/q\" string"))?;
    voting_power::parse_rational(&text).or_py()
}

fn rationals(values: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    values.try_iter()?.map(|v| rational(&v?)).collect()
}

fn texts(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn parse<T: std::str::FromStr<Err = Error>>(text: &str) -> PyResult<T> {
    text.parse().or_py()
}

fn engine(text: &str) -> PyResult<Engine> {
    parse(text)
}

fn to_dict<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text =
        serde_json::to_string(value).map_err(|e| VotingPowerError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn config(workers: Option<usize>) -> EngineConfig {
    EngineConfig {
        workers,
        ..EngineConfig::default()
    }
}

/// A weighted voting system `[quota; weights]`.
#[pyclass(name = "VotingSystem", module = "voting_power", frozen)]
struct PyVotingSystem {
    inner: voting_power::VotingSystem,
}

#[pymethods]
impl PyVotingSystem {
    #[new]
    #[pyo3(signature = (weights, quota, mode = "ge"))]
    fn new(weights: &Bound<'_, PyAny>, quota: &Bound<'_, PyAny>, mode: &str) -> PyResult<Self> {
        let mode: QuotaMode = parse(mode)?;
        let inner =
            voting_power::VotingSystem::new(rational(quota)?, mode, rationals(weights)?).or_py()?;
        Ok(PyVotingSystem { inner })
    }

    /// `[1/2 strict; weights]`.
    #[staticmethod]
    fn strict_majority(weights: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = voting_power::VotingSystem::strict_majority(rationals(weights)?).or_py()?;
        Ok(PyVotingSystem { inner })
    }

    #[staticmethod]
    fn divisor(n: u64) -> PyResult<Self> {
        let ds = divisor::divisor_system(n).or_py()?;
        Ok(PyVotingSystem { inner: ds.system })
    }

    #[getter]
    fn weights(&self) -> Vec<String> {
        texts(self.inner.weights())
    }

    #[getter]
    fn quota(&self) -> String {
        format_rational(self.inner.quota())
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode().as_str()
    }

    #[getter]
    fn players(&self) -> usize {
        self.inner.players()
    }

    fn is_winning(&self, members: Vec<usize>) -> PyResult<bool> {
        self.inner
            .is_winning(&voting_power::Coalition::new(members))
            .or_py()
    }

    #[pyo3(signature = (engine = "auto", workers = None))]
    fn banzhaf(
        &self,
        py: Python<'_>,
        engine: &str,
        workers: Option<usize>,
    ) -> PyResult<Vec<String>> {
        self.index(py, IndexKind::Banzhaf, engine, workers)
    }

    #[pyo3(signature = (engine = "auto", workers = None))]
    fn shapley_shubik(
        &self,
        py: Python<'_>,
        engine: &str,
        workers: Option<usize>,
    ) -> PyResult<Vec<String>> {
        self.index(py, IndexKind::ShapleyShubik, engine, workers)
    }

    /// Winning coalitions among all `2^n` subsets.
    fn count_winning(&self, py: Python<'_>) -> PyResult<u128> {
        let count = py
            .detach(|| indices::count_winning(&self.inner, &EngineConfig::default()))
            .or_py()?;
        count
            .to_string()
            .parse()
            .map_err(|_| VotingPowerError::new_err("count does not fit in 128 bits"))
    }

    fn __repr__(&self) -> String {
        format!("VotingSystem({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl PyVotingSystem {
    fn index(
        &self,
        py: Python<'_>,
        kind: IndexKind,
        engine_name: &str,
        workers: Option<usize>,
    ) -> PyResult<Vec<String>> {
        let engine = engine(engine_name)?;
        let cfg = config(workers);
        let v = py
            .detach(|| indices::index(&self.inner, kind, engine, &cfg))
            .or_py()?;
        Ok(texts(&v.values))
    }
}

/// One index vector of `[quota; weights]`.
#[pyfunction]
#[pyo3(signature = (weights, quota, mode = "ge", kind = "banzhaf", engine = "auto"))]
fn index(
    py: Python<'_>,
    weights: &Bound<'_, PyAny>,
    quota: &Bound<'_, PyAny>,
    mode: &str,
    kind: &str,
    engine: &str,
) -> PyResult<Vec<String>> {
    let system = PyVotingSystem::new(weights, quota, mode)?;
    system.index(py, parse(kind)?, engine, None)
}

#[pyfunction]
fn normalize(weights: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
    Ok(texts(
        &voting_power::normalize(&rationals(weights)?).or_py()?,
    ))
}

/// Both indices of the divisor system of `n`, where they differ, and the
/// closed-form comparison when one applies.
#[pyfunction]
fn divisor_report<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| divisor::disagreement_report(n, &EngineConfig::default()))
        .or_py()?;
    to_dict(py, &report)
}

#[pyfunction]
#[pyo3(signature = (limit, divisor_count = None))]
fn scan_abundant(limit: u64, divisor_count: Option<usize>) -> Vec<u64> {
    divisor::scan_abundant(limit, divisor_count)
        .into_iter()
        .map(|e| e.n)
        .collect()
}

#[pyfunction]
fn compare_pn_mn<'py>(py: Python<'py>, n: u64, p: u64, m: u64) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| divisor::compare_pn_mn(n, p, m, &EngineConfig::default()))
        .or_py()?;
    to_dict(py, &report)
}

/// Iterates `w -> index([1/2 strict; w])`; returns the trace as a dict.
#[pyfunction]
#[pyo3(signature = (weights, kind = "ss", max_iters = 100))]
fn iterate<'py>(
    py: Python<'py>,
    weights: &Bound<'py, PyAny>,
    kind: &str,
    max_iters: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let weights = rationals(weights)?;
    let kind: IndexKind = parse(kind)?;
    let trace = py
        .detach(|| fixedpoint::iterate(&weights, kind, max_iters, &EngineConfig::default()))
        .or_py()?;
    to_dict(py, &trace)
}

#[pyfunction]
#[pyo3(signature = (weights, kind = "ss"))]
fn is_fixed_point(weights: &Bound<'_, PyAny>, kind: &str) -> PyResult<bool> {
    fixedpoint::is_fixed_point(&rationals(weights)?, parse(kind)?, &EngineConfig::default()).or_py()
}

/// `family` is `"odd"` (`m = 2k - 1`) or `"even"` (`m = 2k`).
#[pyfunction]
#[pyo3(signature = (k, c, family = "odd"))]
fn ab_family_point<'py>(
    py: Python<'py>,
    k: i64,
    c: i64,
    family: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let family = match family {
        "odd" => AbFamily::OddM,
        "even" => AbFamily::EvenM,
        other => {
            return Err(VotingPowerError::new_err(format!(
                "unknown family {other:?}"
            )))
        }
    };
    to_dict(py, &fixedpoint::ab_family_point(family, k, c).or_py()?)
}

#[pyfunction]
fn ab_fixed_solutions(m: usize) -> PyResult<Vec<String>> {
    Ok(texts(&fixedpoint::ab_fixed_solutions(m).or_py()?))
}

#[pyfunction]
fn aab_fixed_solutions(py: Python<'_>, m: usize) -> PyResult<Vec<String>> {
    let solutions = py
        .detach(|| fixedpoint::aab_fixed_solutions(m, &EngineConfig::default()))
        .or_py()?;
    Ok(texts(&solutions))
}

/// Runs one verification suite (or `"all"`) and returns its checks.
#[pyfunction]
#[pyo3(signature = (suite = "all", max_n = 1000))]
fn run_verify<'py>(py: Python<'py>, suite: &str, max_n: u64) -> PyResult<Bound<'py, PyAny>> {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![parse::<Suite>(suite)?]
    };
    let bounds = VerifyBounds {
        max_n,
        ..VerifyBounds::default()
    };
    let report = py
        .detach(|| verify::run(&suites, &bounds, &EngineConfig::default()))
        .or_py()?;
    let dict = to_dict(py, &report)?;
    dict.set_item("passed", report.passed())?;
    Ok(dict)
}

/// Registers everything on `m`; shared by the extension entry point and tests.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyVotingSystem>()?;
    m.add("VotingPowerError", py.get_type::<VotingPowerError>())?;
    m.add(
        "DegenerateSystemError",
        py.get_type::<DegenerateSystemError>(),
    )?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_report, m)?)?;
    m.add_function(wrap_pyfunction!(scan_abundant, m)?)?;
    m.add_function(wrap_pyfunction!(compare_pn_mn, m)?)?;
    m.add_function(wrap_pyfunction!(iterate, m)?)?;
    m.add_function(wrap_pyfunction!(is_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(ab_family_point, m)?)?;
    m.add_function(wrap_pyfunction!(ab_fixed_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(aab_fixed_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add(
        "SUITES",
        PyList::new(py, Suite::ALL.iter().map(|s| s.name()))?,
    )?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "voting_power")]
fn voting_power_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
