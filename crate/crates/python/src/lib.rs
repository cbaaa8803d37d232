use std::path::Path;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sclab::experiments::{self, ExperimentConfig};
use sclab::quasimorphism::{rigidity_certificate, verify_certificate_json};
use sclab::sampling::{subword_stats, RandomWordSpec};
use sclab::spectra::{build_digraph, cheeger_constant, spectral_report};
use sclab::tripods::{assemble_upper_bound, default_edge_length};
use sclab::{cyclic_reduce, parse_chain, Alphabet, Error, Mode};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Capacity(_) | Error::Exhaustion(_) | Error::Io(_) | Error::Internal(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn alphabet(rank: usize) -> PyResult<Alphabet> {
    Alphabet::new(rank).map_err(py_err)
}

/// A word, freely reduced on construction; `A` is the inverse of `a`.
#[pyclass(frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Word {
    rank: usize,
    inner: sclab::Word,
}

#[pymethods]
impl Word {
    #[new]
    #[pyo3(signature = (text, rank = 2))]
    fn new(text: &str, rank: usize) -> PyResult<Self> {
        let inner = alphabet(rank)?.word(text).map_err(py_err)?;
        Ok(Word { rank, inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?}, rank={})", self.inner.to_string(), self.rank)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __mul__(&self, other: &Word) -> Word {
        Word { rank: self.rank.max(other.rank), inner: self.inner.mul(&other.inner) }
    }

    fn inverse(&self) -> Word {
        Word { rank: self.rank, inner: self.inner.inverse() }
    }

    fn cyclic_core(&self) -> Word {
        Word { rank: self.rank, inner: cyclic_reduce(&self.inner).0.word().clone() }
    }

    fn is_cyclically_reduced(&self) -> bool {
        self.inner.is_cyclically_reduced()
    }

    fn in_commutator_subgroup(&self) -> bool {
        self.inner.in_commutator_subgroup(self.rank)
    }

    fn abelianization(&self) -> Vec<i64> {
        self.inner.abelianization(self.rank)
    }

    /// Normalized inverse-subword asymmetry `A_ℓ`, counted linearly.
    fn inverse_asymmetry(&self, ell: usize) -> PyResult<f64> {
        Ok(subword_stats(&self.inner, ell, false).map_err(py_err)?.inverse_asymmetry())
    }
}

/// Result of an scl solve: `value` is `p/q` in exact mode.
#[pyclass(frozen, get_all)]
struct SclResult {
    value: String,
    float: f64,
    mode: String,
    exact: bool,
    strong_duality: bool,
}

#[pymethods]
impl SclResult {
    fn __repr__(&self) -> String {
        format!("SclResult(value={:?}, mode={:?})", self.value, self.mode)
    }
}

#[pyfunction]
#[pyo3(signature = (chain, rank = 2, mode = "auto"))]
fn scl(py: Python<'_>, chain: &str, rank: usize, mode: &str) -> PyResult<SclResult> {
    let mode: Mode = mode.parse().map_err(py_err)?;
    let c = parse_chain(chain, &alphabet(rank)?).map_err(py_err)?;
    let r = py.detach(|| sclab::scl(&c, mode)).map_err(py_err)?;
    Ok(SclResult {
        value: r.value.to_string(),
        float: r.value.to_f64(),
        mode: r.mode.to_string(),
        exact: r.value.exact().is_some(),
        strong_duality: r.strong_duality_holds(),
    })
}

#[pyfunction]
#[pyo3(signature = (n, seed, rank = 2, conditioned = false))]
fn random_word(n: usize, seed: u64, rank: usize, conditioned: bool) -> PyResult<Word> {
    let mut spec = RandomWordSpec::new(alphabet(rank)?, n, seed);
    if conditioned {
        spec = spec.conditioned();
    }
    Ok(Word { rank, inner: spec.sample().map_err(py_err)? })
}

/// Lower bound certificate as JSON.
#[pyfunction]
#[pyo3(signature = (word, epsilon = 0.25))]
fn certify(py: Python<'_>, word: &Word, epsilon: f64) -> PyResult<String> {
    let cert = py.detach(|| rigidity_certificate(&word.inner, word.rank, epsilon)).map_err(py_err)?;
    Ok(cert.to_json())
}

/// Returns the verified lower bound `p/q`, or `None` if a check failed.
#[pyfunction]
fn verify_certificate(json: &str) -> PyResult<Option<String>> {
    let check = verify_certificate_json(json).map_err(py_err)?;
    Ok(if check.passed() { check.lower_bound } else { None })
}

/// Tripod fatgraph upper bound `p/q`.
#[pyfunction]
#[pyo3(signature = (word, edge_length = None, budget = 4096))]
fn tripod_upper_bound(py: Python<'_>, word: &Word, edge_length: Option<usize>, budget: u64) -> PyResult<String> {
    let l = edge_length.unwrap_or_else(|| default_edge_length(word.inner.len().max(2), word.rank, 0.1));
    let a = py.detach(|| assemble_upper_bound(&word.inner, l, budget)).map_err(py_err)?;
    Ok(a.upper_bound.to_string())
}

/// Spectral report of the subword digraph as JSON.
#[pyfunction]
#[pyo3(signature = (level, rank = 2, powers = 12))]
fn spectra(level: usize, rank: usize, powers: usize) -> PyResult<String> {
    let g = build_digraph(&alphabet(rank)?, level).map_err(py_err)?;
    Ok(spectral_report(&g, powers).map_err(py_err)?.to_json())
}

/// Cheeger constant report of the subword digraph as JSON.
#[pyfunction]
#[pyo3(signature = (level, rank = 2, seed = 0))]
fn cheeger(level: usize, rank: usize, seed: u64) -> PyResult<String> {
    let g = build_digraph(&alphabet(rank)?, level).map_err(py_err)?;
    Ok(cheeger_constant(&g, seed).to_json())
}

/// Runs an experiment config (JSON) into `out`; returns the manifest JSON.
#[pyfunction]
fn run_experiment(py: Python<'_>, config: &str, out: &str) -> PyResult<String> {
    let cfg: ExperimentConfig = serde_json_from(config)?;
    let m = py.detach(|| experiments::run(&cfg, Path::new(out))).map_err(py_err)?;
    Ok(m.to_json())
}

fn serde_json_from(text: &str) -> PyResult<ExperimentConfig> {
    experiments::RunManifest::from_json(text)
        .map(|m| m.config)
        .or_else(|_| experiments::parse_config(text))
        .map_err(py_err)
}

#[pymodule(name = "sclab")]
fn sclab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Word>()?;
    m.add_class::<SclResult>()?;
    m.add_function(wrap_pyfunction!(scl, m)?)?;
    m.add_function(wrap_pyfunction!(random_word, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(tripod_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(spectra, m)?)?;
    m.add_function(wrap_pyfunction!(cheeger, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
