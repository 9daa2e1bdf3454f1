//! Python bindings: layouts, dictionaries, scoring, the move algebra and
//! seeded searches returning JSON run records.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;

use num_bigint::BigUint;
use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;

use letterblocks::manifest::RunManifest;
use letterblocks::search::{Algorithm, AnnealParams, GeneticParams, SearchInputs, TreeVariant};
use letterblocks::{self as lb, FrequencyTable, SearchConfig, Target};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Six cubes of six faces as a 36-letter string; slot i is cube i // 6, color i % 6.
#[pyclass(
    name = "CubeSet",
    module = "pyletterblocks",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyCubeSet(lb::CubeSet);

#[pymethods]
impl PyCubeSet {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyCubeSet).map_err(value_err)
    }

    /// The canonical frequency-ordered layout.
    #[staticmethod]
    fn base() -> Self {
        PyCubeSet(lb::reference_base_permutation())
    }

    #[staticmethod]
    fn seed2k() -> Self {
        PyCubeSet(lb::SEED2K.parse().expect("constant layout parses"))
    }

    fn letter(&self, slot: usize) -> PyResult<char> {
        if slot >= 36 {
            return Err(PyIndexError::new_err(format!("slot {slot} out of range")));
        }
        Ok(self.0.letter(slot) as char)
    }

    fn cube(&self, cube: usize) -> PyResult<String> {
        if cube >= 6 {
            return Err(PyIndexError::new_err(format!("cube {cube} out of range")));
        }
        Ok(String::from_utf8_lossy(self.0.cube(cube)).into_owned())
    }

    fn missing_letters(&self) -> Vec<char> {
        self.0.missing_letters()
    }

    /// Returns a copy with slots `i` and `j` exchanged; the pair must be a legal move.
    fn apply_move(&self, i: usize, j: usize) -> PyResult<Self> {
        let m = lb::Move::new(i, j).map_err(value_err)?;
        if !m.is_legal() {
            return Err(PyValueError::new_err(format!(
                "({i}, {j}) is neither same-cube nor same-color"
            )));
        }
        Ok(PyCubeSet(lb::apply_move(&self.0, m)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CubeSet('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        36
    }
}

#[pyclass(name = "Dictionary", module = "pyletterblocks", frozen)]
struct PyDictionary(lb::Dictionary);

#[pymethods]
impl PyDictionary {
    #[new]
    fn new(words: Vec<String>) -> PyResult<Self> {
        lb::Dictionary::from_words(words)
            .map(PyDictionary)
            .map_err(value_err)
    }

    /// Reads a one-word-per-line file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        lb::Dictionary::read_from(BufReader::new(file))
            .map(PyDictionary)
            .map_err(value_err)
    }

    /// Filters `(word, rating)` pairs the way `letterblocks ingest` does.
    #[staticmethod]
    #[pyo3(signature = (records, max_aoa = 14.0, min_len = 1, max_len = 6))]
    fn ingest(
        records: Vec<(String, f64)>,
        max_aoa: f64,
        min_len: usize,
        max_len: usize,
    ) -> PyResult<Self> {
        let config = lb::IngestConfig {
            max_aoa,
            min_len,
            max_len,
        };
        lb::ingest_word_list(&records, &config)
            .map(PyDictionary)
            .map_err(value_err)
    }

    fn words(&self) -> Vec<String> {
        self.0.iter().map(str::to_string).collect()
    }

    /// SHA-256 of the normalized word list.
    fn fingerprint(&self) -> String {
        self.0.fingerprint()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, word: &str) -> bool {
        self.0.contains(word)
    }
}

#[pyclass(
    name = "ScoreTriple",
    module = "pyletterblocks",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, Copy, PartialEq)]
struct PyScoreTriple(lb::ScoreTriple);

#[pymethods]
impl PyScoreTriple {
    #[getter]
    fn mono(&self) -> u32 {
        self.0.mono
    }

    #[getter]
    fn rainbow(&self) -> u32 {
        self.0.rainbow
    }

    #[getter]
    fn sum(&self) -> u32 {
        self.0.sum
    }

    fn __repr__(&self) -> String {
        format!(
            "ScoreTriple(mono={}, rainbow={}, sum={})",
            self.0.mono, self.0.rainbow, self.0.sum
        )
    }
}

#[pyfunction]
fn score(cube_set: &PyCubeSet, dictionary: &PyDictionary) -> PyScoreTriple {
    PyScoreTriple(lb::score(&cube_set.0, &dictionary.0))
}

/// Exhaustive-enumeration reference scorer; slow, for cross-checking.
#[pyfunction]
fn brute_force_score(cube_set: &PyCubeSet, dictionary: &PyDictionary) -> PyScoreTriple {
    PyScoreTriple(lb::brute_force_score(&cube_set.0, &dictionary.0))
}

/// `(mono_words, rainbow_words)`.
#[pyfunction]
fn word_report(cube_set: &PyCubeSet, dictionary: &PyDictionary) -> (Vec<String>, Vec<String>) {
    let r = lb::word_report(&cube_set.0, &dictionary.0);
    (r.mono, r.rainbow)
}

#[pyfunction]
fn face_location(index: usize) -> PyResult<(usize, usize)> {
    lb::face_location(index).map_err(|e| PyIndexError::new_err(e.to_string()))
}

/// The 180 legal moves in canonical order.
#[pyfunction]
fn legal_moves() -> Vec<(usize, usize)> {
    lb::legal_moves()
        .moves()
        .iter()
        .map(|m| m.slots())
        .collect()
}

#[pyfunction]
fn decompose_transposition(i: usize, j: usize) -> PyResult<Vec<(usize, usize)>> {
    let moves = lb::decompose_transposition(i, j).map_err(value_err)?;
    Ok(moves.iter().map(|m| m.slots()).collect())
}

fn frequencies_for(dictionary: Option<&PyDictionary>) -> PyResult<FrequencyTable> {
    match dictionary {
        Some(d) => lb::letter_frequencies(&d.0).map_err(value_err),
        None => Ok(lb::reference_frequencies()),
    }
}

/// Letter shares in thousandths, from `dictionary` or the reference table.
#[pyfunction]
#[pyo3(signature = (dictionary = None))]
fn letter_frequencies(dictionary: Option<&PyDictionary>) -> PyResult<BTreeMap<char, u32>> {
    let freq = frequencies_for(dictionary)?;
    Ok(('a'..='z').map(|c| (c, freq.thousandths(c))).collect())
}

#[pyfunction]
#[pyo3(signature = (cubes = 6, dictionary = None))]
fn allocate_repetitions(
    cubes: usize,
    dictionary: Option<&PyDictionary>,
) -> PyResult<BTreeMap<char, u32>> {
    let plan = lb::allocate_repetitions(&frequencies_for(dictionary)?, cubes).map_err(value_err)?;
    Ok(plan.counts().clone())
}

#[pyfunction]
#[pyo3(signature = (dictionary = None))]
fn base_permutation(dictionary: Option<&PyDictionary>) -> PyResult<PyCubeSet> {
    let freq = frequencies_for(dictionary)?;
    let plan = lb::allocate_repetitions(&freq, 6).map_err(value_err)?;
    lb::build_base_permutation(&plan, &freq)
        .map(PyCubeSet)
        .map_err(value_err)
}

/// Distinct layouts of the repetition plan for `cubes` cubes.
#[pyfunction]
#[pyo3(signature = (cubes = 6, dictionary = None))]
fn search_space_size(cubes: usize, dictionary: Option<&PyDictionary>) -> PyResult<BigUint> {
    let plan = lb::allocate_repetitions(&frequencies_for(dictionary)?, cubes).map_err(value_err)?;
    Ok(lb::search_space_size(&plan))
}

/// Runs a seeded search and returns the run record as JSON.
///
/// `algorithm` is one of random, anneal, tree or genetic. `root` starts
/// anneal and tree runs (default: `base`).
#[pyfunction]
#[pyo3(signature = (
    dictionary, algorithm, seed, budget, target = "sum", *, base = None, root = None,
    variant = "constrained_greedy", t0 = 1000.0, cooling = 0.999, generations = None,
    top_k = 10, progress_every = 1000
))]
#[allow(clippy::too_many_arguments)]
fn run_search(
    py: Python<'_>,
    dictionary: &PyDictionary,
    algorithm: &str,
    seed: u64,
    budget: u64,
    target: &str,
    base: Option<&PyCubeSet>,
    root: Option<&PyCubeSet>,
    variant: &str,
    t0: f64,
    cooling: f64,
    generations: Option<u64>,
    top_k: usize,
    progress_every: u64,
) -> PyResult<String> {
    let algorithm = match algorithm {
        "random" => Algorithm::Random,
        "anneal" => Algorithm::Anneal(AnnealParams { t0, cooling }),
        "tree" => Algorithm::Tree {
            variant: variant
                .parse::<TreeVariant>()
                .map_err(PyValueError::new_err)?,
        },
        "genetic" => {
            let d = GeneticParams::default();
            Algorithm::Genetic(GeneticParams {
                generations: generations.unwrap_or(d.generations),
                ..d
            })
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown algorithm {other:?}"
            )))
        }
    };
    let target: Target = target.parse().map_err(PyValueError::new_err)?;
    let mut config = SearchConfig::new(algorithm, target, budget, seed);
    config.top_k = top_k;
    config.progress_interval = progress_every;
    let mut inputs = SearchInputs::new(base.map_or_else(lb::reference_base_permutation, |b| b.0));
    inputs.root = root.map(|r| r.0);
    let manifest = RunManifest::new(config, inputs, &dictionary.0);
    let dict = &dictionary.0;
    let record = py
        .detach(|| manifest.execute(dict, &mut ()))
        .map_err(value_err)?;
    Ok(record.to_json())
}

/// Runs the built-in self checks; returns `(all_passed, summary_text)`.
#[pyfunction]
fn verify() -> (bool, String) {
    let summary = lb::verify::run_all();
    (summary.all_passed(), summary.to_string())
}

#[pymodule]
fn pyletterblocks(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCubeSet>()?;
    m.add_class::<PyDictionary>()?;
    m.add_class::<PyScoreTriple>()?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_score, m)?)?;
    m.add_function(wrap_pyfunction!(word_report, m)?)?;
    m.add_function(wrap_pyfunction!(face_location, m)?)?;
    m.add_function(wrap_pyfunction!(legal_moves, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_transposition, m)?)?;
    m.add_function(wrap_pyfunction!(letter_frequencies, m)?)?;
    m.add_function(wrap_pyfunction!(allocate_repetitions, m)?)?;
    m.add_function(wrap_pyfunction!(base_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(search_space_size, m)?)?;
    m.add_function(wrap_pyfunction!(run_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
