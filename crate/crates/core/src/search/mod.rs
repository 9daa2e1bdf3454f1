//! Optimizers over cube-set space: random shuffles, simulated annealing,
//! three tree searches over the legal-move graph and a genetic algorithm.
//!
//! Every run is driven by one seed. Each randomized component draws from its
//! own ChaCha stream derived from that seed, and scores computed in parallel
//! are folded back in a fixed order, so a `(config, inputs, dictionary)`
//! triple always yields the same report.

mod anneal;
mod config;
mod genetic;
mod random;
mod report;
mod tree;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubeset::{CubeSet, CubeSetError};
use crate::dictionary::Dictionary;
use crate::scorer::{score, ScoreTriple};

pub use anneal::{simulated_annealing, temperature_after};
pub use config::{Algorithm, AnnealParams, GeneticParams, SearchConfig, TreeVariant};
pub use genetic::{crossover, crossover_with_mask, genetic_search, mutate, repair, Parent};
pub use random::random_search;
pub use report::{
    BestByTarget, Entry, ProgressPoint, ProgressSink, Provenance, RunDetails, SearchReport,
    StopReason, TopTables,
};
pub use tree::{expand_children, tree_search, Child};

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error("config is for {expected} but {got} was requested")]
    WrongAlgorithm {
        expected: &'static str,
        got: &'static str,
    },
    #[error("{seeds} scenario seeds exceed the population of {population}")]
    TooManySeeds { seeds: usize, population: usize },
    #[error("cannot restore {missing} missing letters with {duplicates} duplicate faces")]
    RepairImpossible { missing: usize, duplicates: usize },
    #[error(transparent)]
    CubeSet(#[from] CubeSetError),
}

/// Independent random streams carved from a run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Shuffle = 1,
    Neighbor = 2,
    Accept = 3,
    Selection = 4,
    Crossover = 5,
    Mutation = 6,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Uniform Fisher-Yates shuffle of the base letters.
pub fn shuffle(base: &CubeSet, rng: &mut ChaCha8Rng) -> CubeSet {
    let mut faces = *base.faces();
    faces.shuffle(rng);
    CubeSet::from_bytes(&faces).expect("shuffle preserves letters")
}

/// Scores a batch in parallel; output order matches input order.
pub(crate) fn score_batch(batch: &[CubeSet], dict: &Dictionary) -> Vec<ScoreTriple> {
    batch.par_iter().map(|cs| score(cs, dict)).collect()
}

/// Starting material for a run. Which fields matter depends on the algorithm:
/// random and genetic shuffle `base`, annealing and tree search start from
/// `root` (falling back to `base`), and genetic seeds its first generation
/// with `scenario_seeds`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchInputs {
    pub base: CubeSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<CubeSet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scenario_seeds: Vec<CubeSet>,
}

impl SearchInputs {
    pub fn new(base: CubeSet) -> Self {
        SearchInputs {
            base,
            root: None,
            scenario_seeds: Vec::new(),
        }
    }

    pub fn start(&self) -> &CubeSet {
        self.root.as_ref().unwrap_or(&self.base)
    }
}

/// Runs whichever algorithm the config names.
pub fn run(
    config: &SearchConfig,
    dict: &Dictionary,
    inputs: &SearchInputs,
    sink: &mut dyn ProgressSink,
) -> Result<SearchReport, SearchError> {
    match config.algorithm {
        Algorithm::Random => random_search(config, dict, &inputs.base, sink),
        Algorithm::Anneal(_) => simulated_annealing(config, dict, inputs.start(), sink),
        Algorithm::Tree { .. } => tree_search(config, dict, inputs.start(), sink),
        Algorithm::Genetic(_) => {
            genetic_search(config, dict, &inputs.base, &inputs.scenario_seeds, sink)
        }
    }
}
