use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::scorer::Target;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeVariant {
    /// Follow the best child only while it is at least as good as its parent.
    ConstrainedGreedy,
    /// Expand the highest-scoring unexpanded node from any generation.
    BestFirst,
    /// Follow the best child unconditionally.
    Greedy,
}

impl std::str::FromStr for TreeVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "constrained_greedy" => Ok(TreeVariant::ConstrainedGreedy),
            "best_first" => Ok(TreeVariant::BestFirst),
            "greedy" => Ok(TreeVariant::Greedy),
            other => Err(format!(
                "unknown tree variant {other:?} (expected constrained_greedy, best_first or greedy)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    /// Starting temperature.
    pub t0: f64,
    /// Multiplier applied to the temperature after every iteration.
    pub cooling: f64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            t0: 1000.0,
            cooling: 0.999,
        }
    }
}

/// Sub-population sizes of each genetic generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneticParams {
    /// Generations including the initial one (indexed `0..generations`).
    pub generations: u64,
    pub elites: usize,
    /// Children of two distinct elites.
    pub crossed_elite: usize,
    /// Children of one elite and one non-elite.
    pub crossed_mixed: usize,
    /// Mutated copies of the top elites, cycling through elite ranks.
    pub mutated: usize,
    /// Fresh shuffles of the base permutation.
    pub random: usize,
    /// Restore missing letters after every crossover.
    pub repair: bool,
}

impl GeneticParams {
    pub fn population(&self) -> usize {
        self.elites + self.crossed_elite + self.crossed_mixed + self.mutated + self.random
    }
}

impl Default for GeneticParams {
    fn default() -> Self {
        GeneticParams {
            generations: 1000,
            elites: 40,
            crossed_elite: 13,
            crossed_mixed: 27,
            mutated: 10,
            random: 10,
            repair: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Algorithm {
    Random,
    Anneal(AnnealParams),
    Tree { variant: TreeVariant },
    Genetic(GeneticParams),
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::Anneal(_) => "anneal",
            Algorithm::Tree {
                variant: TreeVariant::ConstrainedGreedy,
            } => "tree/constrained_greedy",
            Algorithm::Tree {
                variant: TreeVariant::BestFirst,
            } => "tree/best_first",
            Algorithm::Tree {
                variant: TreeVariant::Greedy,
            } => "tree/greedy",
            Algorithm::Genetic(_) => "genetic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub target: Target,
    /// Random: shuffles. Anneal: iterations. Tree: unique permutations,
    /// checked at generation boundaries. Genetic: evaluation cap, checked
    /// at generation boundaries.
    pub budget: u64,
    pub seed: u64,
    /// Rows kept in each top-k table.
    pub top_k: usize,
    /// Evaluations between progress points.
    pub progress_interval: u64,
}

impl SearchConfig {
    pub fn new(algorithm: Algorithm, target: Target, budget: u64, seed: u64) -> Self {
        SearchConfig {
            algorithm,
            target,
            budget,
            seed,
            top_k: 10,
            progress_interval: 1000,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: &str| Err(SearchError::InvalidConfig(msg.to_string()));
        if self.budget == 0 {
            return bad("budget must be positive");
        }
        if self.progress_interval == 0 {
            return bad("progress_interval must be positive");
        }
        match self.algorithm {
            Algorithm::Anneal(AnnealParams { t0, cooling }) => {
                if !(t0.is_finite() && t0 > 0.0) {
                    return bad("t0 must be a positive number");
                }
                if !(cooling > 0.0 && cooling < 1.0) {
                    return bad("cooling must lie strictly between 0 and 1");
                }
            }
            Algorithm::Genetic(g) => {
                if g.generations == 0 {
                    return bad("generations must be positive");
                }
                if g.population() == 0 {
                    return bad("population is empty");
                }
                if g.crossed_elite > 0 && g.elites < 2 {
                    return bad("crossed_elite needs at least 2 elites");
                }
                if g.crossed_mixed > 0 && (g.elites == 0 || g.elites == g.population()) {
                    return bad("crossed_mixed needs at least one elite and one non-elite");
                }
                if g.mutated > 0 && g.elites == 0 {
                    return bad("mutated needs at least one elite");
                }
            }
            Algorithm::Random | Algorithm::Tree { .. } => {}
        }
        Ok(())
    }
}
