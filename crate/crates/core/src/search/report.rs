use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::config::SearchConfig;
use crate::cubeset::CubeSet;
use crate::scorer::{ScoreTriple, Target};

/// Where a permutation was first evaluated: generation and evaluation ordinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub generation: u64,
    /// 1-based position in the run's sequence of evaluations.
    pub ordinal: u64,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}-P{}", self.generation, self.ordinal)
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || format!("malformed provenance {s:?}, expected G<g>-P<p>");
        let (g, p) = s.split_once('-').ok_or_else(err)?;
        let generation = g
            .strip_prefix('G')
            .and_then(|v| v.parse().ok())
            .ok_or_else(err)?;
        let ordinal = p
            .strip_prefix('P')
            .and_then(|v| v.parse().ok())
            .ok_or_else(err)?;
        Ok(Provenance {
            generation,
            ordinal,
        })
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Provenance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// One row of a results table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub permutation: CubeSet,
    #[serde(flatten)]
    pub score: ScoreTriple,
    pub found_at: Provenance,
}

impl Entry {
    fn beats(&self, other: &Entry, target: Target) -> bool {
        let (a, b) = (self.score.get(target), other.score.get(target));
        a > b || (a == b && self.found_at.ordinal < other.found_at.ordinal)
    }
}

/// Best entry for each of the three targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestByTarget {
    pub mono: Entry,
    pub rainbow: Entry,
    pub sum: Entry,
}

impl BestByTarget {
    pub fn get(&self, target: Target) -> &Entry {
        match target {
            Target::Mono => &self.mono,
            Target::Rainbow => &self.rainbow,
            Target::Sum => &self.sum,
        }
    }
}

/// Highest-scoring distinct permutations per target, best first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopTables {
    pub mono: Vec<Entry>,
    pub rainbow: Vec<Entry>,
    pub sum: Vec<Entry>,
}

impl TopTables {
    pub fn get(&self, target: Target) -> &[Entry] {
        match target {
            Target::Mono => &self.mono,
            Target::Rainbow => &self.rainbow,
            Target::Sum => &self.sum,
        }
    }

    fn get_mut(&mut self, target: Target) -> &mut Vec<Entry> {
        match target {
            Target::Mono => &mut self.mono,
            Target::Rainbow => &mut self.rainbow,
            Target::Sum => &mut self.sum,
        }
    }
}

/// Best-so-far values after a number of evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressPoint {
    pub evaluations: u64,
    pub best_mono: u32,
    pub best_rainbow: u32,
    pub best_sum: u32,
}

impl ProgressPoint {
    pub fn get(&self, target: Target) -> u32 {
        match target {
            Target::Mono => self.best_mono,
            Target::Rainbow => self.best_rainbow,
            Target::Sum => self.best_sum,
        }
    }
}

/// Receives progress points as a run advances.
pub trait ProgressSink {
    fn update(&mut self, point: &ProgressPoint);
}

impl ProgressSink for () {
    fn update(&mut self, _: &ProgressPoint) {}
}

impl<F: FnMut(&ProgressPoint)> ProgressSink for F {
    fn update(&mut self, point: &ProgressPoint) {
        self(point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The configured budget was reached.
    Budget,
    /// All configured generations ran.
    Generations,
    /// Constrained greedy found no child at least as good as its parent.
    LocalMaximum,
    /// The node to expand had no unvisited children, or the queue ran dry.
    Exhausted,
}

/// Algorithm-specific counters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunDetails {
    Random,
    Anneal {
        final_temperature: f64,
        accepted: u64,
        accepted_worse: u64,
        rejected: u64,
    },
    Tree {
        expansions: u64,
        final_parent: Entry,
    },
    Genetic {
        generations_run: u64,
        final_best_of_generation: Entry,
    },
}

/// Outcome of one search run. Holds nothing time-dependent, so identical
/// inputs serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub algorithm: String,
    pub config: SearchConfig,
    pub evaluations: u64,
    pub unique_permutations: u64,
    pub stop_reason: StopReason,
    pub best: BestByTarget,
    pub top: TopTables,
    pub history: Vec<ProgressPoint>,
    pub details: RunDetails,
}

impl SearchReport {
    /// The best entry for the configured target.
    pub fn best_for_target(&self) -> &Entry {
        self.best.get(self.config.target)
    }
}

/// Shared bookkeeping: evaluation ordinals, unique permutations, per-target
/// bests and top-k tables, and the progress stream.
pub(crate) struct Tracker<'s> {
    top_k: usize,
    interval: u64,
    evaluations: u64,
    unique: HashSet<CubeSet>,
    best: Option<BestByTarget>,
    top: TopTables,
    history: Vec<ProgressPoint>,
    sink: &'s mut dyn ProgressSink,
}

impl<'s> Tracker<'s> {
    pub fn new(config: &SearchConfig, sink: &'s mut dyn ProgressSink) -> Self {
        Tracker {
            top_k: config.top_k,
            interval: config.progress_interval,
            evaluations: 0,
            unique: HashSet::new(),
            best: None,
            top: TopTables::default(),
            history: Vec::new(),
            sink,
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn unique(&self) -> u64 {
        self.unique.len() as u64
    }

    /// Ordinal the next recorded evaluation will receive.
    pub fn next_ordinal(&self) -> u64 {
        self.evaluations + 1
    }

    pub fn record(&mut self, permutation: CubeSet, score: ScoreTriple, generation: u64) -> Entry {
        self.evaluations += 1;
        self.unique.insert(permutation);
        let entry = Entry {
            permutation,
            score,
            found_at: Provenance {
                generation,
                ordinal: self.evaluations,
            },
        };
        match &mut self.best {
            None => {
                self.best = Some(BestByTarget {
                    mono: entry,
                    rainbow: entry,
                    sum: entry,
                })
            }
            Some(best) => {
                for (slot, target) in [
                    (&mut best.mono, Target::Mono),
                    (&mut best.rainbow, Target::Rainbow),
                    (&mut best.sum, Target::Sum),
                ] {
                    if score.get(target) > slot.score.get(target) {
                        *slot = entry;
                    }
                }
            }
        }
        for target in Target::ALL {
            let k = self.top_k;
            insert_top(self.top.get_mut(target), entry, target, k);
        }
        if self.evaluations.is_multiple_of(self.interval) {
            self.emit();
        }
        entry
    }

    fn emit(&mut self) {
        let Some(best) = &self.best else { return };
        let point = ProgressPoint {
            evaluations: self.evaluations,
            best_mono: best.mono.score.mono,
            best_rainbow: best.rainbow.score.rainbow,
            best_sum: best.sum.score.sum,
        };
        if self.history.last() != Some(&point) {
            self.history.push(point);
            self.sink.update(&point);
        }
    }

    pub fn finish(
        mut self,
        config: &SearchConfig,
        stop_reason: StopReason,
        details: RunDetails,
    ) -> SearchReport {
        self.emit();
        SearchReport {
            algorithm: config.algorithm.label().to_string(),
            config: config.clone(),
            evaluations: self.evaluations,
            unique_permutations: self.unique.len() as u64,
            stop_reason,
            best: self
                .best
                .expect("every search evaluates its starting point"),
            top: self.top,
            history: self.history,
            details,
        }
    }
}

fn insert_top(table: &mut Vec<Entry>, entry: Entry, target: Target, k: usize) {
    if k == 0 || table.iter().any(|e| e.permutation == entry.permutation) {
        return;
    }
    if table.len() == k && !entry.beats(table.last().unwrap(), target) {
        return;
    }
    let pos = table
        .iter()
        .position(|e| entry.beats(e, target))
        .unwrap_or(table.len());
    table.insert(pos, entry);
    table.truncate(k);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_text_form() {
        let p = Provenance {
            generation: 652,
            ordinal: 114941,
        };
        assert_eq!(p.to_string(), "G652-P114941");
        assert_eq!("G652-P114941".parse::<Provenance>(), Ok(p));
        assert!("652-114941".parse::<Provenance>().is_err());
    }

    #[test]
    fn top_table_keeps_distinct_best() {
        let cs = |s: &str| s.repeat(36).parse::<CubeSet>().unwrap();
        let e = |s: &str, sum: u32, ordinal| Entry {
            permutation: cs(s),
            score: ScoreTriple::new(0, sum),
            found_at: Provenance {
                generation: 0,
                ordinal,
            },
        };
        let mut table = Vec::new();
        insert_top(&mut table, e("a", 5, 1), Target::Sum, 2);
        insert_top(&mut table, e("b", 7, 2), Target::Sum, 2);
        insert_top(&mut table, e("a", 9, 3), Target::Sum, 2);
        insert_top(&mut table, e("c", 5, 4), Target::Sum, 2);
        insert_top(&mut table, e("d", 6, 5), Target::Sum, 2);
        let got: Vec<_> = table
            .iter()
            .map(|e| (e.permutation.letter(0), e.score.sum))
            .collect();
        assert_eq!(got, vec![(b'b', 7), (b'd', 6)]);
    }
}
