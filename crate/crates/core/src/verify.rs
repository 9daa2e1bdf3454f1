//! Built-in self checks: golden tables, the move algebra and scorer/oracle
//! agreement. Every check is seeded, so repeated runs print the same summary.

use std::fmt;

use num_bigint::BigUint;
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cubeset::{decompose_transposition, CubeSet, MoveTable, SLOTS};
use crate::dictionary::{
    allocate_repetitions, build_base_permutation, reference_frequencies, Dictionary,
};
use crate::scorer::{brute_force_score, score};

pub const REFERENCE_BASE: &str = "eeeaarroottiissllnnudcpmhygbfwkvzxjq";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {:<22} {}", c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

/// Runs every check against the canonical move table.
pub fn run_all() -> VerifySummary {
    run_with_move_table(MoveTable::canonical())
}

/// Runs every check, validating decompositions against `table`.
pub fn run_with_move_table(table: &MoveTable) -> VerifySummary {
    let mut summary = VerifySummary::default();
    summary.push("repetition_table", check_repetitions());
    summary.push("base_permutation", check_base_permutation());
    summary.push("search_space", check_search_space());
    summary.push("move_table", check_move_table(table));
    summary.push("decomposition", check_decompositions(table));
    summary.push("oracle_equivalence", check_oracle(40, 150, 0x5eed));
    summary
}

fn check_repetitions() -> Result<String, String> {
    let plan = allocate_repetitions(&reference_frequencies(), 6).map_err(|e| e.to_string())?;
    let wrong: Vec<String> = ('a'..='z')
        .filter_map(|c| {
            let expected = match c {
                'e' => 3,
                'a' | 'r' | 'o' | 't' | 'i' | 's' | 'l' | 'n' => 2,
                _ => 1,
            };
            (plan.get(c) != expected).then(|| format!("{c}={} (want {expected})", plan.get(c)))
        })
        .collect();
    if wrong.is_empty() {
        Ok("six-cube column matches".into())
    } else {
        Err(wrong.join(", "))
    }
}

fn check_base_permutation() -> Result<String, String> {
    let freq = reference_frequencies();
    let plan = allocate_repetitions(&freq, 6).map_err(|e| e.to_string())?;
    let base = build_base_permutation(&plan, &freq).map_err(|e| e.to_string())?;
    if base.as_str() == REFERENCE_BASE {
        Ok(base.to_string())
    } else {
        Err(format!("got {base}, want {REFERENCE_BASE}"))
    }
}

/// `|size - 2.42183155e38| / size < 1e-8`, in exact integer arithmetic.
pub fn search_space_matches_reference(size: &BigUint) -> bool {
    let reference = BigUint::from(242_183_155u64) * BigUint::from(10u32).pow(30);
    let diff = if *size > reference {
        size - &reference
    } else {
        &reference - size
    };
    diff * BigUint::from(100_000_000u32) < *size
}

fn check_search_space() -> Result<String, String> {
    let plan = allocate_repetitions(&reference_frequencies(), 6).map_err(|e| e.to_string())?;
    let size = crate::cubeset::search_space_size(&plan);
    if search_space_matches_reference(&size) {
        Ok(size.to_string())
    } else {
        Err(format!("{size} is not within 1e-8 of 2.42183155e38"))
    }
}

fn check_move_table(table: &MoveTable) -> Result<String, String> {
    let moves = table.moves();
    let unique: std::collections::HashSet<_> = moves.iter().collect();
    let illegal = moves.iter().filter(|m| !m.is_legal()).count();
    if moves.len() == 180 && unique.len() == 180 && illegal == 0 {
        Ok("180 distinct legal moves".into())
    } else {
        Err(format!(
            "{} moves, {} distinct, {illegal} illegal",
            moves.len(),
            unique.len()
        ))
    }
}

fn check_decompositions(table: &MoveTable) -> Result<String, String> {
    let mut labels_base = [0usize; SLOTS];
    for (i, l) in labels_base.iter_mut().enumerate() {
        *l = i;
    }
    let mut failures = Vec::new();
    let mut pairs = 0;
    for i in 0..SLOTS {
        for j in i + 1..SLOTS {
            pairs += 1;
            let moves = match decompose_transposition(i, j) {
                Ok(m) => m,
                Err(e) => {
                    failures.push(format!("({i},{j}): {e}"));
                    continue;
                }
            };
            if moves.len() > 3 || moves.iter().any(|m| !table.contains(m)) {
                failures.push(format!("({i},{j}): uses moves outside the table"));
                continue;
            }
            let mut labels = labels_base;
            for m in &moves {
                let (a, b) = m.slots();
                labels.swap(a, b);
            }
            let mut expected = labels_base;
            expected.swap(i, j);
            if labels != expected {
                failures.push(format!("({i},{j}): composition differs"));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{pairs} pairs, each within 3 legal moves"))
    } else {
        Err(format!(
            "{} of {pairs} pairs failed, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn check_oracle(sets: usize, words: usize, seed: u64) -> Result<String, String> {
    let dict = synthetic_dictionary(seed, words, 1, 4);
    let base: CubeSet = REFERENCE_BASE.parse().expect("reference base parses");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..sets {
        let cs = random_cube_set(&base, &mut rng);
        let fast = score(&cs, &dict);
        let slow = brute_force_score(&cs, &dict);
        if fast != slow {
            return Err(format!("set {k} {cs}: scorer {fast}, oracle {slow}"));
        }
    }
    Ok(format!("{sets} sets x {} words agree", dict.len()))
}

/// A uniformly shuffled copy of `base`.
pub fn random_cube_set(base: &CubeSet, rng: &mut impl Rng) -> CubeSet {
    let mut faces = *base.faces();
    faces.shuffle(rng);
    CubeSet::from_bytes(&faces).expect("shuffle keeps letters")
}

/// Seeded pseudo-words with letters drawn by the reference frequencies and
/// lengths uniform in `min_len..=max_len`. Returns exactly `count` distinct
/// words when that many exist.
pub fn synthetic_dictionary(seed: u64, count: usize, min_len: usize, max_len: usize) -> Dictionary {
    let freq = reference_frequencies();
    let letters: Vec<char> = ('a'..='z').collect();
    let weights: Vec<u32> = letters.iter().map(|&c| freq.thousandths(c)).collect();
    let pick = WeightedIndex::new(&weights).expect("weights are positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = std::collections::BTreeSet::new();
    let capacity: usize = (min_len..=max_len)
        .map(|l| 26usize.saturating_pow(l as u32))
        .sum();
    while words.len() < count.min(capacity) {
        let len = rng.random_range(min_len..=max_len);
        let w: String = (0..len).map(|_| letters[pick.sample(&mut rng)]).collect();
        words.insert(w);
    }
    Dictionary::from_words(words).expect("generated words are valid")
}
