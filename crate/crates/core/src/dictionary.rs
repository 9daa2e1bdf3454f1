//! Word list preparation: ingestion filters, letter frequencies, the
//! allocation of spare faces to frequent letters and the base permutation.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cubeset::{CubeSet, ALPHABET, COLORS, SLOTS};

pub const MAX_WORD_LEN: usize = 6;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("no words survived filtering ({0} input records)")]
    EmptyAfterFiltering(usize),
    #[error("dictionary is empty")]
    Empty,
    #[error("invalid word {word:?}: {reason}")]
    InvalidWord { word: String, reason: &'static str },
    #[error("{cube_count} cubes give {} faces, fewer than the 26 letters", cube_count * COLORS)]
    InfeasibleAlphabet { cube_count: usize },
    #[error("invalid frequency table: {0}")]
    InvalidFrequencyTable(String),
    #[error("invalid repetition plan: {0}")]
    InvalidPlan(String),
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One row of the rated source list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordRecord {
    pub text: String,
    pub aoa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// Inclusive age-of-acquisition ceiling, in years.
    pub max_aoa: f64,
    pub min_len: usize,
    /// Capped at six, the number of cubes.
    pub max_len: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            max_aoa: 14.0,
            min_len: 1,
            max_len: MAX_WORD_LEN,
        }
    }
}

/// Record counts removed by each filter, in the order the filters run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub input_records: usize,
    pub dropped_non_alphabetic: usize,
    pub dropped_acronym: usize,
    pub dropped_rating: usize,
    pub dropped_length: usize,
    pub dropped_duplicate: usize,
    pub retained: usize,
    /// Distinct words that would survive if the acronym filter were off.
    pub retained_without_acronym_filter: usize,
}

/// Treats an all-uppercase token of two or more letters as an acronym.
/// Single capitals such as "I" and "A" are ordinary words.
fn looks_like_acronym(text: &str) -> bool {
    text.len() >= 2 && text.bytes().all(|b| b.is_ascii_uppercase())
}

/// Filters, lowercases and deduplicates rated words.
pub fn ingest_word_list<S: AsRef<str>>(
    records: &[(S, f64)],
    config: &IngestConfig,
) -> Result<Dictionary, DictionaryError> {
    ingest_with_summary(records, config).map(|(dict, _)| dict)
}

pub fn ingest_with_summary<S: AsRef<str>>(
    records: &[(S, f64)],
    config: &IngestConfig,
) -> Result<(Dictionary, IngestSummary), DictionaryError> {
    let mut summary = IngestSummary {
        input_records: records.len(),
        ..Default::default()
    };
    let mut kept = BTreeSet::new();
    let mut kept_with_acronyms = BTreeSet::new();

    for (raw, aoa) in records {
        let text = raw.as_ref().trim();
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_alphabetic()) {
            summary.dropped_non_alphabetic += 1;
            continue;
        }
        let acronym = looks_like_acronym(text);
        let rating_ok = aoa.is_finite() && *aoa >= 0.0 && *aoa <= config.max_aoa;
        let len_ok = (config.min_len..=config.max_len.min(MAX_WORD_LEN)).contains(&text.len());
        let lower = text.to_ascii_lowercase();
        if rating_ok && len_ok {
            kept_with_acronyms.insert(lower.clone());
        }
        if acronym {
            summary.dropped_acronym += 1;
        } else if !rating_ok {
            summary.dropped_rating += 1;
        } else if !len_ok {
            summary.dropped_length += 1;
        } else if !kept.insert(lower) {
            summary.dropped_duplicate += 1;
        }
    }

    summary.retained = kept.len();
    summary.retained_without_acronym_filter = kept_with_acronyms.len();
    if kept.is_empty() {
        return Err(DictionaryError::EmptyAfterFiltering(records.len()));
    }
    let dict = Dictionary::from_words(kept)?;
    Ok((dict, summary))
}

/// Column layout of a delimited rated word list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelimitedFormat {
    pub delimiter: u8,
    pub word_column: String,
    pub rating_column: String,
}

impl Default for DelimitedFormat {
    fn default() -> Self {
        DelimitedFormat {
            delimiter: b',',
            word_column: "word".to_string(),
            rating_column: "rating".to_string(),
        }
    }
}

/// Reads `(word, rating)` pairs from a delimited file with a header row.
/// Column names match case-insensitively. Unparseable ratings become NaN and
/// are later rejected by the rating filter.
pub fn read_rated_words<R: Read>(
    reader: R,
    format: &DelimitedFormat,
) -> Result<Vec<(String, f64)>, DictionaryError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| DictionaryError::MissingColumn(name.to_string()))
    };
    let word_idx = find(&format.word_column)?;
    let rating_idx = find(&format.rating_column)?;

    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let word = row.get(word_idx).unwrap_or("").to_string();
        let rating = row
            .get(rating_idx)
            .and_then(|r| r.trim().parse::<f64>().ok())
            .unwrap_or(f64::NAN);
        out.push((word, rating));
    }
    Ok(out)
}

/// A lowercase word of at most six letters, pre-encoded as alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    text: String,
    letters: [u8; MAX_WORD_LEN],
    len: u8,
}

impl Word {
    pub fn new(text: &str) -> Result<Self, DictionaryError> {
        let invalid = |reason| DictionaryError::InvalidWord {
            word: text.to_string(),
            reason,
        };
        if text.is_empty() || text.len() > MAX_WORD_LEN {
            return Err(invalid("length must be 1..=6"));
        }
        let mut letters = [0u8; MAX_WORD_LEN];
        for (slot, b) in letters.iter_mut().zip(text.bytes()) {
            if !b.is_ascii_lowercase() {
                return Err(invalid("only lowercase a-z allowed"));
            }
            *slot = b - b'a';
        }
        Ok(Word {
            text: text.to_string(),
            letters,
            len: text.len() as u8,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Alphabet indices (`a = 0`) of the letters.
    pub fn letters(&self) -> &[u8] {
        &self.letters[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Sorted, duplicate-free word list with letter totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    words: Vec<Word>,
    letter_counts: [u64; ALPHABET],
    total_letters: u64,
}

impl Dictionary {
    /// Builds a dictionary from already-normalized words. Duplicates collapse.
    pub fn from_words<I, S>(words: I) -> Result<Self, DictionaryError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut unique = BTreeSet::new();
        for w in words {
            unique.insert(Word::new(w.as_ref())?);
        }
        let words: Vec<Word> = unique.into_iter().collect();
        let mut letter_counts = [0u64; ALPHABET];
        for w in &words {
            for &l in w.letters() {
                letter_counts[l as usize] += 1;
            }
        }
        let total_letters = letter_counts.iter().sum();
        Ok(Dictionary {
            words,
            letter_counts,
            total_letters,
        })
    }

    /// Reads one word per line; blank lines are skipped.
    pub fn read_from<R: BufRead>(reader: R) -> Result<Self, DictionaryError> {
        let mut words = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let w = line.trim();
            if !w.is_empty() {
                words.push(w.to_string());
            }
        }
        Dictionary::from_words(words)
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        for w in &self.words {
            writeln!(writer, "{}", w.as_str())?;
        }
        Ok(())
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(Word::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words
            .binary_search_by(|w| w.as_str().cmp(word))
            .is_ok()
    }

    /// Occurrences of each letter across all words, indexed `a = 0`.
    pub fn letter_counts(&self) -> &[u64; ALPHABET] {
        &self.letter_counts
    }

    pub fn total_letters(&self) -> u64 {
        self.total_letters
    }

    pub fn union(&self, other: &Dictionary) -> Dictionary {
        Dictionary::from_words(self.iter().chain(other.iter())).expect("both inputs are valid")
    }

    /// SHA-256 over the newline-terminated word list.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for w in &self.words {
            hasher.update(w.as_str().as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }
}

/// Relative letter frequencies rounded to thousandths, with an explicit
/// most-to-least-frequent ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    thousandths: [u32; ALPHABET],
    unrounded: Option<Vec<f64>>,
    ranking: Vec<char>,
}

impl FrequencyTable {
    /// Takes a published table as `(letter, frequency)` rows in ranking
    /// order. Frequencies are rounded half-up to thousandths.
    pub fn from_ranked(rows: &[(char, f64)]) -> Result<Self, DictionaryError> {
        let bad = |msg: String| DictionaryError::InvalidFrequencyTable(msg);
        if rows.len() != ALPHABET {
            return Err(bad(format!("expected 26 rows, got {}", rows.len())));
        }
        let mut thousandths = [0u32; ALPHABET];
        let mut seen = [false; ALPHABET];
        let mut prev = u32::MAX;
        for &(ch, f) in rows {
            if !ch.is_ascii_lowercase() {
                return Err(bad(format!("{ch:?} is not a lowercase letter")));
            }
            let idx = (ch as u8 - b'a') as usize;
            if std::mem::replace(&mut seen[idx], true) {
                return Err(bad(format!("letter {ch:?} listed twice")));
            }
            let milli = (f * 1000.0 + 0.5 + 1e-9).floor() as u32;
            if milli == 0 {
                return Err(bad(format!("letter {ch:?} has zero frequency")));
            }
            if milli > prev {
                return Err(bad(format!("letter {ch:?} is out of descending order")));
            }
            prev = milli;
            thousandths[idx] = milli;
        }
        Ok(FrequencyTable {
            thousandths,
            unrounded: None,
            ranking: rows.iter().map(|&(c, _)| c).collect(),
        })
    }

    /// Equal frequencies for every letter, ranked alphabetically.
    pub fn uniform() -> Self {
        let rows: Vec<(char, f64)> = (b'a'..=b'z').map(|b| (b as char, 1.0 / 26.0)).collect();
        FrequencyTable::from_ranked(&rows).expect("uniform table is valid")
    }

    pub fn get(&self, letter: char) -> f64 {
        self.thousandths(letter) as f64 / 1000.0
    }

    /// Rounded frequency in thousandths; 0 for non-letters.
    pub fn thousandths(&self, letter: char) -> u32 {
        if letter.is_ascii_lowercase() {
            self.thousandths[(letter as u8 - b'a') as usize]
        } else {
            0
        }
    }

    /// Exact shares before rounding, when the table came from a corpus.
    pub fn unrounded(&self) -> Option<&[f64]> {
        self.unrounded.as_deref()
    }

    /// Letters from most to least frequent.
    pub fn ranking(&self) -> &[char] {
        &self.ranking
    }
}

/// The frequency table of the reference corpus, as published.
pub fn reference_frequencies() -> FrequencyTable {
    const ROWS: [(char, f64); ALPHABET] = [
        ('e', 0.115),
        ('a', 0.086),
        ('r', 0.073),
        ('o', 0.066),
        ('t', 0.063),
        ('i', 0.061),
        ('s', 0.059),
        ('l', 0.059),
        ('n', 0.054),
        ('u', 0.040),
        ('d', 0.037),
        ('c', 0.037),
        ('p', 0.033),
        ('m', 0.031),
        ('h', 0.029),
        ('y', 0.027),
        ('g', 0.027),
        ('b', 0.026),
        ('f', 0.019),
        ('w', 0.016),
        ('k', 0.016),
        ('v', 0.012),
        ('z', 0.004),
        ('x', 0.004),
        ('j', 0.003),
        ('q', 0.002),
    ];
    FrequencyTable::from_ranked(&ROWS).expect("reference table is valid")
}

/// `round(count / total, 3)` in thousandths, ties away from zero, exactly.
fn round_half_up_thousandths(count: u64, total: u64) -> u64 {
    (2000 * count + total) / (2 * total)
}

/// Counts every letter occurrence over all words, rounds the shares half-up
/// to thousandths and lifts any zero to 0.001. The ranking orders letters
/// by exact count, ties alphabetically.
pub fn letter_frequencies(dict: &Dictionary) -> Result<FrequencyTable, DictionaryError> {
    if dict.is_empty() {
        return Err(DictionaryError::Empty);
    }
    let total = dict.total_letters();
    let counts = dict.letter_counts();
    let mut thousandths = [0u32; ALPHABET];
    for (milli, &count) in thousandths.iter_mut().zip(counts.iter()) {
        *milli = round_half_up_thousandths(count, total).max(1) as u32;
    }
    let unrounded = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let mut ranking: Vec<char> = (b'a'..=b'z').map(char::from).collect();
    ranking.sort_by_key(|&c| std::cmp::Reverse(counts[(c as u8 - b'a') as usize]));
    Ok(FrequencyTable {
        thousandths,
        unrounded: Some(unrounded),
        ranking,
    })
}

/// How many faces each letter receives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionPlan {
    counts: BTreeMap<char, u32>,
    cube_count: usize,
}

impl RepetitionPlan {
    /// Checks only that the counts fill `6 * cube_count` faces.
    pub fn new(counts: BTreeMap<char, u32>, cube_count: usize) -> Result<Self, DictionaryError> {
        let total: u64 = counts.values().map(|&c| c as u64).sum();
        if cube_count == 0 || total != (cube_count * COLORS) as u64 {
            return Err(DictionaryError::InvalidPlan(format!(
                "counts sum to {total}, expected {}",
                cube_count * COLORS
            )));
        }
        Ok(RepetitionPlan { counts, cube_count })
    }

    pub fn counts(&self) -> &BTreeMap<char, u32> {
        &self.counts
    }

    pub fn get(&self, letter: char) -> u32 {
        self.counts.get(&letter).copied().unwrap_or(0)
    }

    pub fn cube_count(&self) -> usize {
        self.cube_count
    }

    pub fn faces(&self) -> usize {
        self.cube_count * COLORS
    }
}

/// Distributes the faces left after one copy of each letter.
///
/// Each round hands `round(freq * vacant)` extra faces to letters in ranking
/// order, stopping at the first zero portion. Rounds repeat on the new vacant
/// count; once even the top letter's portion rounds to zero, it takes all
/// remaining faces.
pub fn allocate_repetitions(
    freq: &FrequencyTable,
    cube_count: usize,
) -> Result<RepetitionPlan, DictionaryError> {
    let faces = cube_count * COLORS;
    if faces < ALPHABET {
        return Err(DictionaryError::InfeasibleAlphabet { cube_count });
    }
    let mut counts: BTreeMap<char, u32> = (b'a'..=b'z').map(|b| (b as char, 1)).collect();
    let mut vacant = (faces - ALPHABET) as u64;
    let ranking = freq.ranking();

    while vacant > 0 {
        let round_vacant = vacant;
        let portion = |c: char| (2 * freq.thousandths(c) as u64 * round_vacant + 1000) / 2000;
        if portion(ranking[0]) == 0 {
            *counts.get_mut(&ranking[0]).unwrap() += vacant as u32;
            break;
        }
        for &c in ranking {
            let p = portion(c).min(vacant);
            if p == 0 {
                break;
            }
            *counts.get_mut(&c).unwrap() += p as u32;
            vacant -= p;
        }
    }
    RepetitionPlan::new(counts, cube_count)
}

/// Letters in ranking order, each repeated as often as the plan says.
/// Plan letters missing from the ranking are appended alphabetically.
pub fn build_base_letters(plan: &RepetitionPlan, order: &FrequencyTable) -> String {
    let mut out = String::with_capacity(plan.faces());
    let ranked: BTreeSet<char> = order.ranking().iter().copied().collect();
    let tail = plan.counts().keys().filter(|c| !ranked.contains(c));
    for &c in order.ranking().iter().chain(tail) {
        for _ in 0..plan.get(c) {
            out.push(c);
        }
    }
    out
}

/// The six-cube base permutation.
pub fn build_base_permutation(
    plan: &RepetitionPlan,
    order: &FrequencyTable,
) -> Result<CubeSet, DictionaryError> {
    let letters = build_base_letters(plan, order);
    if letters.len() != SLOTS {
        return Err(DictionaryError::InvalidPlan(format!(
            "a cube set needs 36 faces, plan has {}",
            letters.len()
        )));
    }
    letters
        .parse()
        .map_err(|e| DictionaryError::InvalidPlan(format!("{e}")))
}

/// Base permutation of the published frequency table:
/// `eeeaarroottiissllnnudcpmhygbfwkvzxjq`.
pub fn reference_base_permutation() -> CubeSet {
    let freq = reference_frequencies();
    let plan = allocate_repetitions(&freq, 6).expect("six cubes fit the alphabet");
    build_base_permutation(&plan, &freq).expect("six-cube plan fills 36 faces")
}
