//! Mono and rainbow spellability, and the word-count objective.
//!
//! A word is *mono* when its letters can be shown on distinct cubes using a
//! single color, and *rainbow* when they can be shown on distinct cubes with
//! pairwise distinct colors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cubeset::{color_of, cube_of, CubeSet, ALPHABET, COLORS, CUBES, SLOTS};
use crate::dictionary::{Dictionary, Word};

/// Which count a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Mono,
    Rainbow,
    Sum,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Mono, Target::Rainbow, Target::Sum];

    pub fn name(self) -> &'static str {
        match self {
            Target::Mono => "mono",
            Target::Rainbow => "rainbow",
            Target::Sum => "sum",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mono" => Ok(Target::Mono),
            "rainbow" => Ok(Target::Rainbow),
            "sum" => Ok(Target::Sum),
            other => Err(format!(
                "unknown target {other:?} (expected mono, rainbow or sum)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub mono: u32,
    pub rainbow: u32,
    pub sum: u32,
}

impl ScoreTriple {
    pub fn new(mono: u32, rainbow: u32) -> Self {
        ScoreTriple {
            mono,
            rainbow,
            sum: mono + rainbow,
        }
    }

    pub fn get(&self, target: Target) -> u32 {
        match target {
            Target::Mono => self.mono,
            Target::Rainbow => self.rainbow,
            Target::Sum => self.sum,
        }
    }
}

impl fmt::Display for ScoreTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mono={} rainbow={} sum={}",
            self.mono, self.rainbow, self.sum
        )
    }
}

/// Slot lookup for one cube set.
#[derive(Debug, Clone)]
pub struct LetterIndex {
    /// Bit `s` set when slot `s` holds the letter.
    slots: [u64; ALPHABET],
    /// `by_color[c][l]`: bit `k` set when cube `k` shows letter `l` in color `c`.
    by_color: [[u8; ALPHABET]; COLORS],
}

impl LetterIndex {
    pub fn new(cs: &CubeSet) -> Self {
        let mut slots = [0u64; ALPHABET];
        let mut by_color = [[0u8; ALPHABET]; COLORS];
        for (s, &b) in cs.faces().iter().enumerate() {
            let l = (b - b'a') as usize;
            slots[l] |= 1 << s;
            by_color[color_of(s)][l] |= 1 << cube_of(s);
        }
        LetterIndex { slots, by_color }
    }

    /// Slots holding `letter` (alphabet index), ascending.
    pub fn slots_of(&self, letter: u8) -> impl Iterator<Item = usize> {
        BitIter(self.slots[letter as usize])
    }

    fn has_all(&self, letters: &[u8]) -> bool {
        letters.iter().all(|&l| self.slots[l as usize] != 0)
    }

    pub fn is_mono(&self, word: &Word) -> bool {
        let letters = word.letters();
        if !self.has_all(letters) {
            return false;
        }
        (0..COLORS).any(|c| {
            let mut masks = [0u8; 6];
            for (m, &l) in masks.iter_mut().zip(letters) {
                *m = self.by_color[c][l as usize];
                if *m == 0 {
                    return false;
                }
            }
            perfect_matching(&masks[..letters.len()])
        })
    }

    pub fn is_rainbow(&self, word: &Word) -> bool {
        let letters = word.letters();
        if !self.has_all(letters) {
            return false;
        }
        let mut candidates = [0u64; 6];
        for (c, &l) in candidates.iter_mut().zip(letters) {
            *c = self.slots[l as usize];
        }
        let candidates = &mut candidates[..letters.len()];
        // scarcest letters first prunes earliest
        candidates.sort_unstable_by_key(|m| m.count_ones());
        place_rainbow(candidates, 0, 0)
    }
}

/// True when every word position can take a distinct cube from its mask.
fn perfect_matching(masks: &[u8]) -> bool {
    let mut owner = [u8::MAX; CUBES];
    masks.iter().enumerate().all(|(p, _)| {
        let mut seen = 0u8;
        augment(p, masks, &mut owner, &mut seen)
    })
}

fn augment(p: usize, masks: &[u8], owner: &mut [u8; CUBES], seen: &mut u8) -> bool {
    for cube in BitIter(masks[p] as u64) {
        let bit = 1u8 << cube;
        if *seen & bit != 0 {
            continue;
        }
        *seen |= bit;
        let holder = owner[cube];
        if holder == u8::MAX || augment(holder as usize, masks, owner, seen) {
            owner[cube] = p as u8;
            return true;
        }
    }
    false
}

fn place_rainbow(candidates: &[u64], used_cubes: u8, used_colors: u8) -> bool {
    let Some((&first, rest)) = candidates.split_first() else {
        return true;
    };
    BitIter(first).any(|s| {
        let cube = 1u8 << cube_of(s);
        let color = 1u8 << color_of(s);
        used_cubes & cube == 0
            && used_colors & color == 0
            && place_rainbow(rest, used_cubes | cube, used_colors | color)
    })
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

fn parse_word(word: &str) -> Option<Word> {
    Word::new(word).ok()
}

/// Whether `word` can be spelled on distinct cubes all showing one color.
/// Words that are not 1..=6 lowercase letters are never spellable.
pub fn spellable_mono(cs: &CubeSet, word: &str) -> bool {
    parse_word(word).is_some_and(|w| LetterIndex::new(cs).is_mono(&w))
}

/// Whether `word` can be spelled on distinct cubes with pairwise distinct colors.
pub fn spellable_rainbow(cs: &CubeSet, word: &str) -> bool {
    parse_word(word).is_some_and(|w| LetterIndex::new(cs).is_rainbow(&w))
}

/// Counts the dictionary words spellable each way. A word may count in both.
pub fn score(cs: &CubeSet, dict: &Dictionary) -> ScoreTriple {
    let index = LetterIndex::new(cs);
    let (mut mono, mut rainbow) = (0u32, 0u32);
    for w in dict.words() {
        mono += index.is_mono(w) as u32;
        rainbow += index.is_rainbow(w) as u32;
    }
    ScoreTriple::new(mono, rainbow)
}

/// Reference scorer: enumerates every injective assignment of word positions
/// to slots carrying the right letters and tests the color rules on each.
/// Exponential in word length; meant for short words and small dictionaries.
pub fn brute_force_score(cs: &CubeSet, dict: &Dictionary) -> ScoreTriple {
    let (mut mono, mut rainbow) = (0u32, 0u32);
    for w in dict.words() {
        let (m, r) = brute_force_word(cs, w.as_str());
        mono += m as u32;
        rainbow += r as u32;
    }
    ScoreTriple::new(mono, rainbow)
}

/// `(mono, rainbow)` for one word by exhaustive enumeration.
pub fn brute_force_word(cs: &CubeSet, word: &str) -> (bool, bool) {
    let letters = word.as_bytes();
    let pools: Vec<Vec<usize>> = letters
        .iter()
        .map(|&l| (0..SLOTS).filter(|&s| cs.letter(s) == l).collect())
        .collect();
    if letters.is_empty() || pools.iter().any(Vec::is_empty) {
        return (false, false);
    }
    let (mut mono, mut rainbow) = (false, false);
    let mut pick = vec![0usize; pools.len()];
    loop {
        let chosen: Vec<usize> = pick.iter().zip(&pools).map(|(&i, p)| p[i]).collect();
        let distinct_slots = all_distinct(chosen.iter().copied());
        let distinct_cubes = all_distinct(chosen.iter().map(|&s| s / 6));
        if distinct_slots && distinct_cubes {
            let colors: Vec<usize> = chosen.iter().map(|&s| s % 6).collect();
            mono |= colors.iter().all(|&c| c == colors[0]);
            rainbow |= all_distinct(colors.iter().copied());
        }
        // odometer increment over the candidate pools
        let mut pos = 0;
        loop {
            if pos == pick.len() {
                return (mono, rainbow);
            }
            pick[pos] += 1;
            if pick[pos] < pools[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

fn all_distinct(items: impl Iterator<Item = usize>) -> bool {
    let v: Vec<usize> = items.collect();
    v.iter()
        .enumerate()
        .all(|(i, a)| v[i + 1..].iter().all(|b| a != b))
}

/// The words counted by [`score`], each list in dictionary order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordReport {
    pub mono: Vec<String>,
    pub rainbow: Vec<String>,
}

pub fn word_report(cs: &CubeSet, dict: &Dictionary) -> WordReport {
    let index = LetterIndex::new(cs);
    let mut report = WordReport::default();
    for w in dict.words() {
        if index.is_mono(w) {
            report.mono.push(w.as_str().to_string());
        }
        if index.is_rainbow(w) {
            report.rainbow.push(w.as_str().to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const BASE: &str = "eeeaarroottiissllnnudcpmhygbfwkvzxjq";

    /// Independent oracle: every ordered tuple of distinct slots, no letter
    /// pre-filtering.
    fn full_tuple_oracle(cs: &CubeSet, word: &str) -> (bool, bool) {
        fn rec(cs: &CubeSet, word: &[u8], chosen: &mut Vec<usize>, out: &mut (bool, bool)) {
            if chosen.len() == word.len() {
                let cubes: Vec<_> = chosen.iter().map(|s| s / 6).collect();
                let colors: Vec<_> = chosen.iter().map(|s| s % 6).collect();
                let uniq = |v: &[usize]| {
                    let mut u = v.to_vec();
                    u.sort();
                    u.dedup();
                    u.len() == v.len()
                };
                if uniq(&cubes) {
                    out.0 |= colors.iter().all(|&c| c == colors[0]);
                    out.1 |= uniq(&colors);
                }
                return;
            }
            for s in 0..36 {
                if chosen.contains(&s) {
                    continue;
                }
                chosen.push(s);
                if cs.letter(s) == word[chosen.len() - 1] {
                    rec(cs, word, chosen, out);
                }
                chosen.pop();
            }
        }
        let mut out = (false, false);
        rec(cs, word.as_bytes(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn base_set_examples_match_full_enumeration() {
        let base: CubeSet = BASE.parse().unwrap();
        assert_eq!(full_tuple_oracle(&base, "at"), (true, true));
        assert_eq!(full_tuple_oracle(&base, "see"), (false, false));
        assert_eq!(full_tuple_oracle(&base, "nut"), (false, true));
        assert_eq!(full_tuple_oracle(&base, "tea"), (false, false));
        for w in ["at", "see", "nut", "tea"] {
            let expected = full_tuple_oracle(&base, w);
            assert_eq!(
                (spellable_mono(&base, w), spellable_rainbow(&base, w)),
                expected,
                "{w}"
            );
            assert_eq!(brute_force_word(&base, w), expected, "{w}");
        }
    }

    #[test]
    fn small_dictionary_counts() {
        let base: CubeSet = BASE.parse().unwrap();
        let dict = Dictionary::from_words(["at", "see", "tea", "nut"]).unwrap();
        assert_eq!(brute_force_score(&base, &dict), ScoreTriple::new(1, 2));
        assert_eq!(score(&base, &dict), ScoreTriple::new(1, 2));
        let report = word_report(&base, &dict);
        assert_eq!(report.mono, vec!["at"]);
        assert_eq!(report.rainbow, vec!["at", "nut"]);

        let at = Dictionary::from_words(["at"]).unwrap();
        let r = word_report(&base, &at);
        assert_eq!(
            (r.mono, r.rainbow),
            (vec!["at".to_string()], vec!["at".to_string()])
        );
        assert_eq!(
            word_report(&base, &Dictionary::from_words(Vec::<&str>::new()).unwrap()),
            WordReport::default()
        );
    }

    #[test]
    fn single_letters_are_both() {
        let base: CubeSet = BASE.parse().unwrap();
        for c in 'a'..='z' {
            let w = c.to_string();
            assert!(spellable_mono(&base, &w));
            assert!(spellable_rainbow(&base, &w));
        }
        let no_q: CubeSet = "eeeaarroottiissllnnudcpmhygbfwkvzxje".parse().unwrap();
        assert!(!spellable_mono(&no_q, "q"));
        assert!(!spellable_rainbow(&no_q, "q"));
    }

    #[test]
    fn unspellable_dictionary_scores_zero() {
        let base: CubeSet = BASE.parse().unwrap();
        let dict = Dictionary::from_words(["eeee", "qq", "zzz"]).unwrap();
        assert_eq!(score(&base, &dict), ScoreTriple::default());
        assert_eq!(brute_force_score(&base, &dict), ScoreTriple::default());
    }

    #[test]
    fn matching_needs_augmenting_paths() {
        // position 0 can use cubes {0,1}, position 1 only cube 0: greedy
        // first-fit would fail, augmentation reroutes position 0 to cube 1
        assert!(perfect_matching(&[0b11, 0b01]));
        assert!(!perfect_matching(&[0b01, 0b01]));
        assert!(perfect_matching(&[0b111111; 6]));
        assert!(!perfect_matching(&[0b000111, 0b000111, 0b000111, 0b000111]));
    }

    fn shuffled(seed: u64) -> CubeSet {
        let mut bytes = BASE.as_bytes().to_vec();
        bytes.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        CubeSet::from_bytes(&bytes).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn agrees_with_oracle(seed in any::<u64>(), words in proptest::collection::vec("[a-z]{1,4}", 1..40)) {
            let cs = shuffled(seed);
            let dict = Dictionary::from_words(&words).unwrap();
            prop_assert_eq!(score(&cs, &dict), brute_force_score(&cs, &dict));
        }

        #[test]
        fn union_never_loses_words(seed in any::<u64>(),
            a in proptest::collection::vec("[a-z]{1,5}", 1..30),
            b in proptest::collection::vec("[a-z]{1,5}", 1..30)) {
            let cs = shuffled(seed);
            let d1 = Dictionary::from_words(&a).unwrap();
            let d2 = Dictionary::from_words(&b).unwrap();
            let joined = score(&cs, &d1.union(&d2));
            let alone = score(&cs, &d1);
            prop_assert!(joined.mono >= alone.mono);
            prop_assert!(joined.rainbow >= alone.rainbow);
        }
    }
}
