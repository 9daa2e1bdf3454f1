//! Flattened six-cube letter layout and the legal-move algebra over it.
//!
//! A cube set is stored as 36 letters. Slot `i` sits on cube `i / 6` and
//! shows color `i % 6`, so each cube carries every color exactly once.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dictionary::RepetitionPlan;

pub const CUBES: usize = 6;
pub const COLORS: usize = 6;
pub const SLOTS: usize = CUBES * COLORS;
pub const ALPHABET: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeSetError {
    #[error("slot index {0} is outside 0..36")]
    SlotOutOfRange(usize),
    #[error("expected 36 letters, got {0}")]
    WrongLength(usize),
    #[error("character {ch:?} at position {pos} is not a lowercase letter")]
    InvalidLetter { pos: usize, ch: char },
    #[error("a move needs two distinct slots, got ({0}, {0})")]
    DegenerateMove(usize),
}

/// Cube and color of a slot.
pub fn face_location(index: usize) -> Result<(usize, usize), CubeSetError> {
    if index >= SLOTS {
        return Err(CubeSetError::SlotOutOfRange(index));
    }
    Ok((index / COLORS, index % COLORS))
}

#[inline]
pub(crate) fn cube_of(slot: usize) -> usize {
    slot / COLORS
}

#[inline]
pub(crate) fn color_of(slot: usize) -> usize {
    slot % COLORS
}

/// 36 letters, one per face. Letters are stored as ASCII `a..=z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeSet {
    faces: [u8; SLOTS],
}

impl CubeSet {
    /// Builds a cube set from 36 ASCII lowercase letters.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CubeSetError> {
        if bytes.len() != SLOTS {
            return Err(CubeSetError::WrongLength(bytes.len()));
        }
        let mut faces = [0u8; SLOTS];
        for (pos, (&b, face)) in bytes.iter().zip(faces.iter_mut()).enumerate() {
            if !b.is_ascii_lowercase() {
                return Err(CubeSetError::InvalidLetter { pos, ch: b as char });
            }
            *face = b;
        }
        Ok(CubeSet { faces })
    }

    pub fn faces(&self) -> &[u8; SLOTS] {
        &self.faces
    }

    pub fn letter(&self, slot: usize) -> u8 {
        self.faces[slot]
    }

    pub fn as_str(&self) -> &str {
        // faces only ever hold ASCII lowercase
        std::str::from_utf8(&self.faces).expect("cube set faces are ASCII")
    }

    /// Occurrences of each letter, indexed `a = 0`.
    pub fn letter_counts(&self) -> [u8; ALPHABET] {
        let mut counts = [0u8; ALPHABET];
        for &b in &self.faces {
            counts[(b - b'a') as usize] += 1;
        }
        counts
    }

    /// Letters of the alphabet that appear on no face, in ascending order.
    pub fn missing_letters(&self) -> Vec<char> {
        self.letter_counts()
            .iter()
            .enumerate()
            .filter(|(_, &n)| n == 0)
            .map(|(i, _)| (b'a' + i as u8) as char)
            .collect()
    }

    pub fn is_alphabet_complete(&self) -> bool {
        self.letter_counts().iter().all(|&n| n > 0)
    }

    /// The six letters of one cube, indexed by color.
    pub fn cube(&self, cube: usize) -> &[u8] {
        &self.faces[cube * COLORS..(cube + 1) * COLORS]
    }

    pub(crate) fn swap_slots(&mut self, a: usize, b: usize) {
        self.faces.swap(a, b);
    }

    pub(crate) fn set_letter(&mut self, slot: usize, letter: u8) {
        debug_assert!(letter.is_ascii_lowercase());
        self.faces[slot] = letter;
    }
}

impl FromStr for CubeSet {
    type Err = CubeSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != SLOTS {
            return Err(CubeSetError::WrongLength(chars.len()));
        }
        if let Some((pos, &ch)) = chars
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_ascii_lowercase())
        {
            return Err(CubeSetError::InvalidLetter { pos, ch });
        }
        CubeSet::from_bytes(s.as_bytes())
    }
}

impl fmt::Display for CubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for CubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeSet({})", self.as_str())
    }
}

impl Serialize for CubeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CubeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exchange of the letters in two distinct slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    a: u8,
    b: u8,
}

impl Move {
    /// Normalizes the pair so that `a < b`.
    pub fn new(x: usize, y: usize) -> Result<Self, CubeSetError> {
        for s in [x, y] {
            if s >= SLOTS {
                return Err(CubeSetError::SlotOutOfRange(s));
            }
        }
        if x == y {
            return Err(CubeSetError::DegenerateMove(x));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Ok(Move {
            a: a as u8,
            b: b as u8,
        })
    }

    pub fn slots(&self) -> (usize, usize) {
        (self.a as usize, self.b as usize)
    }

    pub fn is_same_cube(&self) -> bool {
        cube_of(self.a as usize) == cube_of(self.b as usize)
    }

    pub fn is_same_color(&self) -> bool {
        ((self.b - self.a) as usize).is_multiple_of(COLORS)
    }

    /// A move is legal when it stays inside one cube or inside one color.
    pub fn is_legal(&self) -> bool {
        self.is_same_cube() || self.is_same_color()
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Returns a copy of `cs` with the two slots of `m` exchanged.
pub fn apply_move(cs: &CubeSet, m: Move) -> CubeSet {
    let mut out = *cs;
    let (a, b) = m.slots();
    out.swap_slots(a, b);
    out
}

/// The ordered list of legal moves that spans a tree node's children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTable {
    moves: Vec<Move>,
}

impl MoveTable {
    /// 90 intra-cube swaps (cube 0..5, pairs lexicographic) followed by
    /// 90 same-color swaps (color 0..5, pairs lexicographic).
    pub fn canonical() -> &'static MoveTable {
        static TABLE: OnceLock<MoveTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let mut moves = Vec::with_capacity(180);
            for cube in 0..CUBES {
                for x in 0..COLORS {
                    for y in x + 1..COLORS {
                        moves.push(Move::new(cube * COLORS + x, cube * COLORS + y).unwrap());
                    }
                }
            }
            for color in 0..COLORS {
                for x in 0..CUBES {
                    for y in x + 1..CUBES {
                        moves.push(Move::new(x * COLORS + color, y * COLORS + color).unwrap());
                    }
                }
            }
            MoveTable { moves }
        })
    }

    /// Wraps an arbitrary move list. Used to inject faults into verification.
    pub fn from_moves(moves: Vec<Move>) -> Self {
        MoveTable { moves }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn contains(&self, m: &Move) -> bool {
        self.moves.contains(m)
    }
}

/// Shorthand for the canonical 180-entry table.
pub fn legal_moves() -> &'static MoveTable {
    MoveTable::canonical()
}

/// Writes an arbitrary transposition `(i, j)` as one or three legal moves.
///
/// With `i = 6n + a` and `j = 6m + b`, the pivot `k = 6n + b` shares a cube
/// with `i` and a color with `j`, so `(i,k)(k,j)(i,k)` equals `(i,j)`.
pub fn decompose_transposition(i: usize, j: usize) -> Result<Vec<Move>, CubeSetError> {
    let direct = Move::new(i, j)?;
    if direct.is_legal() {
        return Ok(vec![direct]);
    }
    let k = cube_of(i) * COLORS + color_of(j);
    let ik = Move::new(i, k)?;
    let kj = Move::new(k, j)?;
    Ok(vec![ik, kj, ik])
}

/// Number of distinct arrangements of the plan's letters over its faces:
/// `(6n)! / prod(reps!)`.
pub fn search_space_size(plan: &RepetitionPlan) -> BigUint {
    let total: u64 = plan.counts().values().map(|&c| c as u64).sum();
    let mut value = factorial(total);
    for &c in plan.counts().values() {
        value /= factorial(c as u64);
    }
    value
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// Letter multiset of a cube set keyed by character; handy in tests and reports.
pub fn letter_multiset(cs: &CubeSet) -> BTreeMap<char, usize> {
    let mut out = BTreeMap::new();
    for &b in cs.faces() {
        *out.entry(b as char).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "eeeaarroottiissllnnudcpmhygbfwkvzxjq";

    #[test]
    fn face_location_examples() {
        assert_eq!(face_location(11), Ok((1, 5)));
        assert_eq!(face_location(32), Ok((5, 2)));
        assert_eq!(face_location(0), Ok((0, 0)));
        assert_eq!(face_location(36), Err(CubeSetError::SlotOutOfRange(36)));
        for i in 0..SLOTS {
            let (cube, color) = face_location(i).unwrap();
            assert_eq!(cube * 6 + color, i);
        }
    }

    #[test]
    fn move_table_shape() {
        let t = legal_moves();
        assert_eq!(t.len(), 180);
        assert_eq!(t.moves()[0], Move::new(0, 1).unwrap());
        assert_eq!(t.moves()[90], Move::new(0, 6).unwrap());
        let unique: std::collections::HashSet<_> = t.moves().iter().collect();
        assert_eq!(unique.len(), 180);
        let same_cube = t.moves().iter().filter(|m| m.is_same_cube()).count();
        let same_color = t.moves().iter().filter(|m| m.is_same_color()).count();
        assert_eq!((same_cube, same_color), (90, 90));
        assert!(t
            .moves()
            .iter()
            .all(|m| m.is_same_cube() != m.is_same_color()));
    }

    #[test]
    fn moves_reject_bad_pairs() {
        assert_eq!(Move::new(4, 4), Err(CubeSetError::DegenerateMove(4)));
        assert_eq!(Move::new(0, 36), Err(CubeSetError::SlotOutOfRange(36)));
        assert_eq!(Move::new(7, 2).unwrap().slots(), (2, 7));
    }

    #[test]
    fn apply_move_swaps_and_is_involution() {
        let base: CubeSet = BASE.parse().unwrap();
        let m = Move::new(0, 35).unwrap();
        let once = apply_move(&base, m);
        assert_eq!(once.letter(0), b'q');
        assert_eq!(once.letter(35), b'e');
        assert_eq!(letter_multiset(&once), letter_multiset(&base));
        assert_eq!(apply_move(&once, m), base);
        assert_eq!(base.as_str(), BASE);
    }

    #[test]
    fn decomposition_examples() {
        let mv = |a, b| Move::new(a, b).unwrap();
        assert_eq!(decompose_transposition(0, 3).unwrap(), vec![mv(0, 3)]);
        assert_eq!(decompose_transposition(0, 6).unwrap(), vec![mv(0, 6)]);
        assert_eq!(
            decompose_transposition(1, 8).unwrap(),
            vec![mv(1, 2), mv(2, 8), mv(1, 2)]
        );
        assert_eq!(
            decompose_transposition(5, 5),
            Err(CubeSetError::DegenerateMove(5))
        );
    }

    #[test]
    fn decomposition_covers_every_pair() {
        let base: CubeSet = "abcdefghijklmnopqrstuvwxyzabcdefghij".parse().unwrap();
        for i in 0..SLOTS {
            for j in i + 1..SLOTS {
                let moves = decompose_transposition(i, j).unwrap();
                assert!(moves.len() == 1 || moves.len() == 3);
                assert!(moves.iter().all(|m| legal_moves().contains(m)));
                // use slot labels so every position is distinguishable
                let mut labels: Vec<usize> = (0..SLOTS).collect();
                for m in &moves {
                    let (a, b) = m.slots();
                    labels.swap(a, b);
                }
                let mut expected: Vec<usize> = (0..SLOTS).collect();
                expected.swap(i, j);
                assert_eq!(labels, expected, "pair ({i},{j})");
                let direct = apply_move(&base, Move::new(i, j).unwrap());
                let composed = moves.iter().fold(base, |cs, m| apply_move(&cs, *m));
                assert_eq!(composed, direct);
            }
        }
    }

    #[test]
    fn codec_round_trip_and_errors() {
        let seed2k = "esdauoygtjcrrlhbfesikveitqnxwmlazpno";
        let cs: CubeSet = seed2k.parse().unwrap();
        assert_eq!(cs.to_string(), seed2k);
        assert_eq!(
            "eeeaarroottiissllnnudcpmhygbfwkvzxj".parse::<CubeSet>(),
            Err(CubeSetError::WrongLength(35))
        );
        assert_eq!(
            "Eeeaarroottiissllnnudcpmhygbfwkvzxjq".parse::<CubeSet>(),
            Err(CubeSetError::InvalidLetter { pos: 0, ch: 'E' })
        );
        assert_eq!(
            "eeeaarroottiissllnnudcpmhygbfwkvzxj1".parse::<CubeSet>(),
            Err(CubeSetError::InvalidLetter { pos: 35, ch: '1' })
        );
        let json = serde_json::to_string(&cs).unwrap();
        assert_eq!(json, format!("\"{seed2k}\""));
        assert_eq!(serde_json::from_str::<CubeSet>(&json).unwrap(), cs);
    }

    #[test]
    fn missing_letter_detection() {
        let cs: CubeSet = "aoweuigycntelsdrnheieoaamtfbdprlstkr".parse().unwrap();
        // the checker reports every absent letter; this string lacks j, q, v, x, z
        assert_eq!(cs.missing_letters(), vec!['j', 'q', 'v', 'x', 'z']);
        assert!(!cs.is_alphabet_complete());
        assert!(BASE.parse::<CubeSet>().unwrap().is_alphabet_complete());
    }
}
