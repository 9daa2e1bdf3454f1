//! Letter assignment search for six-cube word building blocks.
//!
//! Each of six cubes shows one letter per face and every cube uses the same
//! six colors. A dictionary word is *mono* when it can be laid out on distinct
//! cubes all showing one color and *rainbow* when the colors are pairwise
//! distinct. The crate prepares word lists, scores layouts and searches for
//! layouts that maximize those counts.

pub mod cubeset;
pub mod dictionary;
pub mod manifest;
pub mod scorer;
pub mod search;
pub mod verify;

pub use cubeset::{
    apply_move, decompose_transposition, face_location, legal_moves, search_space_size, CubeSet,
    CubeSetError, Move, MoveTable,
};
pub use dictionary::{
    allocate_repetitions, build_base_permutation, ingest_word_list, letter_frequencies,
    reference_base_permutation, reference_frequencies, Dictionary, DictionaryError, FrequencyTable,
    IngestConfig, RepetitionPlan,
};
pub use scorer::{
    brute_force_score, score, spellable_mono, spellable_rainbow, word_report, ScoreTriple, Target,
    WordReport,
};
pub use search::{SearchConfig, SearchError, SearchInputs, SearchReport};

/// The seed-2000 random layout used as an alternative tree root.
pub const SEED2K: &str = "esdauoygtjcrrlhbfesikveitqnxwmlazpno";
