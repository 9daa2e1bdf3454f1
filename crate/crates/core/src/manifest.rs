//! Self-describing run records: everything needed to replay a search next to
//! the report it produced.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::Dictionary;
use crate::search::{self, ProgressSink, SearchConfig, SearchError, SearchInputs, SearchReport};

pub const TOOL_NAME: &str = "letterblocks";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("dictionary fingerprint {found} ({found_words} words) does not match the manifest's {expected} ({expected_words} words)")]
    FingerprintMismatch {
        expected: String,
        expected_words: usize,
        found: String,
        found_words: usize,
    },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("malformed run record: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryFingerprint {
    pub sha256: String,
    pub words: usize,
}

impl DictionaryFingerprint {
    pub fn of(dict: &Dictionary) -> Self {
        DictionaryFingerprint {
            sha256: dict.fingerprint(),
            words: dict.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: SearchConfig,
    pub inputs: SearchInputs,
    pub dictionary: DictionaryFingerprint,
}

impl RunManifest {
    pub fn new(config: SearchConfig, inputs: SearchInputs, dict: &Dictionary) -> Self {
        RunManifest {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            config,
            inputs,
            dictionary: DictionaryFingerprint::of(dict),
        }
    }

    pub fn check_dictionary(&self, dict: &Dictionary) -> Result<(), ManifestError> {
        let found = DictionaryFingerprint::of(dict);
        if found != self.dictionary {
            return Err(ManifestError::FingerprintMismatch {
                expected: self.dictionary.sha256.clone(),
                expected_words: self.dictionary.words,
                found: found.sha256,
                found_words: found.words,
            });
        }
        Ok(())
    }

    /// Runs the search this manifest describes.
    pub fn execute(
        &self,
        dict: &Dictionary,
        sink: &mut dyn ProgressSink,
    ) -> Result<RunRecord, ManifestError> {
        self.check_dictionary(dict)?;
        let report = search::run(&self.config, dict, &self.inputs, sink)?;
        Ok(RunRecord {
            manifest: self.clone(),
            report,
        })
    }
}

/// A manifest and its report, serialized as one JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub manifest: RunManifest,
    pub report: SearchReport,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run records always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Wall-clock facts about a run, kept out of the record so records stay
/// byte-for-byte reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub wall_seconds: f64,
    pub evaluations_per_second: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::reference_base_permutation;
    use crate::scorer::Target;
    use crate::search::{Algorithm, TreeVariant};

    #[test]
    fn record_replays_bit_for_bit() {
        let dict = Dictionary::from_words(["at", "tea", "nut", "sun", "one"]).unwrap();
        let cfg = SearchConfig::new(
            Algorithm::Tree {
                variant: TreeVariant::Greedy,
            },
            Target::Sum,
            400,
            1,
        );
        let manifest =
            RunManifest::new(cfg, SearchInputs::new(reference_base_permutation()), &dict);
        let record = manifest.execute(&dict, &mut ()).unwrap();
        let text = record.to_json();
        let parsed = RunRecord::from_json(&text).unwrap();
        assert_eq!(parsed, record);
        let again = parsed.manifest.execute(&dict, &mut ()).unwrap();
        assert_eq!(again.to_json(), text);
    }

    #[test]
    fn wrong_dictionary_is_refused() {
        let dict = Dictionary::from_words(["at"]).unwrap();
        let other = Dictionary::from_words(["to"]).unwrap();
        let cfg = SearchConfig::new(Algorithm::Random, Target::Sum, 3, 1);
        let manifest =
            RunManifest::new(cfg, SearchInputs::new(reference_base_permutation()), &dict);
        assert!(matches!(
            manifest.execute(&other, &mut ()),
            Err(ManifestError::FingerprintMismatch { .. })
        ));
    }
}
