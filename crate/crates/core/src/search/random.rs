use super::report::{ProgressSink, RunDetails, SearchReport, StopReason, Tracker};
use super::{score_batch, shuffle, stream_rng, Algorithm, SearchConfig, SearchError, Stream};
use crate::cubeset::CubeSet;
use crate::dictionary::Dictionary;

const BATCH: u64 = 512;

/// Scores `budget` independent shuffles of `base`, tracking all three targets.
pub fn random_search(
    config: &SearchConfig,
    dict: &Dictionary,
    base: &CubeSet,
    sink: &mut dyn ProgressSink,
) -> Result<SearchReport, SearchError> {
    if config.algorithm != Algorithm::Random {
        return Err(SearchError::WrongAlgorithm {
            expected: config.algorithm.label(),
            got: "random",
        });
    }
    config.validate()?;
    let mut rng = stream_rng(config.seed, Stream::Shuffle);
    let mut tracker = Tracker::new(config, sink);

    let mut remaining = config.budget;
    while remaining > 0 {
        let n = remaining.min(BATCH);
        let batch: Vec<CubeSet> = (0..n).map(|_| shuffle(base, &mut rng)).collect();
        for (cs, s) in batch.iter().zip(score_batch(&batch, dict)) {
            tracker.record(*cs, s, 0);
        }
        remaining -= n;
    }
    Ok(tracker.finish(config, StopReason::Budget, RunDetails::Random))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubeset::letter_multiset;
    use crate::scorer::{score, Target};

    fn dict() -> Dictionary {
        Dictionary::from_words(["at", "tea", "nut", "sun", "rain", "tin", "lot", "ear"]).unwrap()
    }

    fn base() -> CubeSet {
        crate::dictionary::reference_base_permutation()
    }

    #[test]
    fn single_shuffle_is_best_everywhere() {
        let cfg = SearchConfig::new(Algorithm::Random, Target::Sum, 1, 9);
        let report = random_search(&cfg, &dict(), &base(), &mut ()).unwrap();
        let only = shuffle(&base(), &mut stream_rng(9, Stream::Shuffle));
        for t in Target::ALL {
            assert_eq!(report.best.get(t).permutation, only);
            assert_eq!(report.best.get(t).found_at.to_string(), "G0-P1");
        }
        assert_eq!(report.best.sum.score, score(&only, &dict()));
        assert_eq!(report.evaluations, 1);
    }

    #[test]
    fn shuffles_keep_letters_and_runs_repeat() {
        let cfg = SearchConfig::new(Algorithm::Random, Target::Sum, 700, 3);
        let a = random_search(&cfg, &dict(), &base(), &mut ()).unwrap();
        let b = random_search(&cfg, &dict(), &base(), &mut ()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.evaluations, 700);
        for e in &a.top.sum {
            assert_eq!(letter_multiset(&e.permutation), letter_multiset(&base()));
        }
        let other = SearchConfig { seed: 4, ..cfg };
        assert_ne!(
            random_search(&other, &dict(), &base(), &mut ())
                .unwrap()
                .top,
            a.top
        );
    }

    #[test]
    fn zero_budget_is_rejected() {
        let cfg = SearchConfig::new(Algorithm::Random, Target::Sum, 0, 1);
        assert!(matches!(
            random_search(&cfg, &dict(), &base(), &mut ()),
            Err(SearchError::InvalidConfig(_))
        ));
    }
}
