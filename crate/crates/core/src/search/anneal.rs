use rand::Rng;

use super::report::{ProgressSink, RunDetails, SearchReport, StopReason, Tracker};
use super::{stream_rng, Algorithm, AnnealParams, SearchConfig, SearchError, Stream};
use crate::cubeset::{CubeSet, SLOTS};
use crate::dictionary::Dictionary;
use crate::scorer::score;

/// Temperature after `iterations` geometric cooling steps.
pub fn temperature_after(t0: f64, cooling: f64, iterations: u64) -> f64 {
    t0 * cooling.powf(iterations as f64)
}

/// Metropolis acceptance: improvements and ties always, losses with
/// probability `exp(delta / temperature)`.
fn accepts(delta: f64, temperature: f64, rng: &mut impl Rng) -> bool {
    delta >= 0.0 || rng.random::<f64>() < (delta / temperature).exp()
}

/// Simulated annealing over unrestricted two-slot swaps.
///
/// Each of the `budget` iterations swaps two distinct uniformly chosen slots
/// of the current state, scores the neighbor and applies the Metropolis rule
/// on the target; the temperature is multiplied by `cooling` afterwards.
pub fn simulated_annealing(
    config: &SearchConfig,
    dict: &Dictionary,
    start: &CubeSet,
    sink: &mut dyn ProgressSink,
) -> Result<SearchReport, SearchError> {
    let Algorithm::Anneal(AnnealParams { t0, cooling }) = config.algorithm else {
        return Err(SearchError::WrongAlgorithm {
            expected: config.algorithm.label(),
            got: "anneal",
        });
    };
    config.validate()?;
    let target = config.target;
    let mut neighbor_rng = stream_rng(config.seed, Stream::Neighbor);
    let mut accept_rng = stream_rng(config.seed, Stream::Accept);
    let mut tracker = Tracker::new(config, sink);

    let mut current = *start;
    let mut current_score = score(&current, dict);
    tracker.record(current, current_score, 0);

    let mut temperature = t0;
    let (mut accepted, mut accepted_worse, mut rejected) = (0u64, 0u64, 0u64);
    for _ in 0..config.budget {
        let a = neighbor_rng.random_range(0..SLOTS);
        let mut b = neighbor_rng.random_range(0..SLOTS - 1);
        if b >= a {
            b += 1;
        }
        let mut candidate = current;
        candidate.swap_slots(a, b);
        let candidate_score = score(&candidate, dict);
        tracker.record(candidate, candidate_score, 0);

        let delta = candidate_score.get(target) as f64 - current_score.get(target) as f64;
        if accepts(delta, temperature, &mut accept_rng) {
            accepted += 1;
            accepted_worse += (delta < 0.0) as u64;
            current = candidate;
            current_score = candidate_score;
        } else {
            rejected += 1;
        }
        temperature *= cooling;
    }

    let details = RunDetails::Anneal {
        final_temperature: temperature,
        accepted,
        accepted_worse,
        rejected,
    };
    Ok(tracker.finish(config, StopReason::Budget, details))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubeset::letter_multiset;
    use crate::dictionary::reference_base_permutation;
    use crate::scorer::Target;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cooling_closed_form() {
        // 1000 * 0.999^1000 = 1000 * exp(1000 * ln 0.999)
        let expected = 1000.0 * (1000.0 * 0.999f64.ln()).exp();
        assert!((expected - 367.70).abs() < 0.01);
        assert!((temperature_after(1000.0, 0.999, 1000) - expected).abs() < 1e-9);
        let mut t = 1000.0;
        for _ in 0..1000 {
            t *= 0.999;
        }
        assert!((t - expected).abs() < 1e-6);
    }

    #[test]
    fn ties_and_gains_always_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            assert!(accepts(0.0, 1e-9, &mut rng));
            assert!(accepts(3.0, 1e-9, &mut rng));
        }
        // exp(-1000 / 1e-3) underflows to 0: never accepted
        assert!((0..1000).all(|_| !accepts(-1000.0, 1e-3, &mut rng)));
        let hits = (0..20000).filter(|_| accepts(-1.0, 1.0, &mut rng)).count();
        let rate = hits as f64 / 20000.0;
        assert!((rate - (-1.0f64).exp()).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn run_reports_final_temperature_and_keeps_letters() {
        let dict =
            Dictionary::from_words(["at", "tea", "nut", "sun", "rain", "tin", "lot"]).unwrap();
        let cfg = SearchConfig::new(
            Algorithm::Anneal(AnnealParams::default()),
            Target::Sum,
            300,
            5,
        );
        let base = reference_base_permutation();
        let report = simulated_annealing(&cfg, &dict, &base, &mut ()).unwrap();
        assert_eq!(report.evaluations, 301);
        let RunDetails::Anneal {
            final_temperature,
            accepted,
            rejected,
            ..
        } = report.details
        else {
            panic!("wrong details");
        };
        assert!((final_temperature - temperature_after(1000.0, 0.999, 300)).abs() < 1e-6);
        assert_eq!(accepted + rejected, 300);
        for e in &report.top.sum {
            assert_eq!(letter_multiset(&e.permutation), letter_multiset(&base));
        }
        assert_eq!(
            report,
            simulated_annealing(&cfg, &dict, &base, &mut ()).unwrap()
        );
    }

    #[test]
    fn rejects_bad_cooling() {
        let dict = Dictionary::from_words(["at"]).unwrap();
        let params = AnnealParams {
            t0: 10.0,
            cooling: 1.0,
        };
        let cfg = SearchConfig::new(Algorithm::Anneal(params), Target::Sum, 10, 5);
        assert!(simulated_annealing(&cfg, &dict, &reference_base_permutation(), &mut ()).is_err());
    }
}
