use std::cmp::Reverse;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::report::{Entry, ProgressSink, RunDetails, SearchReport, StopReason, Tracker};
use super::{score_batch, shuffle, stream_rng, Algorithm, SearchConfig, SearchError, Stream};
use crate::cubeset::{CubeSet, COLORS, CUBES, SLOTS};
use crate::dictionary::Dictionary;
use crate::scorer::Target;

/// Which parent a cube locus is copied from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parent {
    First,
    Second,
}

/// Copies each cube's six faces from the parent the mask names.
pub fn crossover_with_mask(a: &CubeSet, b: &CubeSet, mask: &[Parent; CUBES]) -> CubeSet {
    let mut faces = [0u8; SLOTS];
    for (cube, which) in mask.iter().enumerate() {
        let src = match which {
            Parent::First => a,
            Parent::Second => b,
        };
        faces[cube * COLORS..(cube + 1) * COLORS].copy_from_slice(src.cube(cube));
    }
    CubeSet::from_bytes(&faces).expect("loci come from valid parents")
}

/// Puts back every missing letter, in alphabetical order, each on a
/// uniformly chosen face whose letter currently occurs at least twice.
pub fn repair<R: Rng>(child: &CubeSet, rng: &mut R) -> Result<CubeSet, SearchError> {
    let missing = child.missing_letters();
    let mut counts = child.letter_counts();
    let mut out = *child;
    for letter in &missing {
        let duplicates: Vec<usize> = (0..SLOTS)
            .filter(|&s| counts[(out.letter(s) - b'a') as usize] >= 2)
            .collect();
        if duplicates.is_empty() {
            return Err(SearchError::RepairImpossible {
                missing: missing.len(),
                duplicates: 0,
            });
        }
        let slot = duplicates[rng.random_range(0..duplicates.len())];
        counts[(out.letter(slot) - b'a') as usize] -= 1;
        let new = *letter as u8;
        counts[(new - b'a') as usize] += 1;
        out.set_letter(slot, new);
    }
    Ok(out)
}

/// Uniform locus-wise crossover, optionally followed by [`repair`].
pub fn crossover<R: Rng>(
    a: &CubeSet,
    b: &CubeSet,
    repair_letters: bool,
    rng: &mut R,
) -> Result<CubeSet, SearchError> {
    let mut mask = [Parent::First; CUBES];
    for m in mask.iter_mut() {
        if rng.random::<bool>() {
            *m = Parent::Second;
        }
    }
    let child = crossover_with_mask(a, b, &mask);
    if repair_letters {
        repair(&child, rng)
    } else {
        Ok(child)
    }
}

/// Copy with two distinct uniformly chosen slots exchanged.
pub fn mutate<R: Rng>(individual: &CubeSet, rng: &mut R) -> CubeSet {
    let a = rng.random_range(0..SLOTS);
    let mut b = rng.random_range(0..SLOTS - 1);
    if b >= a {
        b += 1;
    }
    let mut out = *individual;
    out.swap_slots(a, b);
    out
}

fn rank(population: &mut [Entry], target: Target) {
    population.sort_by_key(|e| (Reverse(e.score.get(target)), e.found_at.ordinal));
}

fn evaluate(
    sets: Vec<CubeSet>,
    dict: &Dictionary,
    tracker: &mut Tracker<'_>,
    generation: u64,
) -> Vec<Entry> {
    let scores = score_batch(&sets, dict);
    sets.into_iter()
        .zip(scores)
        .map(|(cs, s)| tracker.record(cs, s, generation))
        .collect()
}

/// Generational genetic search.
///
/// Generation 0 holds the scenario seeds followed by shuffles of `base`.
/// Each later generation keeps the top elites intact and adds, in this
/// order, elite x elite children, elite x non-elite children, mutants of the
/// elites taken by rank (wrapping when there are more mutants than elites)
/// and fresh shuffles. Parents are drawn uniformly from their pools.
pub fn genetic_search(
    config: &SearchConfig,
    dict: &Dictionary,
    base: &CubeSet,
    scenario_seeds: &[CubeSet],
    sink: &mut dyn ProgressSink,
) -> Result<SearchReport, SearchError> {
    let Algorithm::Genetic(params) = config.algorithm else {
        return Err(SearchError::WrongAlgorithm {
            expected: config.algorithm.label(),
            got: "genetic",
        });
    };
    config.validate()?;
    let size = params.population();
    if scenario_seeds.len() > size {
        return Err(SearchError::TooManySeeds {
            seeds: scenario_seeds.len(),
            population: size,
        });
    }
    let target = config.target;
    let mut shuffle_rng = stream_rng(config.seed, Stream::Shuffle);
    let mut select_rng = stream_rng(config.seed, Stream::Selection);
    let mut cross_rng = stream_rng(config.seed, Stream::Crossover);
    let mut mutate_rng = stream_rng(config.seed, Stream::Mutation);
    let mut tracker = Tracker::new(config, sink);

    let mut first: Vec<CubeSet> = scenario_seeds.to_vec();
    first.extend((scenario_seeds.len()..size).map(|_| shuffle(base, &mut shuffle_rng)));
    let mut population = evaluate(first, dict, &mut tracker, 0);
    rank(&mut population, target);

    let mut generations_run = 1;
    let mut stop = StopReason::Generations;
    for generation in 1..params.generations {
        if tracker.evaluations() >= config.budget {
            stop = StopReason::Budget;
            break;
        }
        let (elites, others) = population.split_at(params.elites);
        let mut fresh = Vec::with_capacity(size - params.elites);
        for _ in 0..params.crossed_elite {
            let i = select_rng.random_range(0..elites.len());
            let mut j = select_rng.random_range(0..elites.len() - 1);
            if j >= i {
                j += 1;
            }
            let child = crossover(
                &elites[i].permutation,
                &elites[j].permutation,
                params.repair,
                &mut cross_rng,
            )?;
            fresh.push(child);
        }
        for _ in 0..params.crossed_mixed {
            let e = &elites[select_rng.random_range(0..elites.len())];
            let o = &others[select_rng.random_range(0..others.len())];
            fresh.push(crossover(
                &e.permutation,
                &o.permutation,
                params.repair,
                &mut cross_rng,
            )?);
        }
        for k in 0..params.mutated {
            fresh.push(mutate(
                &elites[k % elites.len()].permutation,
                &mut mutate_rng,
            ));
        }
        fresh.extend((0..params.random).map(|_| shuffle(base, &mut shuffle_rng)));

        let mut next = elites.to_vec();
        next.extend(evaluate(fresh, dict, &mut tracker, generation));
        rank(&mut next, target);
        population = next;
        generations_run += 1;
    }

    let details = RunDetails::Genetic {
        generations_run,
        final_best_of_generation: population[0],
    };
    Ok(tracker.finish(config, stop, details))
}
