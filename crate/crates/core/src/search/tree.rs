use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use super::report::{Entry, ProgressSink, RunDetails, SearchReport, StopReason, Tracker};
use super::{score_batch, Algorithm, SearchConfig, SearchError, TreeVariant};
use crate::cubeset::{apply_move, legal_moves, CubeSet, Move, MoveTable};
use crate::dictionary::Dictionary;
use crate::scorer::{score, Target};

/// A not-yet-visited neighbor produced by one legal move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Child {
    pub mv: Move,
    /// Position of `mv` in the move table.
    pub move_index: usize,
    pub cube_set: CubeSet,
    pub ordinal: u64,
}

/// Applies every move of `table` to `parent` in order, keeps the children
/// not yet in `visited`, marks them visited and numbers them from
/// `next_ordinal` upward.
pub fn expand_children(
    parent: &CubeSet,
    table: &MoveTable,
    visited: &mut HashSet<CubeSet>,
    next_ordinal: &mut u64,
) -> Vec<Child> {
    let mut children = Vec::new();
    for (move_index, &mv) in table.moves().iter().enumerate() {
        let cube_set = apply_move(parent, mv);
        if visited.insert(cube_set) {
            children.push(Child {
                mv,
                move_index,
                cube_set,
                ordinal: *next_ordinal,
            });
            *next_ordinal += 1;
        }
    }
    children
}

/// Expands `parent`, scores its fresh children and records them in order.
fn expand_and_score(
    parent: &CubeSet,
    dict: &Dictionary,
    visited: &mut HashSet<CubeSet>,
    tracker: &mut Tracker<'_>,
    generation: u64,
) -> Vec<Entry> {
    let mut ordinal = tracker.next_ordinal();
    let children = expand_children(parent, legal_moves(), visited, &mut ordinal);
    let sets: Vec<CubeSet> = children.iter().map(|c| c.cube_set).collect();
    let scores = score_batch(&sets, dict);
    children
        .iter()
        .zip(scores)
        .map(|(c, s)| {
            let entry = tracker.record(c.cube_set, s, generation);
            debug_assert_eq!(entry.found_at.ordinal, c.ordinal);
            entry
        })
        .collect()
}

/// First child with the highest target value, i.e. ties go to the lowest move index.
fn best_child(children: &[Entry], target: Target) -> Option<Entry> {
    children.iter().copied().reduce(|best, e| {
        if e.score.get(target) > best.score.get(target) {
            e
        } else {
            best
        }
    })
}

struct Queued(Entry, Target);

impl Queued {
    fn key(&self) -> (u32, Reverse<u64>) {
        (self.0.score.get(self.1), Reverse(self.0.found_at.ordinal))
    }
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Searches the 180-ary legal-move tree rooted at `root`.
///
/// The root is generation 0 and ordinal 1; the children produced by the
/// `g`-th expansion belong to generation `g`. No permutation is evaluated
/// twice. The budget counts unique permutations and is checked before each
/// expansion, so a run may overshoot it by at most one generation.
pub fn tree_search(
    config: &SearchConfig,
    dict: &Dictionary,
    root: &CubeSet,
    sink: &mut dyn ProgressSink,
) -> Result<SearchReport, SearchError> {
    let Algorithm::Tree { variant } = config.algorithm else {
        return Err(SearchError::WrongAlgorithm {
            expected: config.algorithm.label(),
            got: "tree",
        });
    };
    config.validate()?;
    let target = config.target;
    let mut tracker = Tracker::new(config, sink);
    let mut visited = HashSet::new();
    visited.insert(*root);
    let mut parent = tracker.record(*root, score(root, dict), 0);
    let mut expansions = 0u64;

    let stop = match variant {
        TreeVariant::ConstrainedGreedy | TreeVariant::Greedy => loop {
            if tracker.unique() >= config.budget {
                break StopReason::Budget;
            }
            expansions += 1;
            let children = expand_and_score(
                &parent.permutation,
                dict,
                &mut visited,
                &mut tracker,
                expansions,
            );
            let Some(best) = best_child(&children, target) else {
                break StopReason::Exhausted;
            };
            if variant == TreeVariant::ConstrainedGreedy
                && best.score.get(target) < parent.score.get(target)
            {
                break StopReason::LocalMaximum;
            }
            parent = best;
        },
        TreeVariant::BestFirst => {
            let mut queue = BinaryHeap::new();
            loop {
                if tracker.unique() >= config.budget {
                    break StopReason::Budget;
                }
                expansions += 1;
                let children = expand_and_score(
                    &parent.permutation,
                    dict,
                    &mut visited,
                    &mut tracker,
                    expansions,
                );
                queue.extend(children.into_iter().map(|e| Queued(e, target)));
                match queue.pop() {
                    Some(Queued(next, _)) => parent = next,
                    None => break StopReason::Exhausted,
                }
            }
        }
    };

    let details = RunDetails::Tree {
        expansions,
        final_parent: parent,
    };
    let mut report = tracker.finish(config, stop, details);
    if variant == TreeVariant::ConstrainedGreedy {
        // every adopted child scores at least its parent, so the last parent
        // holds the best target value; report it rather than an earlier tie
        match target {
            Target::Mono => report.best.mono = parent,
            Target::Rainbow => report.best.rainbow = parent,
            Target::Sum => report.best.sum = parent,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::reference_base_permutation;

    fn cfg(variant: TreeVariant, target: Target, budget: u64) -> SearchConfig {
        SearchConfig::new(Algorithm::Tree { variant }, target, budget, 0)
    }

    #[test]
    fn expansion_skips_visited_and_numbers_children() {
        let base = reference_base_permutation();
        let mut visited = HashSet::from([base]);
        let mut next = 2;
        let children = expand_children(&base, legal_moves(), &mut visited, &mut next);
        // swaps of equal letters reproduce the visited parent
        assert!(children.len() < 180);
        let ordinals: Vec<u64> = children.iter().map(|c| c.ordinal).collect();
        assert_eq!(ordinals, (2..2 + children.len() as u64).collect::<Vec<_>>());
        assert!(children
            .windows(2)
            .all(|w| w[0].move_index < w[1].move_index));
        assert_eq!(next, 2 + children.len() as u64);
        assert!(expand_children(&base, legal_moves(), &mut visited, &mut next).is_empty());

        let flat: CubeSet = "e".repeat(36).parse().unwrap();
        let mut visited = HashSet::from([flat]);
        assert!(expand_children(&flat, legal_moves(), &mut visited, &mut next).is_empty());
    }

    #[test]
    fn expansion_counts_trivial_swaps_exactly() {
        let base = reference_base_permutation();
        let noop = legal_moves()
            .moves()
            .iter()
            .filter(|m| {
                let (a, b) = m.slots();
                base.letter(a) == base.letter(b)
            })
            .count();
        let mut visited = HashSet::from([base]);
        let children = expand_children(&base, legal_moves(), &mut visited, &mut 1);
        assert_eq!(children.len(), 180 - noop);
    }

    fn small_dict() -> Dictionary {
        Dictionary::from_words([
            "at", "tea", "nut", "sun", "rain", "tin", "lot", "ear", "sea", "net", "one", "ten",
            "rose", "star", "lion", "toe", "ant", "is", "it", "so",
        ])
        .unwrap()
    }

    #[test]
    fn constrained_greedy_best_is_final_parent() {
        let dict = small_dict();
        let root = reference_base_permutation();
        for target in Target::ALL {
            let report = tree_search(
                &cfg(TreeVariant::ConstrainedGreedy, target, 3000),
                &dict,
                &root,
                &mut (),
            )
            .unwrap();
            let RunDetails::Tree { final_parent, .. } = report.details else {
                panic!()
            };
            assert_eq!(*report.best.get(target), final_parent);
            let max = report.top.get(target)[0].score.get(target);
            assert_eq!(final_parent.score.get(target), max);
        }
    }

    #[test]
    fn strict_local_max_root_stops_after_one_expansion() {
        // every two- and three-letter string the base layout spells as rainbow;
        // the base keeps all of them and any effective swap loses some
        let root = reference_base_permutation();
        let letters: Vec<char> = ('a'..='z').collect();
        let mut candidates = Vec::new();
        for &a in &letters {
            for &b in &letters {
                candidates.push(format!("{a}{b}"));
                candidates.extend(letters.iter().map(|&c| format!("{a}{b}{c}")));
            }
        }
        let all = Dictionary::from_words(&candidates).unwrap();
        let dict = Dictionary::from_words(crate::scorer::word_report(&root, &all).rainbow).unwrap();
        let root_value = score(&root, &dict).rainbow;
        for &m in legal_moves().moves() {
            let child = apply_move(&root, m);
            if child != root {
                assert!(
                    score(&child, &dict).rainbow < root_value,
                    "{m:?} keeps the root value"
                );
            }
        }

        let report = tree_search(
            &cfg(TreeVariant::ConstrainedGreedy, Target::Rainbow, 1_000_000),
            &dict,
            &root,
            &mut (),
        )
        .unwrap();
        assert_eq!(report.stop_reason, StopReason::LocalMaximum);
        let RunDetails::Tree {
            expansions,
            final_parent,
        } = report.details
        else {
            panic!()
        };
        assert_eq!(expansions, 1);
        assert_eq!(final_parent.permutation, root);
        assert_eq!(report.best.rainbow.permutation, root);
        assert_eq!(report.best.rainbow.found_at.to_string(), "G0-P1");
    }

    #[test]
    fn greedy_matches_constrained_until_first_drop() {
        let dict = small_dict();
        let root = reference_base_permutation();
        let constrained = tree_search(
            &cfg(TreeVariant::ConstrainedGreedy, Target::Sum, 4000),
            &dict,
            &root,
            &mut (),
        )
        .unwrap();
        let greedy = tree_search(
            &cfg(TreeVariant::Greedy, Target::Sum, 4000),
            &dict,
            &root,
            &mut (),
        )
        .unwrap();
        let RunDetails::Tree { expansions, .. } = constrained.details else {
            panic!()
        };
        // both walks evaluate the same children up to the constrained stop
        let shared = constrained.evaluations.min(greedy.evaluations);
        assert!(shared > 1);
        if constrained.stop_reason == StopReason::LocalMaximum {
            let RunDetails::Tree {
                expansions: g_exp, ..
            } = greedy.details
            else {
                panic!()
            };
            assert!(g_exp >= expansions);
        }
        assert!(greedy.best.sum.score.sum >= constrained.best.sum.score.sum);
    }

    #[test]
    fn budget_counts_unique_permutations() {
        let dict = small_dict();
        let root = reference_base_permutation();
        for variant in [TreeVariant::Greedy, TreeVariant::BestFirst] {
            let report =
                tree_search(&cfg(variant, Target::Rainbow, 1000), &dict, &root, &mut ()).unwrap();
            assert_eq!(report.stop_reason, StopReason::Budget);
            assert_eq!(report.evaluations, report.unique_permutations);
            assert!(report.unique_permutations >= 1000);
            assert!(report.unique_permutations < 1000 + 180);
        }
    }

    #[test]
    fn best_first_pops_highest_then_oldest() {
        let e = |v: u32, ordinal| {
            Queued(
                Entry {
                    permutation: reference_base_permutation(),
                    score: crate::scorer::ScoreTriple::new(0, v),
                    found_at: super::super::Provenance {
                        generation: 1,
                        ordinal,
                    },
                },
                Target::Sum,
            )
        };
        let mut heap = BinaryHeap::from([e(3, 5), e(7, 9), e(7, 2), e(1, 1)]);
        let order: Vec<(u32, u64)> = std::iter::from_fn(|| heap.pop())
            .map(|q| (q.0.score.sum, q.0.found_at.ordinal))
            .collect();
        assert_eq!(order, vec![(7, 2), (7, 9), (3, 5), (1, 1)]);
    }

    #[test]
    fn exhausted_tree_terminates() {
        // two letters only: the reachable space is tiny and runs dry
        let mut faces = [b'a'; 36];
        faces[35] = b'b';
        let root = CubeSet::from_bytes(&faces).unwrap();
        let dict = Dictionary::from_words(["ab"]).unwrap();
        let greedy = tree_search(
            &cfg(TreeVariant::Greedy, Target::Sum, 1_000_000),
            &dict,
            &root,
            &mut (),
        )
        .unwrap();
        assert_eq!(greedy.stop_reason, StopReason::Exhausted);
        assert!(greedy.unique_permutations <= 36);
        // best-first drains the queue, so it sees every position of the 'b'
        let best_first = tree_search(
            &cfg(TreeVariant::BestFirst, Target::Sum, 1_000_000),
            &dict,
            &root,
            &mut (),
        )
        .unwrap();
        assert_eq!(best_first.stop_reason, StopReason::Exhausted);
        assert_eq!(best_first.unique_permutations, 36);
    }
}
