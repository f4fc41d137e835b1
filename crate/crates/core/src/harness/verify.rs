//! Independent per-run verification of the mistake bound.
//!
//! Nothing here trusts the session's own counters: congestion is recounted
//! from the path log, mistakes from the transcript, and the bound
//! `mistakes <= max_congestion * cut_size` is checked against those recounts.
//! The charging witness assigns every counted mistake to one cut edge on its
//! routed path (the first one, request side first) and confirms that no cut
//! edge absorbs more charges than the recounted maximum congestion. A counted
//! mistake whose path crosses no cut edge signals an implementation bug and
//! fails the witness.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::labeling::CutSet;
use crate::predictor::TranscriptEntry;
use crate::routing::LoggedPath;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MistakeBoundCheck {
    pub mistakes: u32,
    pub cut_size: usize,
    pub recounted_max_congestion: u32,
    pub bound: u64,
    pub bound_satisfied: bool,
    pub charging_witness_found: bool,
    pub max_cut_edge_charge: u32,
    pub charge_within_congestion: bool,
}

impl MistakeBoundCheck {
    pub fn all_good(&self) -> bool {
        self.bound_satisfied && self.charging_witness_found && self.charge_within_congestion
    }
}

/// Recount congestion per normalized edge from the path log alone.
pub fn recount_congestion(path_log: &[LoggedPath]) -> BTreeMap<(u32, u32), u32> {
    let mut counts = BTreeMap::new();
    for p in path_log {
        for &(x, y) in &p.edges {
            *counts.entry((x.min(y), x.max(y))).or_insert(0) += 1;
        }
    }
    counts
}

/// Pair each transcript entry that routed with its logged path, in order.
/// Returns `None` if the two records disagree structurally.
fn pair_routed_entries<'a>(
    transcript: &'a [TranscriptEntry],
    path_log: &'a [LoggedPath],
) -> Option<Vec<(&'a TranscriptEntry, &'a LoggedPath)>> {
    let mut pairs = Vec::new();
    let mut paths = path_log.iter();
    for entry in transcript {
        if let Some(target) = entry.path_target {
            let p = paths.next()?;
            if p.request != entry.vertex || p.target != target || p.edges.len() != entry.path_length
            {
                return None;
            }
            pairs.push((entry, p));
        }
    }
    if paths.next().is_some() {
        return None;
    }
    Some(pairs)
}

/// Reconstruct both sides of the mistake bound from raw run artifacts.
pub fn verify_mistake_bound(
    transcript: &[TranscriptEntry],
    path_log: &[LoggedPath],
    cut: &CutSet,
) -> MistakeBoundCheck {
    let recount = recount_congestion(path_log);
    let recounted_max = recount.values().copied().max().unwrap_or(0);
    let mistakes = transcript.iter().filter(|e| e.counted && e.mistake).count() as u32;
    let cut_size = cut.size();
    let bound = recounted_max as u64 * cut_size as u64;
    let bound_satisfied = mistakes as u64 <= bound;

    let mut charges: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut witness_found = true;
    match pair_routed_entries(transcript, path_log) {
        None => witness_found = false,
        Some(pairs) => {
            for entry in transcript.iter().filter(|e| e.counted && e.mistake) {
                let path = pairs
                    .iter()
                    .find(|(e, _)| e.index == entry.index)
                    .map(|(_, p)| *p);
                let charged = path.and_then(|p| {
                    p.edges
                        .iter()
                        .map(|&(x, y)| (x.min(y), x.max(y)))
                        .find(|&(u, v)| cut.contains(u, v))
                });
                match charged {
                    Some(edge) => *charges.entry(edge).or_insert(0) += 1,
                    None => witness_found = false,
                }
            }
        }
    }
    let max_charge = charges.values().copied().max().unwrap_or(0);
    let charge_within_congestion = max_charge <= recounted_max;

    MistakeBoundCheck {
        mistakes,
        cut_size,
        recounted_max_congestion: recounted_max,
        bound,
        bound_satisfied,
        charging_witness_found: witness_found,
        max_cut_edge_charge: max_charge,
        charge_within_congestion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::line_graph;
    use crate::labeling::{cut_set, Labeling};
    use crate::predictor::PredictionSession;
    use crate::tree::{SpanningTree, TreeStrategy};

    fn half_split(n: usize) -> Labeling {
        Labeling::from_tokens(
            (0..n)
                .map(|v| if v < n / 2 { "+1" } else { "-1" }.to_string())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn p8_two_query_session_verifies_with_equality() {
        let g = line_graph(8);
        let l = half_split(8);
        let tree = SpanningTree::build(&g, TreeStrategy::Bfs, 0);
        let mut s = PredictionSession::new(tree);
        for v in [0u32, 7] {
            s.predict(v).unwrap();
            s.reveal(v, l.token_of(v)).unwrap();
        }
        let check = verify_mistake_bound(s.transcript(), s.routing().path_log(), &cut_set(&g, &l));
        assert!(check.all_good());
        assert_eq!(check.mistakes, 1);
        assert_eq!(check.bound, 1, "bound holds with equality here");
        assert_eq!(check.recounted_max_congestion, 1);
        assert_eq!(check.max_cut_edge_charge, 1);
    }

    #[test]
    fn zero_mistake_session_verifies_vacuously() {
        let g = line_graph(6);
        let l = Labeling::constant(6, "x");
        let tree = SpanningTree::build(&g, TreeStrategy::Bfs, 0);
        let mut s = PredictionSession::new(tree);
        for v in 0..6u32 {
            s.predict(v).unwrap();
            s.reveal(v, l.token_of(v)).unwrap();
        }
        let check = verify_mistake_bound(s.transcript(), s.routing().path_log(), &cut_set(&g, &l));
        assert!(check.all_good());
        assert_eq!(check.mistakes, 0);
        assert_eq!(check.max_cut_edge_charge, 0);
    }

    #[test]
    fn tampered_transcript_breaks_the_witness() {
        let g = line_graph(8);
        let l = half_split(8);
        let tree = SpanningTree::build(&g, TreeStrategy::Bfs, 0);
        let mut s = PredictionSession::new(tree);
        for v in [0u32, 1, 7] {
            s.predict(v).unwrap();
            s.reveal(v, l.token_of(v)).unwrap();
        }
        let mut transcript = s.transcript().to_vec();
        // Mark the correct prediction on vertex 1 as a mistake: its path
        // (1 -> 0) crosses no cut edge, so no charge exists for it.
        transcript[1].mistake = true;
        let check = verify_mistake_bound(&transcript, s.routing().path_log(), &cut_set(&g, &l));
        assert!(!check.charging_witness_found);
    }

    #[test]
    fn structural_mismatch_breaks_the_witness() {
        let g = line_graph(4);
        let l = half_split(4);
        let tree = SpanningTree::build(&g, TreeStrategy::Bfs, 0);
        let mut s = PredictionSession::new(tree);
        for v in [0u32, 3] {
            s.predict(v).unwrap();
            s.reveal(v, l.token_of(v)).unwrap();
        }
        let check = verify_mistake_bound(s.transcript(), &[], &cut_set(&g, &l));
        assert!(!check.charging_witness_found, "missing path log entries");
    }

    #[test]
    fn empty_run_verifies() {
        let check = verify_mistake_bound(&[], &[], &cut_set(&line_graph(4), &half_split(4)));
        assert!(check.all_good());
        assert_eq!(check.bound, 0);
    }
}
