//! Online routing on a spanning tree with exact per-edge congestion
//! accounting.
//!
//! Each request is connected to the nearest previously-seen terminal in tree
//! distance, ties broken by earliest terminal arrival. Routing decisions
//! depend only on the current state, never on future requests. Every routed
//! path is appended to a log from which the congestion counters can be
//! recounted independently.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::SpanningTree;

#[derive(Debug, Error, PartialEq)]
pub enum RoutingError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("no terminals: the first request must seed the terminal set")]
    NoTerminals,
}

/// Outcome of routing one request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    /// The chosen prior terminal.
    pub target: u32,
    /// Oriented steps from the request vertex to the target; empty when the
    /// request is already a terminal.
    pub path: Vec<(u32, u32)>,
}

impl RouteResult {
    pub fn path_length(&self) -> usize {
        self.path.len()
    }
}

/// One record of the append-only path log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedPath {
    pub request: u32,
    pub target: u32,
    pub edges: Vec<(u32, u32)>,
}

/// Online routing state: terminal set, per-tree-edge congestion counters and
/// the path log.
#[derive(Debug, Clone)]
pub struct RoutingState {
    tree: SpanningTree,
    terminals: Vec<u32>,
    arrival: Vec<u32>,
    congestion: Vec<u32>,
    max_congestion: u32,
    path_log: Vec<LoggedPath>,
    // Nearest-terminal tracking: for every vertex, the (distance, arrival)
    // lexicographic minimum over current terminals and the terminal achieving
    // it. Maintained by pruned relaxation from each new terminal; exactness
    // is cross-checked against exhaustive distance scans in tests.
    near_dist: Vec<u32>,
    near_arrival: Vec<u32>,
    near_terminal: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

impl RoutingState {
    /// State with an empty terminal set; `route_request` errors until a
    /// terminal is added.
    pub fn empty(tree: SpanningTree) -> Self {
        let n = tree.vertex_count();
        RoutingState {
            tree,
            terminals: Vec::new(),
            arrival: vec![UNSET; n],
            congestion: vec![0; n],
            max_congestion: 0,
            path_log: Vec::new(),
            near_dist: vec![UNSET; n],
            near_arrival: vec![UNSET; n],
            near_terminal: vec![UNSET; n],
        }
    }

    /// State seeded with the first request, which routes nothing.
    pub fn new(tree: SpanningTree, first: u32) -> Self {
        let mut s = Self::empty(tree);
        s.add_terminal(first);
        s
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// Terminals in arrival order.
    pub fn terminals(&self) -> &[u32] {
        &self.terminals
    }

    pub fn is_terminal(&self, v: u32) -> bool {
        self.arrival[v as usize] != UNSET
    }

    pub fn path_log(&self) -> &[LoggedPath] {
        &self.path_log
    }

    pub fn max_congestion(&self) -> u32 {
        self.max_congestion
    }

    /// Congestion counter of a tree edge.
    pub fn congestion_of(&self, u: u32, v: u32) -> u32 {
        self.congestion[self.tree.edge_child(u, v) as usize]
    }

    /// All tree edges with their counters, in sorted edge order.
    pub fn edge_congestion(&self) -> Vec<((u32, u32), u32)> {
        self.tree
            .tree_edges()
            .iter()
            .map(|&(u, v)| ((u, v), self.congestion_of(u, v)))
            .collect()
    }

    /// The terminal a request at `r` would be routed to, with its tree
    /// distance. `None` while the terminal set is empty.
    pub fn nearest_terminal(&self, r: u32) -> Option<(u32, usize)> {
        if self.terminals.is_empty() {
            return None;
        }
        Some((
            self.near_terminal[r as usize],
            self.near_dist[r as usize] as usize,
        ))
    }

    /// Add `v` to the terminal set. No-op if already a terminal.
    pub fn add_terminal(&mut self, v: u32) {
        let n = self.tree.vertex_count();
        assert!((v as usize) < n, "terminal {v} out of range (n = {n})");
        if self.is_terminal(v) {
            return;
        }
        let a = self.terminals.len() as u32;
        self.arrival[v as usize] = a;
        self.terminals.push(v);

        // Relax (distance, arrival) outward from v; prune where an existing
        // terminal already wins lexicographically.
        let mut queue = VecDeque::new();
        if (0, a) < (self.near_dist[v as usize], self.near_arrival[v as usize]) {
            self.near_dist[v as usize] = 0;
            self.near_arrival[v as usize] = a;
            self.near_terminal[v as usize] = v;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            let d = self.near_dist[u as usize] + 1;
            for &w in self.tree.tree_neighbors(u) {
                if (d, a) < (self.near_dist[w as usize], self.near_arrival[w as usize]) {
                    self.near_dist[w as usize] = d;
                    self.near_arrival[w as usize] = a;
                    self.near_terminal[w as usize] = v;
                    queue.push_back(w);
                }
            }
        }
    }

    /// Route one unit of flow from `r` to the nearest prior terminal, log the
    /// path and bump the congestion counters along it.
    ///
    /// A request at an existing terminal routes to itself over the empty path
    /// and changes no counters.
    pub fn route_request(&mut self, r: u32) -> Result<RouteResult, RoutingError> {
        let n = self.tree.vertex_count();
        if r as usize >= n {
            return Err(RoutingError::VertexOutOfRange { vertex: r, n });
        }
        if self.terminals.is_empty() {
            return Err(RoutingError::NoTerminals);
        }
        if self.is_terminal(r) {
            return Ok(RouteResult {
                target: r,
                path: Vec::new(),
            });
        }
        let target = self.near_terminal[r as usize];
        let path = self.tree.path(r, target);
        debug_assert_eq!(path.len(), self.near_dist[r as usize] as usize);
        for &(x, y) in &path {
            let child = self.tree.edge_child(x, y) as usize;
            self.congestion[child] += 1;
            self.max_congestion = self.max_congestion.max(self.congestion[child]);
        }
        self.path_log.push(LoggedPath {
            request: r,
            target,
            edges: path.clone(),
        });
        Ok(RouteResult { target, path })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::line_graph;
    use crate::tree::{SpanningTree, TreeStrategy};

    fn line_tree(n: usize) -> SpanningTree {
        SpanningTree::build(&line_graph(n), TreeStrategy::Bfs, 0)
    }

    #[test]
    fn init_seeds_one_terminal_and_no_congestion() {
        let s = RoutingState::new(line_tree(8), 3);
        assert_eq!(s.terminals(), &[3]);
        assert_eq!(s.max_congestion(), 0);
        assert!(s.path_log().is_empty());
    }

    #[test]
    fn routing_the_only_terminal_is_a_no_op() {
        let mut s = RoutingState::new(line_tree(8), 3);
        let r = s.route_request(3).unwrap();
        assert_eq!(r.target, 3);
        assert_eq!(r.path_length(), 0);
        assert_eq!(s.max_congestion(), 0);
        assert!(s.path_log().is_empty());
    }

    #[test]
    fn single_candidate_terminal() {
        let mut s = RoutingState::new(line_tree(8), 5);
        let r = s.route_request(2).unwrap();
        assert_eq!(r.target, 5);
        assert_eq!(r.path_length(), 3);
        assert_eq!(s.max_congestion(), 1);
    }

    #[test]
    fn nearest_terminal_wins() {
        let mut s = RoutingState::new(line_tree(8), 0);
        s.add_terminal(7);
        let r = s.route_request(2).unwrap();
        assert_eq!(r.target, 0, "distance 2 beats distance 5");
        assert_eq!(r.path, vec![(2, 1), (1, 0)]);
    }

    #[test]
    fn tie_breaks_to_earliest_arrival() {
        let mut s = RoutingState::new(line_tree(3), 0);
        s.add_terminal(2);
        let r = s.route_request(1).unwrap();
        assert_eq!(r.target, 0, "tie at distance 1 goes to the first arrival");

        let mut s = RoutingState::new(line_tree(3), 2);
        s.add_terminal(0);
        let r = s.route_request(1).unwrap();
        assert_eq!(r.target, 2);
    }

    #[test]
    fn out_of_range_request_is_an_error() {
        let mut s = RoutingState::new(line_tree(4), 0);
        assert_eq!(
            s.route_request(9).unwrap_err(),
            RoutingError::VertexOutOfRange { vertex: 9, n: 4 }
        );
    }

    #[test]
    fn routing_with_no_terminals_is_an_error() {
        let mut s = RoutingState::empty(line_tree(4));
        assert_eq!(s.route_request(1).unwrap_err(), RoutingError::NoTerminals);
    }

    #[test]
    fn two_paths_sharing_an_edge_count_twice() {
        let mut s = RoutingState::new(line_tree(8), 4);
        s.route_request(3).unwrap();
        s.route_request(3).unwrap();
        assert_eq!(s.congestion_of(3, 4), 2);
        assert_eq!(s.max_congestion(), 2);
        assert_eq!(s.path_log().len(), 2);
    }

    #[test]
    fn counters_match_log_recount() {
        let mut s = RoutingState::new(line_tree(10), 9);
        for r in [0u32, 4, 7, 2, 6] {
            s.route_request(r).unwrap();
            s.add_terminal(r);
        }
        let mut recount = std::collections::BTreeMap::new();
        for p in s.path_log() {
            for &(x, y) in &p.edges {
                *recount.entry((x.min(y), x.max(y))).or_insert(0u32) += 1;
            }
        }
        for ((u, v), c) in s.edge_congestion() {
            assert_eq!(recount.get(&(u, v)).copied().unwrap_or(0), c);
        }
        assert_eq!(
            recount.values().copied().max().unwrap_or(0),
            s.max_congestion()
        );
    }

    #[test]
    fn add_terminal_is_idempotent() {
        let mut s = RoutingState::new(line_tree(5), 2);
        s.add_terminal(2);
        assert_eq!(s.terminals(), &[2]);
    }
}
