//! Rooted spanning trees with exact lowest-common-ancestor and path queries.
//!
//! Construction is deterministic given `(strategy, seed, root)`: BFS and DFS
//! visit neighbors in ascending order, and the `Random` strategy draws edges
//! in a seeded shuffle. Ancestor-jump tables are built once per tree so that
//! distance and path extraction run in O(log n) and O(path) respectively.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum TreeStrategy {
    Bfs,
    Dfs,
    Random { seed: u64 },
}

impl TreeStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            TreeStrategy::Bfs => "bfs",
            TreeStrategy::Dfs => "dfs",
            TreeStrategy::Random { .. } => "random",
        }
    }
}

/// A rooted spanning tree of a connected graph.
///
/// The root's parent is itself; every other vertex's depth is one more than
/// its parent's.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    n: usize,
    root: u32,
    parent: Vec<u32>,
    depth: Vec<u32>,
    tree_edges: Vec<(u32, u32)>,
    tree_adj: Vec<Vec<u32>>,
    up: Vec<Vec<u32>>,
}

impl SpanningTree {
    pub fn build(g: &Graph, strategy: TreeStrategy, root: u32) -> SpanningTree {
        let n = g.vertex_count();
        assert!((root as usize) < n, "root {root} out of range (n = {n})");
        let parent = match strategy {
            TreeStrategy::Bfs => bfs_parents(g, root),
            TreeStrategy::Dfs => dfs_parents(g, root),
            TreeStrategy::Random { seed } => random_parents(g, root, seed),
        };
        Self::from_parents(n, root, parent)
    }

    fn from_parents(n: usize, root: u32, parent: Vec<u32>) -> SpanningTree {
        let mut tree_edges: Vec<(u32, u32)> = (0..n as u32)
            .filter(|&v| v != root)
            .map(|v| {
                let p = parent[v as usize];
                (v.min(p), v.max(p))
            })
            .collect();
        tree_edges.sort_unstable();

        let mut tree_adj = vec![Vec::new(); n];
        for &(u, v) in &tree_edges {
            tree_adj[u as usize].push(v);
            tree_adj[v as usize].push(u);
        }
        for nbrs in &mut tree_adj {
            nbrs.sort_unstable();
        }

        // Depths via BFS over the tree itself; parent arrays from any
        // strategy yield the same result.
        let mut depth = vec![0u32; n];
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let mut head = 0;
        let mut seen = vec![false; n];
        seen[root as usize] = true;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &tree_adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    depth[v as usize] = depth[u as usize] + 1;
                    order.push(v);
                }
            }
        }

        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = Vec::with_capacity(levels);
        up.push(parent.clone());
        for k in 1..levels {
            let prev = &up[k - 1];
            let next: Vec<u32> = (0..n).map(|v| prev[prev[v] as usize]).collect();
            up.push(next);
        }

        SpanningTree {
            n,
            root,
            parent,
            depth,
            tree_edges,
            tree_adj,
            up,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn parent(&self, v: u32) -> u32 {
        self.parent[v as usize]
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    /// The n-1 tree edges in sorted normalized order.
    pub fn tree_edges(&self) -> &[(u32, u32)] {
        &self.tree_edges
    }

    /// Neighbors of `v` within the tree, ascending.
    pub fn tree_neighbors(&self, v: u32) -> &[u32] {
        &self.tree_adj[v as usize]
    }

    pub fn is_tree_edge(&self, u: u32, v: u32) -> bool {
        self.parent[u as usize] == v || self.parent[v as usize] == u
    }

    /// The deeper endpoint of a tree edge; tree edges are indexed by it.
    pub fn edge_child(&self, u: u32, v: u32) -> u32 {
        debug_assert!(self.is_tree_edge(u, v), "({u}, {v}) is not a tree edge");
        if self.parent[u as usize] == v {
            u
        } else {
            v
        }
    }

    fn ancestor_at(&self, v: u32, target_depth: u32) -> u32 {
        let mut v = v;
        let mut diff = self.depth[v as usize] - target_depth;
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                v = self.up[k][v as usize];
            }
            diff >>= 1;
            k += 1;
        }
        v
    }

    pub fn lca(&self, u: u32, v: u32) -> u32 {
        let (mut u, mut v) = (u, v);
        let d = self.depth[u as usize].min(self.depth[v as usize]);
        u = self.ancestor_at(u, d);
        v = self.ancestor_at(v, d);
        if u == v {
            return u;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][u as usize] != self.up[k][v as usize] {
                u = self.up[k][u as usize];
                v = self.up[k][v as usize];
            }
        }
        self.parent[u as usize]
    }

    /// Hop count of the unique u-v path.
    pub fn distance(&self, u: u32, v: u32) -> usize {
        let w = self.lca(u, v);
        (self.depth[u as usize] + self.depth[v as usize] - 2 * self.depth[w as usize]) as usize
    }

    /// The unique simple u-v path as oriented steps `(from, to)`; empty when
    /// `u == v`. The first step leaves `u` and the last step enters `v`.
    pub fn path(&self, u: u32, v: u32) -> Vec<(u32, u32)> {
        let w = self.lca(u, v);
        let mut steps = Vec::with_capacity(self.distance(u, v));
        let mut x = u;
        while x != w {
            let p = self.parent[x as usize];
            steps.push((x, p));
            x = p;
        }
        let mut tail = Vec::new();
        let mut y = v;
        while y != w {
            let p = self.parent[y as usize];
            tail.push((p, y));
            y = p;
        }
        tail.reverse();
        steps.extend(tail);
        steps
    }
}

fn bfs_parents(g: &Graph, root: u32) -> Vec<u32> {
    let n = g.vertex_count();
    let mut parent = vec![u32::MAX; n];
    parent[root as usize] = root;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if parent[v as usize] == u32::MAX {
                parent[v as usize] = u;
                queue.push_back(v);
            }
        }
    }
    parent
}

fn dfs_parents(g: &Graph, root: u32) -> Vec<u32> {
    let n = g.vertex_count();
    let mut parent = vec![u32::MAX; n];
    parent[root as usize] = root;
    // Iterative with per-vertex neighbor cursors so parents are assigned at
    // visit time, exactly as recursive ascending-order DFS would.
    let mut cursor = vec![0usize; n];
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        let nbrs = g.neighbors(u);
        let mut descended = false;
        while cursor[u as usize] < nbrs.len() {
            let v = nbrs[cursor[u as usize]];
            cursor[u as usize] += 1;
            if parent[v as usize] == u32::MAX {
                parent[v as usize] = u;
                stack.push(v);
                descended = true;
                break;
            }
        }
        if !descended {
            stack.pop();
        }
    }
    parent
}

fn random_parents(g: &Graph, root: u32, seed: u64) -> Vec<u32> {
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
    edges.shuffle(&mut rng);

    // Kruskal over the shuffled order.
    let mut dsu: Vec<u32> = (0..n as u32).collect();
    fn find(dsu: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while dsu[r as usize] != r {
            r = dsu[r as usize];
        }
        let mut c = x;
        while dsu[c as usize] != r {
            let next = dsu[c as usize];
            dsu[c as usize] = r;
            c = next;
        }
        r
    }
    let mut tree_adj = vec![Vec::new(); n];
    let mut picked = 0;
    for (u, v) in edges {
        let (ru, rv) = (find(&mut dsu, u), find(&mut dsu, v));
        if ru != rv {
            dsu[ru as usize] = rv;
            tree_adj[u as usize].push(v);
            tree_adj[v as usize].push(u);
            picked += 1;
            if picked + 1 == n {
                break;
            }
        }
    }
    for nbrs in &mut tree_adj {
        nbrs.sort_unstable();
    }

    let mut parent = vec![u32::MAX; n];
    parent[root as usize] = root;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &tree_adj[u as usize] {
            if parent[v as usize] == u32::MAX {
                parent[v as usize] = u;
                queue.push_back(v);
            }
        }
    }
    parent
}
