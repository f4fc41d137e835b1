//! Deterministic instance generators: graph families and labeling rules.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::labeling::Labeling;
use crate::tree::{SpanningTree, TreeStrategy};

/// Rejection-sampling cap for connected G(n, p) draws.
pub const GNP_RETRY_CAP: usize = 1000;

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("connectivity rejection cap ({cap}) exceeded for gnp with n = {n}, p = {p}; raise p")]
    ConnectivityCapExceeded { n: usize, p: f64, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Line,
    Cycle,
    Grid { width: usize, height: usize },
    RandomTree { seed: u64 },
    GnpConnected { p: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LabelingRule {
    /// First half of the vertex ids one token, second half another.
    HalfSplit,
    /// `k` contiguous id blocks, tokens cycling through the palette.
    KBlocks {
        k: usize,
    },
    /// Regions formed by cutting `target_cut` edges out of a random spanning
    /// tree; tokens assigned round-robin over a shuffled region order. The
    /// realized cut size is whatever the cut oracle measures.
    RandomCut {
        target_cut: usize,
        seed: u64,
    },
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    #[serde(flatten)]
    pub labeling: LabelingRule,
    pub label_arity: usize,
}

/// Token palette: the binary case uses the +1/-1 convention, larger sets use
/// letters.
pub fn label_palette(arity: usize) -> Vec<String> {
    assert!(arity >= 1, "label arity must be at least 1");
    if arity == 2 {
        return vec!["+1".into(), "-1".into()];
    }
    (0..arity)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("t{i}")
            }
        })
        .collect()
}

impl InstanceSpec {
    pub fn family_name(&self) -> String {
        match self.family {
            Family::Line => "line".into(),
            Family::Cycle => "cycle".into(),
            Family::Grid { width, height } => format!("grid:{width}x{height}"),
            Family::RandomTree { .. } => "random_tree".into(),
            Family::GnpConnected { .. } => "gnp".into(),
        }
    }

    pub fn generate(&self) -> Result<(Graph, Labeling), GenerateError> {
        let graph = self.generate_graph()?;
        let labeling = self.generate_labeling(&graph)?;
        Ok((graph, labeling))
    }

    fn generate_graph(&self) -> Result<Graph, GenerateError> {
        let n = self.n;
        let graph = match self.family {
            Family::Line => {
                if n < 2 {
                    return Err(GenerateError::InvalidSpec("line needs n >= 2".into()));
                }
                crate::graph::line_graph(n)
            }
            Family::Cycle => {
                if n < 3 {
                    return Err(GenerateError::InvalidSpec("cycle needs n >= 3".into()));
                }
                let mut edges: Vec<(u32, u32)> =
                    (0..n - 1).map(|i| (i as u32, i as u32 + 1)).collect();
                edges.push((0, n as u32 - 1));
                Graph::from_edges(n, edges).expect("cycle is valid")
            }
            Family::Grid { width, height } => {
                if width * height != n || n < 2 {
                    return Err(GenerateError::InvalidSpec(format!(
                        "grid {width}x{height} does not match n = {n}"
                    )));
                }
                let id = |x: usize, y: usize| (y * width + x) as u32;
                let mut edges = Vec::new();
                for y in 0..height {
                    for x in 0..width {
                        if x + 1 < width {
                            edges.push((id(x, y), id(x + 1, y)));
                        }
                        if y + 1 < height {
                            edges.push((id(x, y), id(x, y + 1)));
                        }
                    }
                }
                Graph::from_edges(n, edges).expect("grid is valid")
            }
            Family::RandomTree { seed } => {
                if n < 2 {
                    return Err(GenerateError::InvalidSpec(
                        "random_tree needs n >= 2".into(),
                    ));
                }
                random_tree(n, seed)
            }
            Family::GnpConnected { p, seed } => {
                if n < 2 || !(0.0..=1.0).contains(&p) {
                    return Err(GenerateError::InvalidSpec(format!(
                        "gnp needs n >= 2 and p in [0, 1], got n = {n}, p = {p}"
                    )));
                }
                gnp_connected(n, p, seed)?
            }
        };
        Ok(graph)
    }

    fn generate_labeling(&self, graph: &Graph) -> Result<Labeling, GenerateError> {
        let n = graph.vertex_count();
        let palette = label_palette(self.label_arity.max(1));
        let tokens: Vec<String> = match self.labeling {
            LabelingRule::HalfSplit => {
                if self.label_arity != 2 {
                    return Err(GenerateError::InvalidSpec(
                        "half_split requires label arity 2".into(),
                    ));
                }
                (0..n)
                    .map(|v| palette[usize::from(v >= n / 2)].clone())
                    .collect()
            }
            LabelingRule::KBlocks { k } => {
                if k == 0 || k > n {
                    return Err(GenerateError::InvalidSpec(format!(
                        "k_blocks needs 1 <= k <= n, got k = {k}"
                    )));
                }
                let block = n.div_ceil(k);
                (0..n)
                    .map(|v| palette[(v / block) % palette.len()].clone())
                    .collect()
            }
            LabelingRule::RandomCut { target_cut, seed } => {
                random_cut_tokens(graph, target_cut, seed, &palette)
            }
            LabelingRule::Constant => vec![palette[0].clone(); n],
        };
        Ok(Labeling::from_tokens(tokens).expect("palette tokens are valid"))
    }
}

/// Uniform random labeled tree via Prüfer decoding.
fn random_tree(n: usize, seed: u64) -> Graph {
    if n == 2 {
        return Graph::from_edges(2, [(0, 1)]).expect("valid");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<u32> = (0..n - 2).map(|_| rng.random_range(0..n as u32)).collect();

    let mut degree = vec![1u32; n];
    for &x in &seq {
        degree[x as usize] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = (0..n as u32)
        .filter(|&v| degree[v as usize] == 1)
        .map(std::cmp::Reverse)
        .collect();

    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, x));
        degree[x as usize] -= 1;
        if degree[x as usize] == 1 {
            leaves.push(std::cmp::Reverse(x));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::from_edges(n, edges).expect("Prüfer decode yields a tree")
}

fn gnp_connected(n: usize, p: f64, seed: u64) -> Result<Graph, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GNP_RETRY_CAP {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        match Graph::from_edges(n, edges) {
            Ok(g) => return Ok(g),
            Err(crate::graph::GraphError::Disconnected { .. }) => continue,
            Err(e) => unreachable!("gnp generates simple edge lists: {e}"),
        }
    }
    Err(GenerateError::ConnectivityCapExceeded {
        n,
        p,
        cap: GNP_RETRY_CAP,
    })
}

/// Cut a random spanning tree into regions and color them round-robin.
fn random_cut_tokens(
    graph: &Graph,
    target_cut: usize,
    seed: u64,
    palette: &[String],
) -> Vec<String> {
    let n = graph.vertex_count();
    let tree = SpanningTree::build(graph, TreeStrategy::Random { seed }, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e3779b97f4a7c15));

    let mut edge_idx: Vec<usize> = (0..tree.tree_edges().len()).collect();
    edge_idx.shuffle(&mut rng);
    let cuts: std::collections::BTreeSet<usize> =
        edge_idx.into_iter().take(target_cut.min(n - 1)).collect();

    // Regions = tree components after removing the sampled edges.
    let mut region = vec![usize::MAX; n];
    let mut regions = 0usize;
    for start in 0..n as u32 {
        if region[start as usize] != usize::MAX {
            continue;
        }
        region[start as usize] = regions;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in tree.tree_neighbors(u) {
                let e = (u.min(v), u.max(v));
                let idx = tree
                    .tree_edges()
                    .binary_search(&e)
                    .expect("tree neighbor implies tree edge");
                if cuts.contains(&idx) || region[v as usize] != usize::MAX {
                    continue;
                }
                region[v as usize] = regions;
                stack.push(v);
            }
        }
        regions += 1;
    }

    let mut order: Vec<usize> = (0..regions).collect();
    order.shuffle(&mut rng);
    let mut color = vec![0usize; regions];
    for (rank, &r) in order.iter().enumerate() {
        color[r] = rank % palette.len();
    }
    region
        .into_iter()
        .map(|r| palette[color[r]].clone())
        .collect()
}
