//! Shared flag parsing: families, labeling rules, orders, tree strategies.

use std::path::Path;

use treelabel::harness::instance::{Family, InstanceSpec, LabelingRule};
use treelabel::harness::order::QueryOrder;
use treelabel::{Graph, TreeStrategy};

use crate::error::CliError;

pub struct FamilyParams {
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub p: Option<f64>,
    pub seed: u64,
}

pub fn parse_family(name: &str, n: usize, params: &FamilyParams) -> Result<Family, CliError> {
    match name {
        "line" => Ok(Family::Line),
        "cycle" => Ok(Family::Cycle),
        "grid" => {
            let (width, height) = match (params.width, params.height) {
                (Some(w), Some(h)) => (w, h),
                (None, None) => auto_grid_dims(n),
                _ => {
                    return Err(CliError::input(
                        "grid needs both --width and --height (or neither)",
                    ))
                }
            };
            Ok(Family::Grid { width, height })
        }
        "random-tree" | "random_tree" => Ok(Family::RandomTree { seed: params.seed }),
        "gnp" => {
            let p = params
                .p
                .unwrap_or_else(|| (3.0 * (n as f64).ln() / n as f64).min(1.0));
            Ok(Family::GnpConnected {
                p,
                seed: params.seed,
            })
        }
        other => Err(CliError::input(format!(
            "unknown family {other:?}; expected line, cycle, grid, random-tree or gnp"
        ))),
    }
}

/// Near-square factorization for sweep grids.
pub fn auto_grid_dims(n: usize) -> (usize, usize) {
    let mut w = (n as f64).sqrt() as usize;
    while w > 1 && !n.is_multiple_of(w) {
        w -= 1;
    }
    (w.max(1), n / w.max(1))
}

pub struct LabelingParams {
    pub blocks: Option<usize>,
    pub target_cut: Option<usize>,
    pub seed: u64,
}

pub fn parse_labeling(name: &str, params: &LabelingParams) -> Result<LabelingRule, CliError> {
    match name {
        "half-split" | "half_split" => Ok(LabelingRule::HalfSplit),
        "k-blocks" | "k_blocks" => Ok(LabelingRule::KBlocks {
            k: params
                .blocks
                .ok_or_else(|| CliError::input("k-blocks labeling needs --blocks"))?,
        }),
        "random-cut" | "random_cut" => Ok(LabelingRule::RandomCut {
            target_cut: params
                .target_cut
                .ok_or_else(|| CliError::input("random-cut labeling needs --target-cut"))?,
            seed: params.seed,
        }),
        "constant" => Ok(LabelingRule::Constant),
        other => Err(CliError::input(format!(
            "unknown labeling {other:?}; expected half-split, k-blocks, random-cut or constant"
        ))),
    }
}

pub fn build_spec(
    family: &str,
    n: usize,
    labeling: &str,
    arity: usize,
    fam: &FamilyParams,
    lab: &LabelingParams,
) -> Result<InstanceSpec, CliError> {
    Ok(InstanceSpec {
        family: parse_family(family, n, fam)?,
        n,
        labeling: parse_labeling(labeling, lab)?,
        label_arity: arity,
    })
}

/// `natural`, `random`, `midpoint`, `odd-first` or `file:PATH`.
pub fn parse_order(name: &str, g: &Graph, seed: u64) -> Result<QueryOrder, CliError> {
    let n = g.vertex_count();
    match name {
        "natural" => Ok(QueryOrder::natural(n)),
        "random" => Ok(QueryOrder::random(n, seed)),
        "midpoint" => {
            if !g.is_line() {
                return Err(treelabel::harness::order::OrderError::NotALine.into());
            }
            Ok(QueryOrder::midpoint_attack(n))
        }
        "odd-first" | "odd_first" => Ok(QueryOrder::odd_first(n)),
        other => match other.strip_prefix("file:") {
            Some(path) => order_from_file(Path::new(path), n),
            None => Err(CliError::input(format!(
                "unknown order {other:?}; expected natural, random, midpoint, odd-first or file:PATH"
            ))),
        },
    }
}

fn order_from_file(path: &Path, n: usize) -> Result<QueryOrder, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read order file {}: {e}", path.display())))?;
    let mut sequence = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: u32 = line.parse().map_err(|_| {
            CliError::input(format!(
                "{}:{}: invalid vertex id {line:?}",
                path.display(),
                i + 1
            ))
        })?;
        sequence.push(v);
    }
    Ok(QueryOrder::custom(sequence, n)?)
}

pub fn parse_tree(name: &str, seed: u64) -> Result<TreeStrategy, CliError> {
    match name {
        "bfs" => Ok(TreeStrategy::Bfs),
        "dfs" => Ok(TreeStrategy::Dfs),
        "random" => Ok(TreeStrategy::Random { seed }),
        other => Err(CliError::input(format!(
            "unknown tree strategy {other:?}; expected bfs, dfs or random"
        ))),
    }
}

pub fn load_instance(
    graph_path: &Path,
    labels_path: &Path,
) -> Result<(Graph, treelabel::Labeling), CliError> {
    let graph_text = std::fs::read_to_string(graph_path)
        .map_err(|e| CliError::input(format!("cannot read graph {}: {e}", graph_path.display())))?;
    let graph = Graph::parse(&graph_text)
        .map_err(|e| CliError::input(format!("{}: {e}", graph_path.display())))?;
    let labels_text = std::fs::read_to_string(labels_path).map_err(|e| {
        CliError::input(format!("cannot read labels {}: {e}", labels_path.display()))
    })?;
    let labeling = treelabel::Labeling::parse(&labels_text, graph.vertex_count())
        .map_err(|e| CliError::input(format!("{}: {e}", labels_path.display())))?;
    Ok((graph, labeling))
}
