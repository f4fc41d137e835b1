//! `treelabel verify`: independent re-verification of a prior run's
//! artifacts. Rebuilds the tree, replays nothing — every check works from
//! the written transcript, path log and instance files alone.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;

use treelabel::harness::verify::recount_congestion;
use treelabel::{
    cut_set, Graph, Labeling, LoggedPath, SpanningTree, TranscriptEntry, TreeStrategy,
};

use crate::config::FileConfig;
use crate::error::CliError;
use crate::parse::{load_instance, parse_tree};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[arg(long)]
    pub paths: Option<PathBuf>,
    /// Read tree strategy, root and seed from this report's config echo
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long)]
    pub root: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        items.push(
            serde_json::from_str(line)
                .map_err(|e| CliError::input(format!("{}:{}: {e}", path.display(), i + 1)))?,
        );
    }
    Ok(items)
}

struct Checker {
    failed: Vec<String>,
}

impl Checker {
    fn new() -> Checker {
        Checker { failed: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            println!("check {name}: ok");
        } else {
            let detail = detail();
            println!("check {name}: FAILED — {detail}");
            self.failed.push(name.to_string());
        }
    }
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = FileConfig::load_opt(args.config.as_ref())?;

    let graph_path = args
        .graph
        .clone()
        .or(cfg.graph)
        .ok_or_else(|| CliError::input("verify needs --graph PATH"))?;
    let labels_path = args
        .labels
        .clone()
        .or(cfg.labels)
        .ok_or_else(|| CliError::input("verify needs --labels PATH"))?;
    let transcript_path = args
        .transcript
        .clone()
        .or(cfg.transcript)
        .ok_or_else(|| CliError::input("verify needs --transcript PATH"))?;
    let paths_path = args
        .paths
        .clone()
        .or(cfg.paths)
        .ok_or_else(|| CliError::input("verify needs --paths PATH"))?;

    let (graph, labeling) = load_instance(&graph_path, &labels_path)?;
    let transcript: Vec<TranscriptEntry> = read_jsonl(&transcript_path)?;
    let path_log: Vec<LoggedPath> = read_jsonl(&paths_path)?;

    // Tree configuration: flags beat the report's config echo beats defaults.
    let (mut tree_name, mut root, mut seed) = ("bfs".to_string(), 0u32, 0u64);
    if let Some(report_path) = &args.report {
        let text = std::fs::read_to_string(report_path)?;
        let report: serde_json::Value = serde_json::from_str(&text)?;
        let config = &report["config"];
        if let Some(t) = config["tree"]["strategy"].as_str() {
            tree_name = t.to_string();
        }
        if let Some(s) = config["tree"]["seed"].as_u64() {
            seed = s;
        }
        if let Some(r) = config["root"].as_u64() {
            root = r as u32;
        }
        if let Some(s) = config["seed"].as_u64() {
            seed = s;
        }
    }
    if let Some(t) = &args.tree {
        tree_name = t.clone();
    }
    if let Some(r) = args.root {
        root = r;
    }
    if let Some(s) = args.seed {
        seed = s;
    }
    let strategy: TreeStrategy = parse_tree(&tree_name, seed)?;
    if root as usize >= graph.vertex_count() {
        return Err(CliError::input(format!(
            "--root {root} out of range (n = {})",
            graph.vertex_count()
        )));
    }

    // Range-check every vertex id before the checks index into arrays.
    let n = graph.vertex_count();
    let in_range = |v: u32| (v as usize) < n;
    for e in &transcript {
        if !in_range(e.vertex) || e.path_target.is_some_and(|t| !in_range(t)) {
            return Err(CliError::input(format!(
                "transcript entry {} references a vertex outside 0..{n}",
                e.index
            )));
        }
    }
    for (i, p) in path_log.iter().enumerate() {
        let vertices = std::iter::once(p.request)
            .chain(std::iter::once(p.target))
            .chain(p.edges.iter().flat_map(|&(x, y)| [x, y]));
        for v in vertices {
            if !in_range(v) {
                return Err(CliError::input(format!(
                    "path log entry {i} references vertex {v} outside 0..{n}"
                )));
            }
        }
    }

    let tree = SpanningTree::build(&graph, strategy, root);

    let mut checker = Checker::new();
    run_checks(
        &mut checker,
        &graph,
        &labeling,
        &tree,
        &transcript,
        &path_log,
    );

    if checker.failed.is_empty() {
        println!(
            "verification passed ({} transcript entries)",
            transcript.len()
        );
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "verification failed: {}",
            checker.failed.join(", ")
        )))
    }
}

fn run_checks(
    c: &mut Checker,
    graph: &Graph,
    labeling: &Labeling,
    tree: &SpanningTree,
    transcript: &[TranscriptEntry],
    path_log: &[LoggedPath],
) {
    let cut = cut_set(graph, labeling);

    // Indexes are dense, the first entry is uncounted and unrouted.
    let structure_ok = transcript.iter().enumerate().all(|(i, e)| e.index == i)
        && transcript
            .first()
            .is_none_or(|e| !e.counted && e.path_target.is_none());
    c.check("artifact-structure", structure_ok, || {
        "transcript indexes must be dense and the first entry uncounted and unrouted".into()
    });

    let bad_label = transcript
        .iter()
        .find(|e| e.revealed != labeling.token_of(e.vertex));
    c.check("labels-consistency", bad_label.is_none(), || {
        let e = bad_label.unwrap();
        format!(
            "entry {} reveals {:?} for vertex {} but the labels file says {:?}",
            e.index,
            e.revealed,
            e.vertex,
            labeling.token_of(e.vertex)
        )
    });

    let bad_counted = transcript.iter().find(|e| e.counted != (e.index > 0));
    c.check("counted-flags", bad_counted.is_none(), || {
        format!(
            "entry {} has counted = {}; only the first query is uncounted",
            bad_counted.unwrap().index,
            bad_counted.unwrap().counted
        )
    });

    let bad_mistake = transcript
        .iter()
        .find(|e| e.mistake != (e.counted && e.predicted.as_deref() != Some(e.revealed.as_str())));
    c.check("mistake-flags", bad_mistake.is_none(), || {
        format!(
            "entry {} has an inconsistent mistake flag",
            bad_mistake.unwrap().index
        )
    });

    // First reveal index per vertex, i.e. terminal arrival order.
    let mut first_seen: BTreeMap<u32, usize> = BTreeMap::new();
    for e in transcript {
        first_seen.entry(e.vertex).or_insert(e.index);
    }

    // Re-queries answer from memory with the previously revealed label.
    let bad_memory = transcript.iter().find(|e| {
        e.index > 0
            && e.path_target.is_none()
            && (first_seen[&e.vertex] == e.index
                || e.predicted.as_deref() != Some(labeling.token_of(e.vertex)))
    });
    c.check("memory-predictions", bad_memory.is_none(), || {
        format!(
            "entry {} routed nothing but is not a memory answer",
            bad_memory.unwrap().index
        )
    });

    // Routed entries pair with the path log in order.
    let routed: Vec<&TranscriptEntry> = transcript
        .iter()
        .filter(|e| e.path_target.is_some())
        .collect();
    let pairing_ok = routed.len() == path_log.len()
        && routed.iter().zip(path_log.iter()).all(|(e, p)| {
            p.request == e.vertex
                && Some(p.target) == e.path_target
                && p.edges.len() == e.path_length
        });
    c.check("path-pairing", pairing_ok, || {
        format!(
            "{} routed entries vs {} logged paths, or fields disagree",
            routed.len(),
            path_log.len()
        )
    });

    if pairing_ok {
        let bad_path = routed
            .iter()
            .zip(path_log.iter())
            .find(|(_, p)| p.edges != tree.path(p.request, p.target));
        c.check("path-validity", bad_path.is_none(), || {
            let (_, p) = bad_path.unwrap();
            format!(
                "logged path {} -> {} is not the tree path",
                p.request, p.target
            )
        });

        let bad_terminal = routed.iter().find(|e| {
            let t = e.path_target.unwrap();
            first_seen.get(&t).is_none_or(|&i| i >= e.index)
        });
        c.check("terminal-order", bad_terminal.is_none(), || {
            format!(
                "entry {} routes to a target not revealed strictly earlier",
                bad_terminal.unwrap().index
            )
        });

        // The chosen target must be the nearest prior terminal, earliest
        // arrival on ties.
        let arrival_order: Vec<u32> = {
            let mut order: Vec<(usize, u32)> = first_seen.iter().map(|(&v, &i)| (i, v)).collect();
            order.sort_unstable();
            order.into_iter().map(|(_, v)| v).collect()
        };
        let bad_choice = routed.iter().find(|e| {
            let prior: Vec<u32> = arrival_order
                .iter()
                .copied()
                .filter(|&t| first_seen[&t] < e.index)
                .collect();
            let best = prior
                .iter()
                .map(|&t| tree.distance(e.vertex, t))
                .min()
                .expect("routed entries have prior terminals");
            let expected = prior
                .iter()
                .copied()
                .find(|&t| tree.distance(e.vertex, t) == best)
                .unwrap();
            e.path_target != Some(expected)
        });
        c.check("nearest-terminal", bad_choice.is_none(), || {
            format!(
                "entry {} did not route to the nearest earliest terminal",
                bad_choice.unwrap().index
            )
        });

        let bad_source = routed
            .iter()
            .find(|e| e.predicted.as_deref() != Some(labeling.token_of(e.path_target.unwrap())));
        c.check("prediction-source", bad_source.is_none(), || {
            format!(
                "entry {} predicted something other than its target's label",
                bad_source.unwrap().index
            )
        });
    }

    // Both sides of the bound from recounts only.
    let recount = recount_congestion(path_log);
    let max_congestion = recount.values().copied().max().unwrap_or(0);
    let mistakes = transcript
        .iter()
        .filter(|e| e.counted && e.predicted.as_deref() != Some(e.revealed.as_str()))
        .count() as u64;
    let bound = max_congestion as u64 * cut.size() as u64;
    c.check("congestion-bound", mistakes <= bound, || {
        format!(
            "{mistakes} mistakes exceed bound {bound} (= {max_congestion} x {})",
            cut.size()
        )
    });

    let mut charges: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut uncharged = None;
    for (e, p) in routed_mistakes(transcript, path_log) {
        let edge = p
            .edges
            .iter()
            .map(|&(x, y)| (x.min(y), x.max(y)))
            .find(|&(u, v)| cut.contains(u, v));
        match edge {
            Some(edge) => *charges.entry(edge).or_insert(0) += 1,
            None => uncharged = Some(e.index),
        }
    }
    let overcharged = charges.values().any(|&ch| ch > max_congestion);
    c.check(
        "charging-witness",
        uncharged.is_none() && !overcharged,
        || match uncharged {
            Some(i) => format!("mistake at entry {i} crosses no cut edge"),
            None => "a cut edge absorbed more charges than the congestion".into(),
        },
    );
}

fn routed_mistakes<'a>(
    transcript: &'a [TranscriptEntry],
    path_log: &'a [LoggedPath],
) -> Vec<(&'a TranscriptEntry, &'a LoggedPath)> {
    transcript
        .iter()
        .filter(|e| e.path_target.is_some())
        .zip(path_log.iter())
        .filter(|(e, _)| e.counted && e.predicted.as_deref() != Some(e.revealed.as_str()))
        .collect()
}
