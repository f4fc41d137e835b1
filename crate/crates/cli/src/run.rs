//! `treelabel run`: one experiment, three artifacts (report, transcript,
//! path log), exit status wired to the bound check.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;

use treelabel::harness::experiment::{
    run_baseline_comparison, run_experiment, RunArtifacts, RunSpec, Seeds,
};

use crate::config::FileConfig;
use crate::error::CliError;
use crate::parse::{load_instance, parse_order, parse_tree};

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// natural, random, midpoint, odd-first or file:PATH
    #[arg(long)]
    pub order: Option<String>,
    /// bfs, dfs or random
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long)]
    pub root: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report output path
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[arg(long)]
    pub paths: Option<PathBuf>,
    #[arg(long)]
    pub c_cal: Option<f64>,
    /// Emit this token on the first query instead of no prediction
    #[arg(long)]
    pub first_token: Option<String>,
    /// Also run the neighbor-majority baseline comparison (odd-first order)
    /// with this fallback token; "auto" uses the last vertex's label
    #[arg(long)]
    pub fallback: Option<String>,
}

impl RunArgs {
    fn as_config(&self) -> FileConfig {
        FileConfig {
            graph: self.graph.clone(),
            labels: self.labels.clone(),
            order: self.order.clone(),
            tree: self.tree.clone(),
            root: self.root,
            seed: self.seed,
            out: self.out.clone(),
            transcript: self.transcript.clone(),
            paths: self.paths.clone(),
            c_cal: self.c_cal,
            first_token: self.first_token.clone(),
            fallback: self.fallback.clone(),
            ..FileConfig::default()
        }
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

pub fn write_jsonl<T: serde::Serialize>(path: &Path, items: &[T]) -> Result<(), CliError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut f, item)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let cfg = FileConfig::load_opt(args.config.as_ref())?.overridden_by(args.as_config());

    let graph_path = cfg
        .graph
        .clone()
        .ok_or_else(|| CliError::input("run needs --graph PATH"))?;
    let labels_path = cfg
        .labels
        .clone()
        .ok_or_else(|| CliError::input("run needs --labels PATH"))?;
    let order_name = cfg.order.clone().unwrap_or_else(|| "natural".into());
    let tree_name = cfg.tree.clone().unwrap_or_else(|| "bfs".into());
    let root = cfg.root.unwrap_or(0);
    let seed = cfg.seed.unwrap_or(0);
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("report.json"));
    let transcript_path = cfg
        .transcript
        .clone()
        .unwrap_or_else(|| sibling(&out, "transcript.jsonl"));
    let paths_path = cfg
        .paths
        .clone()
        .unwrap_or_else(|| sibling(&out, "paths.jsonl"));

    let (graph, labeling) = load_instance(&graph_path, &labels_path)?;
    if root as usize >= graph.vertex_count() {
        return Err(CliError::input(format!(
            "--root {root} out of range (n = {})",
            graph.vertex_count()
        )));
    }
    let order = parse_order(&order_name, &graph, seed)?;
    let tree_strategy = parse_tree(&tree_name, seed)?;

    let mut artifacts: RunArtifacts = run_experiment(&RunSpec {
        graph: &graph,
        labeling: &labeling,
        order: &order,
        tree_strategy,
        root,
        instance_desc: format!("file:{}", graph_path.display()),
        seeds: Seeds {
            order: Some(seed),
            tree: Some(seed),
            ..Seeds::default()
        },
        first_prediction: cfg.first_token.clone(),
    });

    artifacts.report.transcript_ref = Some(transcript_path.display().to_string());
    artifacts.report.config = serde_json::json!({
        "graph": graph_path,
        "labels": labels_path,
        "order": order.kind,
        "tree": tree_strategy,
        "root": root,
        "seed": seed,
        "c_cal": cfg.c_cal,
        "first_token": cfg.first_token,
        "fallback": cfg.fallback,
        "out": out,
        "transcript": transcript_path,
        "paths": paths_path,
    });

    write_jsonl(&transcript_path, &artifacts.transcript)?;
    write_jsonl(&paths_path, &artifacts.path_log)?;
    std::fs::write(&out, serde_json::to_string_pretty(&artifacts.report)?)?;

    let r = &artifacts.report;
    println!(
        "n={} m={} cut={} mistakes={} max_congestion={} bound={} satisfied={} witness={}",
        r.n,
        r.m,
        r.cut_size,
        r.mistakes,
        r.max_congestion,
        r.bound,
        r.bound_satisfied,
        r.charging_witness_found
    );
    println!("report: {}", out.display());

    if let Some(fallback) = &cfg.fallback {
        let fallback = (fallback != "auto").then(|| fallback.clone());
        let cmp = run_baseline_comparison(&graph, &labeling, tree_strategy, root, fallback);
        println!(
            "baseline comparison (odd-first, fallback={}): baseline_mistakes={} predictor_mistakes={}",
            cmp.fallback, cmp.baseline_mistakes, cmp.predictor_mistakes
        );
    }

    if !r.ledger_matches_recount {
        return Err(CliError::Internal(
            "congestion ledger disagrees with the path-log recount".into(),
        ));
    }
    if !r.bound_satisfied || !r.charging_witness_found {
        return Err(CliError::Violation(format!(
            "mistake bound violated: mistakes={} bound={} witness={}",
            r.mistakes, r.bound, r.charging_witness_found
        )));
    }
    Ok(())
}
