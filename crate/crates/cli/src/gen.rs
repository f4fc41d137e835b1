//! `treelabel gen`: write a graph and labels file pair.

use std::path::PathBuf;

use clap::Args;

use crate::config::FileConfig;
use crate::error::CliError;
use crate::parse::{build_spec, FamilyParams, LabelingParams};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// line, cycle, grid, random-tree or gnp
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Edge probability for gnp
    #[arg(long)]
    pub p: Option<f64>,
    /// half-split, k-blocks, random-cut or constant
    #[arg(long)]
    pub labeling: Option<String>,
    #[arg(long)]
    pub arity: Option<usize>,
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub target_cut: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path for the graph file
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Output path for the labels file
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

impl GenArgs {
    fn as_config(&self) -> FileConfig {
        FileConfig {
            family: self.family.clone(),
            n: self.n,
            width: self.width,
            height: self.height,
            p: self.p,
            labeling: self.labeling.clone(),
            arity: self.arity,
            blocks: self.blocks,
            target_cut: self.target_cut,
            seed: self.seed,
            graph: self.graph.clone(),
            labels: self.labels.clone(),
            ..FileConfig::default()
        }
    }
}

pub fn run(args: &GenArgs) -> Result<(), CliError> {
    let cfg = FileConfig::load_opt(args.config.as_ref())?.overridden_by(args.as_config());

    let n = cfg.n.ok_or_else(|| CliError::input("gen needs --n"))?;
    let family = cfg.family.as_deref().unwrap_or("line");
    let labeling = cfg.labeling.as_deref().unwrap_or("half-split");
    let arity = cfg.arity.unwrap_or(2);
    let seed = cfg.seed.unwrap_or(0);
    let graph_path = cfg
        .graph
        .clone()
        .ok_or_else(|| CliError::input("gen needs --graph PATH"))?;
    let labels_path = cfg
        .labels
        .clone()
        .ok_or_else(|| CliError::input("gen needs --labels PATH"))?;

    let spec = build_spec(
        family,
        n,
        labeling,
        arity,
        &FamilyParams {
            width: cfg.width,
            height: cfg.height,
            p: cfg.p,
            seed,
        },
        &LabelingParams {
            blocks: cfg.blocks,
            target_cut: cfg.target_cut,
            seed,
        },
    )?;
    let (graph, labels) = spec.generate()?;

    let echo = serde_json::to_string(&serde_json::json!({
        "spec": spec,
        "seed": seed,
        "graph": graph_path,
        "labels": labels_path,
    }))?;
    let graph_text = format!("# treelabel gen {echo}\n{}", graph.to_edge_list());
    std::fs::write(&graph_path, graph_text)?;
    std::fs::write(&labels_path, labels.to_lines())?;

    println!(
        "wrote {} ({} vertices, {} edges) and {} ({} labels)",
        graph_path.display(),
        graph.vertex_count(),
        graph.edge_count(),
        labels_path.display(),
        labels.arity()
    );
    Ok(())
}
