//! End-to-end experiment execution and reporting.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::harness::order::QueryOrder;
use crate::harness::verify::{verify_mistake_bound, MistakeBoundCheck};
use crate::labeling::{cut_set, Labeling};
use crate::predictor::{BaselineSession, PredictionSession, TranscriptEntry};
use crate::routing::{LoggedPath, RoutingError, RoutingState};
use crate::tree::{SpanningTree, TreeStrategy};

/// Seeds sufficient to reproduce a run, echoed into every report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeling: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<u64>,
}

/// Everything run_experiment needs; the caller owns instance generation so
/// file-driven and generated runs share one path.
pub struct RunSpec<'a> {
    pub graph: &'a Graph,
    pub labeling: &'a Labeling,
    pub order: &'a QueryOrder,
    pub tree_strategy: TreeStrategy,
    pub root: u32,
    pub instance_desc: String,
    pub seeds: Seeds,
    pub first_prediction: Option<String>,
}

/// The JSON report for one run: both sides of the mistake-bound inequality
/// plus the verification flags and the resolved configuration echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub cut_size: usize,
    pub mistakes: u32,
    pub max_congestion: u32,
    pub bound: u64,
    pub bound_satisfied: bool,
    pub charging_witness_found: bool,
    pub ledger_matches_recount: bool,
    pub order_kind: String,
    pub queries: usize,
    pub runtime_ms: u64,
    pub seeds: Seeds,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript_ref: Option<String>,
}

impl ExperimentReport {
    /// Equality modulo the wall-clock field, for reproducibility checks.
    pub fn same_outcome(&self, other: &ExperimentReport) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.runtime_ms = 0;
        b.runtime_ms = 0;
        a == b
    }
}

pub struct RunArtifacts {
    pub report: ExperimentReport,
    pub check: MistakeBoundCheck,
    pub transcript: Vec<TranscriptEntry>,
    pub path_log: Vec<LoggedPath>,
}

/// Play a full prediction session against the hidden labeling and verify the
/// mistake bound on the resulting artifacts.
pub fn run_experiment(spec: &RunSpec) -> RunArtifacts {
    let started = Instant::now();
    let tree = SpanningTree::build(spec.graph, spec.tree_strategy, spec.root);
    let mut session = match &spec.first_prediction {
        Some(tok) => PredictionSession::with_first_prediction(tree, tok),
        None => PredictionSession::new(tree),
    };
    for &v in &spec.order.sequence {
        session
            .predict(v)
            .expect("query order vertices are valid and rounds alternate");
        session
            .reveal(v, spec.labeling.token_of(v))
            .expect("reveal follows its own predict");
    }

    let cut = cut_set(spec.graph, spec.labeling);
    let check = verify_mistake_bound(session.transcript(), session.routing().path_log(), &cut);
    let ledger_matches_recount =
        session.routing().max_congestion() == check.recounted_max_congestion;
    let runtime_ms = started.elapsed().as_millis() as u64;

    let config = serde_json::json!({
        "instance": spec.instance_desc,
        "order": spec.order.kind,
        "tree": spec.tree_strategy,
        "root": spec.root,
        "seeds": spec.seeds,
        "first_prediction": spec.first_prediction,
    });

    let report = ExperimentReport {
        instance: spec.instance_desc.clone(),
        n: spec.graph.vertex_count(),
        m: spec.graph.edge_count(),
        cut_size: cut.size(),
        mistakes: check.mistakes,
        max_congestion: session.routing().max_congestion(),
        bound: check.bound,
        bound_satisfied: check.bound_satisfied,
        charging_witness_found: check.charging_witness_found && check.charge_within_congestion,
        ledger_matches_recount,
        order_kind: spec.order.kind.name().to_string(),
        queries: spec.order.len(),
        runtime_ms,
        seeds: spec.seeds,
        config,
        transcript_ref: None,
    };

    let (transcript, path_log) = {
        let t = session.transcript().to_vec();
        let p = session.routing().path_log().to_vec();
        (t, p)
    };

    RunArtifacts {
        report,
        check,
        transcript,
        path_log,
    }
}

/// Drive the routing engine alone over a request sequence: the first request
/// seeds the terminal set, every later one routes and then joins it.
pub fn drive_routing(tree: SpanningTree, sequence: &[u32]) -> Result<RoutingState, RoutingError> {
    let mut state = RoutingState::empty(tree);
    for &r in sequence {
        if !state.terminals().is_empty() {
            state.route_request(r)?;
        }
        state.add_terminal(r);
    }
    Ok(state)
}

/// Paired mistake counts: neighbor-majority baseline vs the routing
/// predictor, both on the odd-first order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub n: usize,
    pub cut_size: usize,
    pub order_kind: String,
    pub fallback: String,
    pub baseline_mistakes: u32,
    pub predictor_mistakes: u32,
    pub predictor_max_congestion: u32,
}

/// Run the comparison experiment on a line instance. The baseline's fallback
/// defaults to the label of the last vertex, i.e. the side the first-pass
/// queries of a half-split line do not touch first.
pub fn run_baseline_comparison(
    graph: &Graph,
    labeling: &Labeling,
    tree_strategy: TreeStrategy,
    root: u32,
    fallback: Option<String>,
) -> BaselineComparison {
    let n = graph.vertex_count();
    let order = QueryOrder::odd_first(n);
    let fallback = fallback.unwrap_or_else(|| labeling.token_of(n as u32 - 1).to_string());

    let mut baseline = BaselineSession::new(n, &fallback);
    for &v in &order.sequence {
        baseline.predict(v, graph).expect("valid order");
        baseline.reveal(v, labeling.token_of(v)).expect("own round");
    }

    let spec = RunSpec {
        graph,
        labeling,
        order: &order,
        tree_strategy,
        root,
        instance_desc: "baseline_comparison".into(),
        seeds: Seeds::default(),
        first_prediction: None,
    };
    let run = run_experiment(&spec);

    BaselineComparison {
        n,
        cut_size: run.report.cut_size,
        order_kind: order.kind.name().to_string(),
        fallback,
        baseline_mistakes: baseline.mistakes(),
        predictor_mistakes: run.report.mistakes,
        predictor_max_congestion: run.report.max_congestion,
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub cut: usize,
    pub mistakes: u32,
    pub max_congestion: u32,
    pub bound: u64,
    pub satisfied: bool,
    pub seed: u64,
    pub order_kind: String,
    pub runtime_ms: u64,
}

impl SweepRow {
    pub fn from_report(report: &ExperimentReport, seed: u64) -> SweepRow {
        SweepRow {
            family: report.instance.clone(),
            n: report.n,
            m: report.m,
            cut: report.cut_size,
            mistakes: report.mistakes,
            max_congestion: report.max_congestion,
            bound: report.bound,
            satisfied: report.bound_satisfied
                && report.charging_witness_found
                && report.ledger_matches_recount,
            seed,
            order_kind: report.order_kind.clone(),
            runtime_ms: report.runtime_ms,
        }
    }
}

/// Serialize sweep rows as CSV, header included; rows come out in input order.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "family",
            "n",
            "m",
            "cut",
            "mistakes",
            "max_congestion",
            "bound",
            "satisfied",
            "seed",
            "order_kind",
            "runtime_ms",
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares exponent `b` of `y ~ a * x^b`, fitted in log-log space.
/// Used to check that max congestion grows at most about linearly in log n.
pub fn fit_power_exponent(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "need at least two points to fit");
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.ln(), y.max(1.0).ln()))
        .collect();
    let k = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    (k * sxy - sx * sy) / (k * sxx - sx * sx)
}
