//! Online graph label prediction by low-congestion routing on spanning trees.
//!
//! An adversary queries vertex labels one at a time; each answer is the label
//! of the previously-revealed vertex that the routing engine connects the
//! query to on a spanning tree. Because every wrong answer forces the routed
//! path across a cut edge, the mistake count is bounded by the maximum edge
//! congestion times the cut size — an inequality this crate both enforces in
//! its predictor and re-verifies per run from raw artifacts.
//!
//! Modules:
//! - [`graph`], [`labeling`]: validated graphs, opaque label tokens, cuts.
//! - [`tree`]: spanning-tree construction and O(log n) path queries.
//! - [`routing`]: the online nearest-terminal router with its congestion
//!   ledger and append-only path log.
//! - [`predictor`]: the routing predictor and the neighbor-majority baseline.
//! - [`harness`]: generators, adversarial orders, verification, experiments
//!   and congestion calibration.

pub mod graph;
pub mod harness;
pub mod labeling;
pub mod predictor;
pub mod routing;
pub mod tree;

pub use graph::{line_graph, Graph, GraphError};
pub use labeling::{cut_set, CutSet, Labeling, LabelingError};
pub use predictor::{BaselineSession, PredictionSession, SessionError, TranscriptEntry};
pub use routing::{LoggedPath, RouteResult, RoutingError, RoutingState};
pub use tree::{SpanningTree, TreeStrategy};
