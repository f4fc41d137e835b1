//! Online label prediction sessions with exact mistake accounting.
//!
//! [`PredictionSession`] answers each query with the label of the terminal
//! its routing engine connects the query to; [`BaselineSession`] predicts
//! from the majority label of already-labeled neighbors. Both follow the
//! strict predict/reveal alternation and exclude the first query from the
//! mistake count.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::routing::RoutingState;
use crate::tree::SpanningTree;

#[derive(Debug, Error, PartialEq)]
pub enum SessionError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("predict called while the query on vertex {pending} is unanswered")]
    PredictWhilePending { pending: u32 },
    #[error("reveal called with no pending query")]
    RevealWithoutQuery,
    #[error("reveal for vertex {got} but the pending query is {expected}")]
    RevealVertexMismatch { got: u32, expected: u32 },
}

/// One predict/reveal round, as exported to transcript JSON lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub index: usize,
    pub vertex: u32,
    pub predicted: Option<String>,
    pub revealed: String,
    pub counted: bool,
    pub mistake: bool,
    pub path_target: Option<u32>,
    pub path_length: usize,
}

#[derive(Debug)]
struct Pending {
    vertex: u32,
    predicted: Option<String>,
    path_target: Option<u32>,
    path_length: usize,
}

/// Online prediction over a spanning tree's routing engine.
///
/// The true labeling is never visible here; the caller reveals one label per
/// round. Queries on already-revealed vertices answer from memory and bypass
/// routing, so the congestion ledger counts only informative requests.
#[derive(Debug)]
pub struct PredictionSession {
    routing: RoutingState,
    known: Vec<Option<String>>,
    mistakes: u32,
    transcript: Vec<TranscriptEntry>,
    pending: Option<Pending>,
    first_prediction: Option<String>,
}

impl PredictionSession {
    pub fn new(tree: SpanningTree) -> Self {
        let n = tree.vertex_count();
        PredictionSession {
            routing: RoutingState::empty(tree),
            known: vec![None; n],
            mistakes: 0,
            transcript: Vec::new(),
            pending: None,
            first_prediction: None,
        }
    }

    /// Emit `token` instead of no prediction on the first query. The first
    /// round stays uncounted either way.
    pub fn with_first_prediction(tree: SpanningTree, token: &str) -> Self {
        let mut s = Self::new(tree);
        s.first_prediction = Some(token.to_string());
        s
    }

    fn n(&self) -> usize {
        self.known.len()
    }

    /// Predict the label of `v`. Returns `None` only on the first query,
    /// where no information exists.
    pub fn predict(&mut self, v: u32) -> Result<Option<String>, SessionError> {
        let n = self.n();
        if v as usize >= n {
            return Err(SessionError::VertexOutOfRange { vertex: v, n });
        }
        if let Some(p) = &self.pending {
            return Err(SessionError::PredictWhilePending { pending: p.vertex });
        }
        if let Some(tok) = &self.known[v as usize] {
            let predicted = Some(tok.clone());
            self.pending = Some(Pending {
                vertex: v,
                predicted: predicted.clone(),
                path_target: None,
                path_length: 0,
            });
            return Ok(predicted);
        }
        if self.transcript.is_empty() {
            let predicted = self.first_prediction.clone();
            self.pending = Some(Pending {
                vertex: v,
                predicted: predicted.clone(),
                path_target: None,
                path_length: 0,
            });
            return Ok(predicted);
        }
        let route = self
            .routing
            .route_request(v)
            .expect("terminals are nonempty after the first reveal");
        let predicted = self.known[route.target as usize].clone();
        debug_assert!(predicted.is_some(), "terminals always have known labels");
        self.pending = Some(Pending {
            vertex: v,
            predicted: predicted.clone(),
            path_target: Some(route.target),
            path_length: route.path_length(),
        });
        Ok(predicted)
    }

    /// Record the true label of the pending query. Returns whether a counted
    /// mistake occurred; the first round always returns `false`.
    pub fn reveal(&mut self, v: u32, true_label: &str) -> Result<bool, SessionError> {
        let p = self
            .pending
            .take()
            .ok_or(SessionError::RevealWithoutQuery)?;
        if p.vertex != v {
            let expected = p.vertex;
            self.pending = Some(p);
            return Err(SessionError::RevealVertexMismatch { got: v, expected });
        }
        let counted = !self.transcript.is_empty();
        let mistake = counted && p.predicted.as_deref() != Some(true_label);
        if mistake {
            self.mistakes += 1;
        }
        self.known[v as usize] = Some(true_label.to_string());
        self.routing.add_terminal(v);
        self.transcript.push(TranscriptEntry {
            index: self.transcript.len(),
            vertex: v,
            predicted: p.predicted,
            revealed: true_label.to_string(),
            counted,
            mistake,
            path_target: p.path_target,
            path_length: p.path_length,
        });
        Ok(mistake)
    }

    /// Counted mistakes so far (the first query is never counted).
    pub fn mistakes(&self) -> u32 {
        self.mistakes
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    pub fn routing(&self) -> &RoutingState {
        &self.routing
    }

    pub fn known_label(&self, v: u32) -> Option<&str> {
        self.known[v as usize].as_deref()
    }
}

/// Neighbor-majority predictor: the label of `v` is guessed as the most
/// common label among its already-revealed neighbors; ties and the
/// no-labeled-neighbor case fall back to a fixed token.
#[derive(Debug)]
pub struct BaselineSession {
    known: Vec<Option<String>>,
    mistakes: u32,
    fallback: String,
    rounds: usize,
    pending: Option<(u32, String)>,
}

impl BaselineSession {
    pub fn new(n: usize, fallback: &str) -> Self {
        BaselineSession {
            known: vec![None; n],
            mistakes: 0,
            fallback: fallback.to_string(),
            rounds: 0,
            pending: None,
        }
    }

    pub fn fallback(&self) -> &str {
        &self.fallback
    }

    pub fn predict(&mut self, v: u32, g: &Graph) -> Result<String, SessionError> {
        let n = self.known.len();
        if v as usize >= n {
            return Err(SessionError::VertexOutOfRange { vertex: v, n });
        }
        if let Some((pending, _)) = &self.pending {
            return Err(SessionError::PredictWhilePending { pending: *pending });
        }
        let predicted = if let Some(tok) = &self.known[v as usize] {
            tok.clone()
        } else {
            self.majority_of_neighbors(v, g)
        };
        self.pending = Some((v, predicted.clone()));
        Ok(predicted)
    }

    fn majority_of_neighbors(&self, v: u32, g: &Graph) -> String {
        let mut counts: Vec<(&str, usize)> = Vec::new();
        for &u in g.neighbors(v) {
            if let Some(tok) = &self.known[u as usize] {
                match counts.iter_mut().find(|(t, _)| *t == tok.as_str()) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((tok, 1)),
                }
            }
        }
        let best = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
        if best == 0 {
            return self.fallback.clone();
        }
        let mut leaders = counts.iter().filter(|&&(_, c)| c == best);
        let leader = leaders.next().expect("max exists");
        if leaders.next().is_some() {
            self.fallback.clone()
        } else {
            leader.0.to_string()
        }
    }

    pub fn reveal(&mut self, v: u32, true_label: &str) -> Result<bool, SessionError> {
        let (pending, predicted) = self
            .pending
            .take()
            .ok_or(SessionError::RevealWithoutQuery)?;
        if pending != v {
            self.pending = Some((pending, predicted));
            return Err(SessionError::RevealVertexMismatch {
                got: v,
                expected: pending,
            });
        }
        let counted = self.rounds > 0;
        let mistake = counted && predicted != true_label;
        if mistake {
            self.mistakes += 1;
        }
        self.known[v as usize] = Some(true_label.to_string());
        self.rounds += 1;
        Ok(mistake)
    }

    pub fn mistakes(&self) -> u32 {
        self.mistakes
    }
}
