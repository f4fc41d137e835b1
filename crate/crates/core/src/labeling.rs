//! Vertex labelings over an arbitrary finite token set, and the cut they
//! induce on a graph.
//!
//! Labels are opaque tokens: strings in files, interned ids internally.
//! Nothing here special-cases the binary case.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum LabelingError {
    #[error("line {line}: label token must be a non-empty whitespace-free string")]
    BadToken { line: usize },
    #[error("expected {expected} label lines, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("relabel map is not injective on the label set: {a:?} and {b:?} both map to {to:?}")]
    NotInjective { a: String, b: String, to: String },
}

/// A total map from vertex id to label token. The label set is the image of
/// the map, in first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    ids: Vec<u32>,
    tokens: Vec<String>,
}

impl Labeling {
    /// Intern one token per vertex. Tokens must be non-empty and contain no
    /// whitespace.
    pub fn from_tokens(tokens: Vec<String>) -> Result<Self, LabelingError> {
        let mut interned: Vec<String> = Vec::new();
        let mut by_token: BTreeMap<String, u32> = BTreeMap::new();
        let mut ids = Vec::with_capacity(tokens.len());
        for (i, tok) in tokens.into_iter().enumerate() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(LabelingError::BadToken { line: i + 1 });
            }
            let id = *by_token.entry(tok.clone()).or_insert_with(|| {
                interned.push(tok);
                (interned.len() - 1) as u32
            });
            ids.push(id);
        }
        Ok(Labeling {
            ids,
            tokens: interned,
        })
    }

    /// Parse the labels file: exactly `n` lines, line `i` holding the token
    /// of vertex `i`. `#`-prefixed comment lines are ignored.
    pub fn parse(text: &str, n: usize) -> Result<Self, LabelingError> {
        let mut tokens = Vec::with_capacity(n);
        for (i, raw) in text.lines().enumerate() {
            if raw.trim_start().starts_with('#') {
                continue;
            }
            let tok = raw.trim();
            if tok.is_empty() {
                return Err(LabelingError::BadToken { line: i + 1 });
            }
            tokens.push(tok.to_string());
        }
        if tokens.len() != n {
            return Err(LabelingError::WrongCount {
                expected: n,
                found: tokens.len(),
            });
        }
        Self::from_tokens(tokens)
    }

    pub fn constant(n: usize, token: &str) -> Self {
        Self::from_tokens(vec![token.to_string(); n]).expect("constant token must be valid")
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for &id in &self.ids {
            let _ = writeln!(out, "{}", self.tokens[id as usize]);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn token_of(&self, v: u32) -> &str {
        &self.tokens[self.ids[v as usize] as usize]
    }

    pub fn id_of(&self, v: u32) -> u32 {
        self.ids[v as usize]
    }

    /// Distinct tokens actually used, in first-appearance order.
    pub fn label_set(&self) -> &[String] {
        &self.tokens
    }

    pub fn arity(&self) -> usize {
        self.tokens.len()
    }

    /// Pointwise rename through `map`. Tokens missing from the map keep their
    /// name; the images of the label set must stay pairwise distinct.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<Labeling, LabelingError> {
        let renamed: Vec<String> = self
            .tokens
            .iter()
            .map(|t| map.get(t).unwrap_or(t).clone())
            .collect();
        for i in 0..renamed.len() {
            for j in i + 1..renamed.len() {
                if renamed[i] == renamed[j] {
                    return Err(LabelingError::NotInjective {
                        a: self.tokens[i].clone(),
                        b: self.tokens[j].clone(),
                        to: renamed[i].clone(),
                    });
                }
            }
        }
        let tokens = self
            .ids
            .iter()
            .map(|&id| renamed[id as usize].clone())
            .collect();
        Self::from_tokens(tokens)
    }
}

/// The set of graph edges whose endpoints carry different labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSet {
    edges: Vec<(u32, u32)>,
}

impl CutSet {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Cut edges in sorted normalized order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn contains(&self, u: u32, v: u32) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).is_ok()
    }
}

/// Exactly the edges `(u, v)` of `g` with differing endpoint labels.
pub fn cut_set(g: &Graph, l: &Labeling) -> CutSet {
    assert_eq!(
        g.vertex_count(),
        l.len(),
        "labeling must be total over the graph's vertices"
    );
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| l.id_of(u) != l.id_of(v))
        .collect();
    CutSet { edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::line_graph;

    fn half_split_p8() -> Labeling {
        let tokens = (0..8)
            .map(|v| if v < 4 { "+1" } else { "-1" }.to_string())
            .collect();
        Labeling::from_tokens(tokens).unwrap()
    }

    #[test]
    fn p8_half_split_cut_is_the_middle_edge() {
        let g = line_graph(8);
        let cut = cut_set(&g, &half_split_p8());
        assert_eq!(cut.size(), 1);
        assert_eq!(cut.edges(), &[(3, 4)]);
    }

    #[test]
    fn constant_labeling_has_empty_cut() {
        let g = line_graph(8);
        let cut = cut_set(&g, &Labeling::constant(8, "x"));
        assert_eq!(cut.size(), 0);
    }

    #[test]
    fn alternating_four_cycle_cut_is_all_edges() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let l = Labeling::from_tokens(["a", "b", "a", "b"].iter().map(|s| s.to_string()).collect())
            .unwrap();
        assert_eq!(cut_set(&g, &l).size(), 4);
    }

    #[test]
    fn swap_relabel_preserves_cut() {
        let g = line_graph(8);
        let l = half_split_p8();
        let mut map = BTreeMap::new();
        map.insert("+1".to_string(), "-1".to_string());
        map.insert("-1".to_string(), "+1".to_string());
        let swapped = l.relabel(&map).unwrap();
        assert_eq!(cut_set(&g, &swapped).size(), cut_set(&g, &l).size());
        assert_eq!(swapped.token_of(0), "-1");
    }

    #[test]
    fn identity_relabel_is_identity() {
        let l = half_split_p8();
        assert_eq!(l.relabel(&BTreeMap::new()).unwrap(), l);
    }

    #[test]
    fn cyclic_three_label_relabel_preserves_cut() {
        let g = line_graph(6);
        let l = Labeling::from_tokens(
            ["a", "a", "b", "b", "c", "c"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
        .unwrap();
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), "b".to_string());
        map.insert("b".to_string(), "c".to_string());
        map.insert("c".to_string(), "a".to_string());
        let renamed = l.relabel(&map).unwrap();
        assert_eq!(cut_set(&g, &renamed).size(), cut_set(&g, &l).size());
    }

    #[test]
    fn non_injective_relabel_is_rejected() {
        let l = half_split_p8();
        let mut map = BTreeMap::new();
        map.insert("+1".to_string(), "-1".to_string());
        let err = l.relabel(&map).unwrap_err();
        assert!(matches!(err, LabelingError::NotInjective { .. }));
    }

    #[test]
    fn label_set_is_the_image() {
        let l = Labeling::from_tokens(["b", "a", "b", "a"].iter().map(|s| s.to_string()).collect())
            .unwrap();
        assert_eq!(l.label_set(), &["b".to_string(), "a".to_string()]);
        assert_eq!(l.arity(), 2);
    }

    #[test]
    fn parse_validates_count_and_tokens() {
        assert_eq!(
            Labeling::parse("a\nb\n", 3).unwrap_err(),
            LabelingError::WrongCount {
                expected: 3,
                found: 2
            }
        );
        let l = Labeling::parse("# tokens\n+1\n-1\n", 2).unwrap();
        assert_eq!(l.token_of(1), "-1");
    }

    #[test]
    fn labels_round_trip() {
        let l = half_split_p8();
        assert_eq!(Labeling::parse(&l.to_lines(), 8).unwrap(), l);
    }
}
