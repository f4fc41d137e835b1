//! Query orders, including the adversarial ones.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OrderError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("vertex {vertex} appears twice in the query order")]
    DuplicateVertex { vertex: u32 },
    #[error("midpoint attack requires a line graph")]
    NotALine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "order", rename_all = "snake_case")]
pub enum OrderKind {
    Natural,
    Random { seed: u64 },
    MidpointAttack,
    OddFirst,
    Custom,
}

impl OrderKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::Natural => "natural",
            OrderKind::Random { .. } => "random",
            OrderKind::MidpointAttack => "midpoint",
            OrderKind::OddFirst => "odd_first",
            OrderKind::Custom => "custom",
        }
    }
}

/// A permutation (or prefix) of the vertices, queried front to back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOrder {
    pub kind: OrderKind,
    pub sequence: Vec<u32>,
}

impl QueryOrder {
    pub fn natural(n: usize) -> QueryOrder {
        QueryOrder {
            kind: OrderKind::Natural,
            sequence: (0..n as u32).collect(),
        }
    }

    pub fn random(n: usize, seed: u64) -> QueryOrder {
        let mut sequence: Vec<u32> = (0..n as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sequence.shuffle(&mut rng);
        QueryOrder {
            kind: OrderKind::Random { seed },
            sequence,
        }
    }

    /// Odd vertex ids ascending, then even ids ascending. Against a
    /// neighbor-majority predictor on a half-split line this is the killer
    /// order: no queried vertex has a labeled neighbor during the first pass.
    pub fn odd_first(n: usize) -> QueryOrder {
        let sequence = (1..n as u32)
            .step_by(2)
            .chain((0..n as u32).step_by(2))
            .collect();
        QueryOrder {
            kind: OrderKind::OddFirst,
            sequence,
        }
    }

    /// The halving adversary on the line 0-1-...-(n-1) with a half-split
    /// labeling: both endpoints first, then recursively the midpoint of the
    /// interval whose revealed endpoint labels differ. The sequence ends when
    /// the interval is a single edge, after roughly log2(n) midpoints.
    pub fn midpoint_attack(n: usize) -> QueryOrder {
        assert!(n >= 2, "midpoint attack needs n >= 2");
        let boundary = (n / 2) as u32;
        let mut sequence = vec![0, n as u32 - 1];
        let (mut lo, mut hi) = (0u32, n as u32 - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            sequence.push(mid);
            if mid < boundary {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        QueryOrder {
            kind: OrderKind::MidpointAttack,
            sequence,
        }
    }

    pub fn custom(sequence: Vec<u32>, n: usize) -> Result<QueryOrder, OrderError> {
        let order = QueryOrder {
            kind: OrderKind::Custom,
            sequence,
        };
        order.validate(n)?;
        Ok(order)
    }

    /// Check the sequence invariants: all vertices valid, none repeated.
    pub fn validate(&self, n: usize) -> Result<(), OrderError> {
        let mut seen = vec![false; n];
        for &v in &self.sequence {
            if v as usize >= n {
                return Err(OrderError::VertexOutOfRange { vertex: v, n });
            }
            if seen[v as usize] {
                return Err(OrderError::DuplicateVertex { vertex: v });
            }
            seen[v as usize] = true;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_attack_on_four_vertices() {
        assert_eq!(QueryOrder::midpoint_attack(4).sequence, vec![0, 3, 1, 2]);
    }

    #[test]
    fn midpoint_attack_on_two_vertices_has_no_midpoints() {
        assert_eq!(QueryOrder::midpoint_attack(2).sequence, vec![0, 1]);
    }

    #[test]
    fn midpoint_attack_probes_log_many_midpoints() {
        for k in 3..=12 {
            let n = 1usize << k;
            let order = QueryOrder::midpoint_attack(n);
            order.validate(n).unwrap();
            assert_eq!(order.sequence.len(), 2 + k, "n = {n}");
        }
    }

    #[test]
    fn odd_first_interleaves_correctly() {
        assert_eq!(QueryOrder::odd_first(6).sequence, vec![1, 3, 5, 0, 2, 4]);
        assert_eq!(QueryOrder::odd_first(5).sequence, vec![1, 3, 0, 2, 4]);
    }

    #[test]
    fn random_orders_are_seeded_permutations() {
        let a = QueryOrder::random(50, 7);
        let b = QueryOrder::random(50, 7);
        let c = QueryOrder::random(50, 8);
        assert_eq!(a, b);
        assert_ne!(a.sequence, c.sequence);
        a.validate(50).unwrap();
        assert_eq!(a.len(), 50);
    }

    #[test]
    fn custom_orders_are_validated() {
        assert_eq!(
            QueryOrder::custom(vec![0, 2, 2], 4).unwrap_err(),
            OrderError::DuplicateVertex { vertex: 2 }
        );
        assert_eq!(
            QueryOrder::custom(vec![0, 9], 4).unwrap_err(),
            OrderError::VertexOutOfRange { vertex: 9, n: 4 }
        );
        assert!(QueryOrder::custom(vec![3, 0], 4).is_ok());
    }
}
