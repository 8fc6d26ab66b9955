//! Cost of a whole test order: the weights of the dependencies it stubs.

use crate::analysis::metrics::to_f64;
use crate::analysis::EdgeWeight;
use crate::model::{Cdg, NodeIx};

use super::operators::is_permutation;
use super::SearchError;

pub const DEFAULT_PENALTY_FACTOR: f64 = 10.0;

/// Sum over edges `u -> v` with `u` before `v` (the server is not yet
/// integrated) of the edge weight. Inheritance and composition edges cost
/// nothing; unbreakable edges cost a penalty.
#[derive(Clone, Debug)]
pub struct FitnessModel {
    classes: usize,
    terms: Vec<(NodeIx, NodeIx, f64)>,
    penalty: f64,
}

impl FitnessModel {
    pub fn new(cdg: &Cdg, weights: &[EdgeWeight]) -> Self {
        Self::with_penalty_factor(cdg, weights, DEFAULT_PENALTY_FACTOR)
    }

    /// The penalty is `factor` times the largest finite weight, or `factor`
    /// itself when every weight is 0.
    pub fn with_penalty_factor(cdg: &Cdg, weights: &[EdgeWeight], factor: f64) -> Self {
        assert_eq!(weights.len(), cdg.edge_count(), "one weight per edge");
        let max = weights
            .iter()
            .filter_map(|w| w.finite())
            .map(to_f64)
            .fold(0.0, f64::max);
        let penalty = if max > 0.0 { factor * max } else { factor };
        let terms = cdg
            .edges()
            .iter()
            .zip(weights)
            .filter(|(e, _)| !e.kind.is_strong())
            .filter_map(|(e, w)| {
                let cost = w.finite().map_or(penalty, to_f64);
                (cost > 0.0).then_some((e.client, e.server, cost))
            })
            .collect();
        FitnessModel {
            classes: cdg.node_count(),
            terms,
            penalty,
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn evaluate(&self, order: &[NodeIx]) -> Result<f64, SearchError> {
        if !is_permutation(order, self.classes) {
            return Err(SearchError::InvalidPermutation(format!("{order:?}")));
        }
        Ok(self.evaluate_unchecked(order))
    }

    pub(crate) fn evaluate_unchecked(&self, order: &[NodeIx]) -> f64 {
        let mut pos = vec![0usize; self.classes];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        self.terms
            .iter()
            .filter(|&&(c, s, _)| pos[c] < pos[s])
            .map(|&(_, _, w)| w)
            .sum()
    }
}
