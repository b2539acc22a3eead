//! Random forest (bootstrap + best cuts) and extra trees (full sample +
//! random cuts). Probabilities are the mean of per-tree leaf positive fractions.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::tree::{ThresholdMode, Tree, TreeBuilder, TreeParams};
use super::ForestParams;
use crate::encode::EncodedMatrix;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
    /// Per encoded column, normalized to sum to 1 (all zero without splits).
    pub importance: Vec<f64>,
}

impl Forest {
    pub fn fit(x: &EncodedMatrix, y: &[u8], params: &ForestParams, thresholds: ThresholdMode, seed: u64) -> Forest {
        let target: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        let class_weight: Vec<f64> = y
            .iter()
            .map(|&v| if v == 1 { params.positive_weight } else { 1.0 })
            .collect();
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            max_features: Some(params.max_features.resolve(x.n_cols)),
            thresholds,
        };
        let mut importance = vec![0.0; x.n_cols];
        let mut trees = Vec::with_capacity(params.n_trees);
        for t in 0..params.n_trees {
            let mut r = rng::stream(seed, t as u64);
            let weight: Vec<f64> = if params.bootstrap {
                let mut counts = vec![0u32; x.n_rows];
                for _ in 0..x.n_rows {
                    counts[r.random_range(0..x.n_rows)] += 1;
                }
                counts.iter().zip(&class_weight).map(|(&c, w)| c as f64 * w).collect()
            } else {
                class_weight.clone()
            };
            let mut builder = TreeBuilder::new(x, &target, &weight, tree_params);
            trees.push(builder.build(&mut r));
            add_normalized(&mut importance, &builder.importance);
        }
        normalize(&mut importance);
        Forest { trees, importance }
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict_row(row)).sum();
        sum / self.trees.len() as f64
    }
}

pub(crate) fn add_normalized(acc: &mut [f64], part: &[f64]) {
    let total: f64 = part.iter().sum();
    if total > 0.0 {
        for (a, p) in acc.iter_mut().zip(part) {
            *a += p / total;
        }
    }
}

pub(crate) fn normalize(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter_mut().for_each(|x| *x /= total);
    }
}
