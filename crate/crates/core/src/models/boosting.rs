//! Gradient boosting for the logistic loss.
//!
//! Each round fits a regression tree to the residuals `y - p`, then replaces
//! every leaf value with the Newton step `sum(w r) / sum(w p (1 - p))` for that
//! leaf. The shrunken step is halved until the leaf's loss does not increase,
//! so training loss is non-increasing round over round even when tiny Hessians
//! (very rare positives) make the raw Newton step overshoot.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::forest::{add_normalized, normalize};
use super::tree::{Node, ThresholdMode, Tree, TreeBuilder, TreeParams};
use super::{sigmoid, BoostingParams};
use crate::encode::EncodedMatrix;
use crate::rng;

/// Prior probabilities are clamped to `[EPS, 1 - EPS]`.
pub const PRIOR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boosting {
    pub initial_score: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree>,
    /// Weighted mean log-loss on the training rows: before the first round,
    /// then after each round.
    pub train_loss: Vec<f64>,
    pub importance: Vec<f64>,
}

pub fn log_loss_term(y: f64, score: f64) -> f64 {
    // softplus(score) - y * score, stable for large |score|
    let sp = if score > 0.0 {
        score + libm::log1p(libm::exp(-score))
    } else {
        libm::log1p(libm::exp(score))
    };
    sp - y * score
}

impl Boosting {
    pub fn fit(x: &EncodedMatrix, y: &[u8], params: &BoostingParams, seed: u64) -> Boosting {
        let n = x.n_rows;
        let target: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        let weight: Vec<f64> = y
            .iter()
            .map(|&v| if v == 1 { params.positive_weight } else { 1.0 })
            .collect();
        let total_w: f64 = weight.iter().sum();
        let prior = (weight.iter().zip(&target).map(|(w, t)| w * t).sum::<f64>() / total_w)
            .clamp(PRIOR_EPS, 1.0 - PRIOR_EPS);
        let initial_score = libm::log(prior / (1.0 - prior));
        let mut score = vec![initial_score; n];
        let loss = |score: &[f64]| -> f64 {
            (0..n).map(|i| weight[i] * log_loss_term(target[i], score[i])).sum::<f64>() / total_w
        };
        let mut train_loss = vec![loss(&score)];
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            max_features: None,
            thresholds: ThresholdMode::Best,
        };
        let mut importance = vec![0.0; x.n_cols];
        let mut trees = Vec::with_capacity(params.n_rounds);
        for round in 0..params.n_rounds {
            let prob: Vec<f64> = score.iter().map(|&s| sigmoid(s)).collect();
            let residual: Vec<f64> = (0..n).map(|i| target[i] - prob[i]).collect();
            let mut builder = TreeBuilder::new(x, &residual, &weight, tree_params);
            let mut tree = builder.build(&mut rng::stream(seed, round as u64));
            add_normalized(&mut importance, &builder.importance);

            let leaf_of: Vec<usize> = (0..n).map(|i| tree.leaf_of(x.row(i))).collect();
            let leaves: Vec<usize> = (0..tree.nodes.len())
                .filter(|&k| matches!(tree.nodes[k], Node::Leaf { .. }))
                .collect();
            for leaf in leaves {
                let members: Vec<usize> = (0..n).filter(|&i| leaf_of[i] == leaf).collect();
                let step = leaf_step(&members, &target, &weight, &score, &prob, params.learning_rate);
                tree.set_leaf_value(leaf, step);
                for &i in &members {
                    score[i] += step;
                }
            }
            train_loss.push(loss(&score));
            trees.push(tree);
        }
        normalize(&mut importance);
        Boosting {
            initial_score,
            learning_rate: params.learning_rate,
            trees,
            train_loss,
            importance,
        }
    }

    /// Raw score (log-odds). Leaf values already include the learning rate.
    pub fn decision_row(&self, row: &[f64]) -> f64 {
        self.initial_score + self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>()
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        sigmoid(self.decision_row(row))
    }
}

fn leaf_step(members: &[usize], y: &[f64], w: &[f64], score: &[f64], prob: &[f64], lr: f64) -> f64 {
    let num: f64 = members.iter().map(|&i| w[i] * (y[i] - prob[i])).sum();
    let den: f64 = members.iter().map(|&i| w[i] * prob[i] * (1.0 - prob[i])).sum();
    if den <= 1e-300 || num == 0.0 {
        return 0.0;
    }
    let leaf_loss = |shift: f64| -> f64 {
        members
            .iter()
            .map(|&i| w[i] * log_loss_term(y[i], score[i] + shift))
            .sum()
    };
    let before = leaf_loss(0.0);
    let mut step = lr * num / den;
    for _ in 0..60 {
        if leaf_loss(step) <= before {
            return step;
        }
        step *= 0.5;
    }
    0.0
}
