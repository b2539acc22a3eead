//! Linear SVM: L2-regularized hinge loss by per-sample subgradient steps.
//! The bias is not regularized. Probabilities squash the signed margin with a
//! logistic function (no Platt calibration).

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{sigmoid, SvmParams};
use crate::encode::EncodedMatrix;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearSvm {
    pub fn decision_row(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        sigmoid(self.decision_row(x))
    }

    /// Mean hinge loss with labels mapped to ±1.
    pub fn hinge_loss(&self, x: &EncodedMatrix, y: &[u8]) -> f64 {
        let total: f64 = (0..x.n_rows)
            .map(|i| (1.0 - signed(y[i]) * self.decision_row(x.row(i))).max(0.0))
            .sum();
        total / x.n_rows.max(1) as f64
    }

    pub fn fit(x: &EncodedMatrix, y: &[u8], params: &SvmParams, seed: u64) -> LinearSvm {
        let mut model = LinearSvm {
            weights: vec![0.0; x.n_cols],
            bias: 0.0,
        };
        let eta = params.learning_rate;
        let shrink = 1.0 - eta * params.lambda;
        let mut order: Vec<usize> = (0..x.n_rows).collect();
        for epoch in 0..params.epochs {
            order.shuffle(&mut rng::stream(seed, epoch as u64));
            for &i in &order {
                let xi = x.row(i);
                let yi = signed(y[i]);
                let margin = yi * model.decision_row(xi);
                model.weights.iter_mut().for_each(|w| *w *= shrink);
                if margin < 1.0 {
                    let c = if y[i] == 1 { params.positive_weight } else { 1.0 };
                    for (w, v) in model.weights.iter_mut().zip(xi) {
                        *w += eta * c * yi * v;
                    }
                    model.bias += eta * c * yi;
                }
            }
        }
        model
    }
}

fn signed(y: u8) -> f64 {
    if y == 1 {
        1.0
    } else {
        -1.0
    }
}
