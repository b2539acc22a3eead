//! One-hidden-layer network: ReLU hidden units, sigmoid output, binary
//! cross-entropy, mini-batch SGD.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::boosting::log_loss_term;
use super::{sigmoid, NeuralNetParams};
use crate::encode::EncodedMatrix;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuralNet {
    pub n_in: usize,
    pub hidden: usize,
    /// Row-major `hidden x n_in`.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl NeuralNet {
    /// Glorot-uniform weights, zero biases.
    pub fn init(n_in: usize, hidden: usize, seed: u64) -> Self {
        let mut r = rng::stream(seed, 0);
        let a1 = libm::sqrt(6.0 / (n_in + hidden).max(1) as f64);
        let a2 = libm::sqrt(6.0 / (hidden + 1) as f64);
        NeuralNet {
            n_in,
            hidden,
            w1: (0..hidden * n_in).map(|_| r.random_range(-a1..a1)).collect(),
            b1: vec![0.0; hidden],
            w2: (0..hidden).map(|_| r.random_range(-a2..a2)).collect(),
            b2: 0.0,
        }
    }

    pub fn n_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + 1
    }

    /// Parameters flattened as `w1, b1, w2, b2`.
    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.n_params());
        p.extend_from_slice(&self.w1);
        p.extend_from_slice(&self.b1);
        p.extend_from_slice(&self.w2);
        p.push(self.b2);
        p
    }

    pub fn set_params(&mut self, p: &[f64]) {
        let (a, rest) = p.split_at(self.w1.len());
        let (b, rest) = rest.split_at(self.b1.len());
        let (c, rest) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(a);
        self.b1.copy_from_slice(b);
        self.w2.copy_from_slice(c);
        self.b2 = rest[0];
    }

    fn hidden_activations(&self, x: &[f64], pre: &mut [f64], act: &mut [f64]) {
        for h in 0..self.hidden {
            let w = &self.w1[h * self.n_in..(h + 1) * self.n_in];
            let z = self.b1[h] + w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            pre[h] = z;
            act[h] = z.max(0.0);
        }
    }

    pub fn logit(&self, x: &[f64]) -> f64 {
        let mut pre = vec![0.0; self.hidden];
        let mut act = vec![0.0; self.hidden];
        self.hidden_activations(x, &mut pre, &mut act);
        self.b2 + self.w2.iter().zip(&act).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    /// Weighted mean cross-entropy over `rows` and its gradient, flattened
    /// like [`NeuralNet::params`].
    pub fn loss_and_gradient(&self, x: &EncodedMatrix, y: &[u8], weight: &[f64], rows: &[usize]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.n_params()];
        let mut pre = vec![0.0; self.hidden];
        let mut act = vec![0.0; self.hidden];
        let mut loss = 0.0;
        let mut total_w = 0.0;
        let (gw1, rest) = grad.split_at_mut(self.w1.len());
        let (gb1, rest) = rest.split_at_mut(self.b1.len());
        let (gw2, gb2) = rest.split_at_mut(self.w2.len());
        for &i in rows {
            let xi = x.row(i);
            let wi = weight[i];
            let yi = y[i] as f64;
            self.hidden_activations(xi, &mut pre, &mut act);
            let z = self.b2 + self.w2.iter().zip(&act).map(|(a, b)| a * b).sum::<f64>();
            loss += wi * log_loss_term(yi, z);
            total_w += wi;
            let dz = wi * (sigmoid(z) - yi);
            gb2[0] += dz;
            for h in 0..self.hidden {
                gw2[h] += dz * act[h];
                if pre[h] > 0.0 {
                    let dh = dz * self.w2[h];
                    gb1[h] += dh;
                    let row = &mut gw1[h * self.n_in..(h + 1) * self.n_in];
                    for (g, xv) in row.iter_mut().zip(xi) {
                        *g += dh * xv;
                    }
                }
            }
        }
        if total_w > 0.0 {
            loss /= total_w;
            grad.iter_mut().for_each(|g| *g /= total_w);
        }
        (loss, grad)
    }

    pub fn fit(x: &EncodedMatrix, y: &[u8], params: &NeuralNetParams, seed: u64) -> NeuralNet {
        let mut net = NeuralNet::init(x.n_cols, params.hidden, seed);
        let weight: Vec<f64> = y
            .iter()
            .map(|&v| if v == 1 { params.positive_weight } else { 1.0 })
            .collect();
        let mut order: Vec<usize> = (0..x.n_rows).collect();
        let mut p = net.params();
        for epoch in 0..params.epochs {
            order.shuffle(&mut rng::stream(seed, 1 + epoch as u64));
            for batch in order.chunks(params.batch_size.max(1)) {
                let (_, g) = net.loss_and_gradient(x, y, &weight, batch);
                for (pi, gi) in p.iter_mut().zip(&g) {
                    *pi -= params.learning_rate * gi;
                }
                net.set_params(&p);
            }
        }
        net
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_round_trip() {
        let mut net = NeuralNet::init(3, 4, 1);
        let p = net.params();
        assert_eq!(p.len(), 3 * 4 + 4 + 4 + 1);
        let shifted: Vec<f64> = p.iter().map(|v| v + 1.0).collect();
        net.set_params(&shifted);
        assert_eq!(net.params(), shifted);
    }

    #[test]
    fn gradient_matches_central_differences() {
        use rand::Rng as _;
        let mut r = rng::rng(21);
        for case in 0..10u64 {
            let n_in = r.random_range(1..5);
            let hidden = r.random_range(1..6);
            let n = r.random_range(1..6);
            let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n_in).map(|_| r.random_range(-2.0..2.0)).collect()).collect();
            let y: Vec<u8> = (0..n).map(|_| r.random_range(0..2u8)).collect();
            let w: Vec<f64> = (0..n).map(|_| r.random_range(0.5..3.0)).collect();
            let x = EncodedMatrix::from_rows(&rows).unwrap();
            let all: Vec<usize> = (0..n).collect();
            let mut net = NeuralNet::init(n_in, hidden, case);
            net.b1.iter_mut().for_each(|b| *b = r.random_range(-0.5..0.5));
            let (_, grad) = net.loss_and_gradient(&x, &y, &w, &all);
            let p = net.params();
            let eps = 1e-5;
            for k in 0..p.len() {
                let mut probe = net.clone();
                let mut q = p.clone();
                q[k] += eps;
                probe.set_params(&q);
                let up = probe.loss_and_gradient(&x, &y, &w, &all).0;
                q[k] -= 2.0 * eps;
                probe.set_params(&q);
                let down = probe.loss_and_gradient(&x, &y, &w, &all).0;
                let numeric = (up - down) / (2.0 * eps);
                let rel = (numeric - grad[k]).abs() / (numeric.abs() + grad[k].abs()).max(1e-8);
                assert!(rel < 1e-4, "case {case} param {k}: {} vs {numeric}", grad[k]);
            }
        }
    }

    #[test]
    fn sgd_reduces_loss_on_separable_data() {
        let rows: Vec<Vec<f64>> = (0..64).map(|i| vec![(i as f64 - 32.0) / 16.0, 1.0]).collect();
        let y: Vec<u8> = (0..64).map(|i| (i >= 32) as u8).collect();
        let x = EncodedMatrix::from_rows(&rows).unwrap();
        let params = NeuralNetParams { epochs: 200, learning_rate: 0.1, ..NeuralNetParams::default() };
        let w = vec![1.0; 64];
        let all: Vec<usize> = (0..64).collect();
        let before = NeuralNet::init(2, params.hidden, 3).loss_and_gradient(&x, &y, &w, &all).0;
        let net = NeuralNet::fit(&x, &y, &params, 3);
        let after = net.loss_and_gradient(&x, &y, &w, &all).0;
        assert!(after < before * 0.5, "{before} -> {after}");
        assert!(net.predict_row(&[1.5, 1.0]) > 0.5);
        assert!(net.predict_row(&[-1.5, 1.0]) < 0.5);
    }
}
