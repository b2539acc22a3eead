//! The five learners behind one train/predict contract.

pub mod boosting;
pub mod forest;
pub mod neural;
mod pipeline;
pub mod svm;
pub mod tree;

pub use pipeline::Pipeline;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encode::{EncodedMatrix, EncodingMode, InputSignature};
use crate::error::{Error, Result};
use boosting::Boosting;
use forest::Forest;
use neural::NeuralNet;
use svm::LinearSvm;
use tree::ThresholdMode;

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    NeuralNet,
    LinearSvm,
    RandomForest,
    ExtraTrees,
    GradientBoosting,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::NeuralNet,
        ModelKind::LinearSvm,
        ModelKind::RandomForest,
        ModelKind::ExtraTrees,
        ModelKind::GradientBoosting,
    ];

    /// Short table label: ANN, SVM, RF, ET, GB.
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::NeuralNet => "ANN",
            ModelKind::LinearSvm => "SVM",
            ModelKind::RandomForest => "RF",
            ModelKind::ExtraTrees => "ET",
            ModelKind::GradientBoosting => "GB",
        }
    }

    pub fn is_tree_based(self) -> bool {
        matches!(
            self,
            ModelKind::RandomForest | ModelKind::ExtraTrees | ModelKind::GradientBoosting
        )
    }

    pub fn encoding(self) -> EncodingMode {
        if self.is_tree_based() {
            EncodingMode::Tree
        } else {
            EncodingMode::Gradient
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ann" | "nn" | "neuralnet" | "neural_net" => Ok(ModelKind::NeuralNet),
            "svm" | "linearsvm" | "linear_svm" => Ok(ModelKind::LinearSvm),
            "rf" | "randomforest" | "random_forest" => Ok(ModelKind::RandomForest),
            "et" | "extratrees" | "extra_trees" => Ok(ModelKind::ExtraTrees),
            "gb" | "gradientboosting" | "gradient_boosting" => Ok(ModelKind::GradientBoosting),
            other => Err(Error::arg(format!("unknown model kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuralNetParams {
    pub hidden: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub positive_weight: f64,
}

impl Default for NeuralNetParams {
    fn default() -> Self {
        NeuralNetParams {
            hidden: 16,
            batch_size: 32,
            learning_rate: 0.01,
            epochs: 50,
            positive_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub positive_weight: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            lambda: 1e-4,
            learning_rate: 0.01,
            epochs: 50,
            positive_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `ceil(sqrt(d))`
    Sqrt,
    All,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => {
                let mut k = libm::sqrt(d as f64) as usize;
                while k * k < d {
                    k += 1;
                }
                k.max(1)
            }
            MaxFeatures::All => d.max(1),
            MaxFeatures::Count(k) => k.clamp(1, d.max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub positive_weight: f64,
}

impl ForestParams {
    pub fn random_forest() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: 12,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            positive_weight: 1.0,
        }
    }

    pub fn extra_trees() -> Self {
        ForestParams {
            bootstrap: false,
            ..Self::random_forest()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostingParams {
    pub n_rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub positive_weight: f64,
}

impl Default for BoostingParams {
    fn default() -> Self {
        BoostingParams {
            n_rounds: 100,
            max_depth: 3,
            learning_rate: 0.1,
            positive_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Hyperparams {
    NeuralNet(NeuralNetParams),
    LinearSvm(SvmParams),
    RandomForest(ForestParams),
    ExtraTrees(ForestParams),
    GradientBoosting(BoostingParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub hyper: Hyperparams,
    pub seed: u64,
}

impl ModelSpec {
    pub fn default_for(kind: ModelKind, seed: u64) -> Self {
        let hyper = match kind {
            ModelKind::NeuralNet => Hyperparams::NeuralNet(NeuralNetParams::default()),
            ModelKind::LinearSvm => Hyperparams::LinearSvm(SvmParams::default()),
            ModelKind::RandomForest => Hyperparams::RandomForest(ForestParams::random_forest()),
            ModelKind::ExtraTrees => Hyperparams::ExtraTrees(ForestParams::extra_trees()),
            ModelKind::GradientBoosting => Hyperparams::GradientBoosting(BoostingParams::default()),
        };
        ModelSpec { hyper, seed }
    }

    pub fn kind(&self) -> ModelKind {
        match self.hyper {
            Hyperparams::NeuralNet(_) => ModelKind::NeuralNet,
            Hyperparams::LinearSvm(_) => ModelKind::LinearSvm,
            Hyperparams::RandomForest(_) => ModelKind::RandomForest,
            Hyperparams::ExtraTrees(_) => ModelKind::ExtraTrees,
            Hyperparams::GradientBoosting(_) => ModelKind::GradientBoosting,
        }
    }

    /// Sets the positive-class weight for whichever learner this is.
    pub fn with_positive_weight(mut self, w: f64) -> Self {
        match &mut self.hyper {
            Hyperparams::NeuralNet(p) => p.positive_weight = w,
            Hyperparams::LinearSvm(p) => p.positive_weight = w,
            Hyperparams::RandomForest(p) | Hyperparams::ExtraTrees(p) => p.positive_weight = w,
            Hyperparams::GradientBoosting(p) => p.positive_weight = w,
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::arg(format!("{name} must be positive")))
            } else {
                Ok(())
            }
        };
        let rate = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::arg(format!("{name} must lie in (0, 1], got {v}")))
            }
        };
        let weight = |v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::arg(format!("positive_weight must be positive, got {v}")))
            }
        };
        match &self.hyper {
            Hyperparams::NeuralNet(p) => {
                positive("hidden", p.hidden)?;
                positive("batch_size", p.batch_size)?;
                positive("epochs", p.epochs)?;
                rate("learning_rate", p.learning_rate)?;
                weight(p.positive_weight)
            }
            Hyperparams::LinearSvm(p) => {
                positive("epochs", p.epochs)?;
                rate("learning_rate", p.learning_rate)?;
                if !(p.lambda >= 0.0 && p.lambda * p.learning_rate < 1.0) {
                    return Err(Error::arg("lambda must be non-negative and lambda * learning_rate < 1"));
                }
                weight(p.positive_weight)
            }
            Hyperparams::RandomForest(p) | Hyperparams::ExtraTrees(p) => {
                positive("n_trees", p.n_trees)?;
                positive("max_depth", p.max_depth)?;
                if let MaxFeatures::Count(k) = p.max_features {
                    positive("max_features", k)?;
                }
                weight(p.positive_weight)
            }
            Hyperparams::GradientBoosting(p) => {
                positive("max_depth", p.max_depth)?;
                rate("learning_rate", p.learning_rate)?;
                weight(p.positive_weight)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum Learner {
    Forest(Forest),
    Boosting(Boosting),
    NeuralNet(NeuralNet),
    LinearSvm(LinearSvm),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub signature: InputSignature,
    pub learner: Learner,
    /// Wall-clock training time; filled in by callers that own a clock.
    /// Not serialized, so saved models stay byte-stable across reruns.
    #[serde(skip)]
    pub train_seconds: f64,
    pub warnings: Vec<String>,
}

/// Trains `spec` on `x`, `y`. Deterministic for a given seed.
pub fn fit(spec: &ModelSpec, x: &EncodedMatrix, y: &[u8]) -> Result<TrainedModel> {
    spec.validate()?;
    if x.n_rows != y.len() {
        return Err(Error::arg(format!("{} rows but {} labels", x.n_rows, y.len())));
    }
    if x.n_rows == 0 {
        return Err(Error::arg("cannot fit on zero rows"));
    }
    if let Some(i) = y.iter().position(|&v| v > 1) {
        return Err(Error::arg(format!("label at row {i} is not 0/1")));
    }
    let positives = y.iter().filter(|&&v| v == 1).count();
    let mut warnings = Vec::new();
    if positives == 0 || positives == y.len() {
        warnings.push(format!(
            "training labels contain a single class ({}); the model is constant",
            if positives == 0 { 0 } else { 1 }
        ));
    }
    let seed = spec.seed;
    let learner = match &spec.hyper {
        Hyperparams::NeuralNet(p) => Learner::NeuralNet(NeuralNet::fit(x, y, p, seed)),
        Hyperparams::LinearSvm(p) => Learner::LinearSvm(LinearSvm::fit(x, y, p, seed)),
        Hyperparams::RandomForest(p) => Learner::Forest(Forest::fit(x, y, p, ThresholdMode::Best, seed)),
        Hyperparams::ExtraTrees(p) => Learner::Forest(Forest::fit(x, y, p, ThresholdMode::Random, seed)),
        Hyperparams::GradientBoosting(p) => {
            let mut p = *p;
            if !warnings.is_empty() {
                // constant labels: keep the clamped prior
                p.n_rounds = 0;
            }
            Learner::Boosting(Boosting::fit(x, y, &p, seed))
        }
    };
    Ok(TrainedModel {
        spec: *spec,
        signature: x.signature(),
        learner,
        train_seconds: 0.0,
        warnings,
    })
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        self.spec.kind()
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let p = match &self.learner {
            Learner::Forest(f) => f.predict_row(row),
            Learner::Boosting(b) => b.predict_row(row),
            Learner::NeuralNet(n) => n.predict_row(row),
            Learner::LinearSvm(s) => s.predict_row(row),
        };
        p.clamp(0.0, 1.0)
    }

    /// Default probability per row.
    pub fn predict_proba(&self, x: &EncodedMatrix) -> Result<Vec<f64>> {
        if x.provenance != self.signature.provenance || x.categorical != self.signature.categorical {
            return Err(Error::contract(format!(
                "input has {} encoded columns; model was trained on {}",
                x.n_cols,
                self.signature.width()
            )));
        }
        Ok((0..x.n_rows).map(|r| self.predict_row(x.row(r))).collect())
    }

    /// Mean impurity decrease per source feature (encoded columns summed),
    /// normalized to sum to 1. All zeros when no tree ever split.
    pub fn feature_importance(&self) -> Result<Vec<f64>> {
        let per_column = match &self.learner {
            Learner::Forest(f) => &f.importance,
            Learner::Boosting(b) => &b.importance,
            _ => {
                return Err(Error::Unsupported(format!(
                    "feature importance is only defined for tree models, not {}",
                    self.kind()
                )))
            }
        };
        let n_features = self.signature.provenance.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![0.0; n_features];
        for (c, v) in per_column.iter().enumerate() {
            out[self.signature.provenance[c]] += v;
        }
        Ok(out)
    }
}

/// `1` iff probability >= threshold.
pub fn classify(proba: &[f64], threshold: f64) -> Result<Vec<u8>> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::arg(format!("threshold must lie in [0, 1], got {threshold}")));
    }
    Ok(proba.iter().map(|&p| (p >= threshold) as u8).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng as _;

    fn matrix(rows: &[Vec<f64>]) -> EncodedMatrix {
        EncodedMatrix::from_rows(rows).unwrap()
    }

    fn separable_toy() -> (EncodedMatrix, Vec<u8>) {
        // 20 points, label = x0 + x1 > 1, kept away from the boundary
        let mut r = rng::rng(11);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        while rows.len() < 20 {
            let a: f64 = r.random();
            let b: f64 = r.random();
            let s = a + b - 1.0;
            if s.abs() < 0.15 {
                continue;
            }
            rows.push(vec![a, b]);
            y.push((s > 0.0) as u8);
        }
        (matrix(&rows), y)
    }

    #[test]
    fn classify_convention() {
        assert_eq!(classify(&[0.5], 0.5).unwrap(), vec![1]);
        assert_eq!(classify(&[0.1, 0.9], 0.5).unwrap(), vec![0, 1]);
        assert_eq!(classify(&[0.0, 0.3], 0.0).unwrap(), vec![1, 1]);
        assert!(classify(&[0.1], 1.5).is_err());
        assert!(classify(&[0.1], -0.1).is_err());
    }

    #[test]
    fn max_features_sqrt() {
        assert_eq!(MaxFeatures::Sqrt.resolve(30), 6);
        assert_eq!(MaxFeatures::Sqrt.resolve(8), 3);
        assert_eq!(MaxFeatures::Sqrt.resolve(9), 3);
        assert_eq!(MaxFeatures::Sqrt.resolve(1), 1);
    }

    #[test]
    fn kind_parsing() {
        for k in ModelKind::ALL {
            assert_eq!(k.label().parse::<ModelKind>().unwrap(), k);
        }
        assert!("knn".parse::<ModelKind>().is_err());
    }

    #[test]
    fn spec_validation() {
        let mut s = ModelSpec::default_for(ModelKind::GradientBoosting, 0);
        if let Hyperparams::GradientBoosting(p) = &mut s.hyper {
            p.learning_rate = 1.5;
        }
        assert!(s.validate().is_err());
        let mut s = ModelSpec::default_for(ModelKind::RandomForest, 0);
        if let Hyperparams::RandomForest(p) = &mut s.hyper {
            p.n_trees = 0;
        }
        assert!(s.validate().is_err());
        for k in ModelKind::ALL {
            ModelSpec::default_for(k, 0).validate().unwrap();
        }
    }

    #[test]
    fn random_forest_fits_separable_toy() {
        let (x, y) = separable_toy();
        let m = fit(&ModelSpec::default_for(ModelKind::RandomForest, 5), &x, &y).unwrap();
        let pred = classify(&m.predict_proba(&x).unwrap(), 0.5).unwrap();
        assert_eq!(pred, y);
    }

    #[test]
    fn boosting_on_constant_labels_learns_prior() {
        let x = matrix(&[vec![0.0], vec![1.0], vec![2.0]]);
        let m = fit(&ModelSpec::default_for(ModelKind::GradientBoosting, 0), &x, &[1, 1, 1]).unwrap();
        assert_eq!(m.warnings.len(), 1);
        for p in m.predict_proba(&x).unwrap() {
            assert!((p - (1.0 - boosting::PRIOR_EPS)).abs() < 1e-15, "{p}");
        }
    }

    #[test]
    fn boosting_without_rounds_is_prior() {
        let x = matrix(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        let mut spec = ModelSpec::default_for(ModelKind::GradientBoosting, 0);
        if let Hyperparams::GradientBoosting(p) = &mut spec.hyper {
            p.n_rounds = 0;
        }
        let m = fit(&spec, &x, &[1, 0, 0, 0]).unwrap();
        let want = sigmoid(libm::log(0.25 / 0.75));
        for p in m.predict_proba(&x).unwrap() {
            assert!((p - want).abs() < 1e-15);
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn forest_unanimous_positive() {
        let x = matrix(&[vec![0.0], vec![1.0]]);
        let m = fit(&ModelSpec::default_for(ModelKind::RandomForest, 0), &x, &[1, 1]).unwrap();
        assert_eq!(m.predict_proba(&x).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn forest_probability_is_mean_of_tree_leaves() {
        let (x, y) = separable_toy();
        let m = fit(&ModelSpec::default_for(ModelKind::ExtraTrees, 2), &x, &y).unwrap();
        let Learner::Forest(f) = &m.learner else { panic!() };
        for r in 0..x.n_rows {
            let row = x.row(r);
            let manual: f64 = f.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / f.trees.len() as f64;
            assert_eq!(m.predict_row(row), manual);
        }
    }

    #[test]
    fn importance_single_feature() {
        // only column 0 carries the label; column 1 is constant
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, 3.0]).collect();
        let y: Vec<u8> = (0..20).map(|i| (i >= 10) as u8).collect();
        let mut spec = ModelSpec::default_for(ModelKind::RandomForest, 1);
        if let Hyperparams::RandomForest(p) = &mut spec.hyper {
            p.n_trees = 1;
            p.max_features = MaxFeatures::All;
        }
        let m = fit(&spec, &matrix(&rows), &y).unwrap();
        assert_eq!(m.feature_importance().unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn importance_unsupported_for_gradient_models() {
        let (x, y) = separable_toy();
        let m = fit(&ModelSpec::default_for(ModelKind::LinearSvm, 0), &x, &y).unwrap();
        assert!(matches!(m.feature_importance(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn dominant_feature_ranks_first() {
        let mut r = rng::rng(4);
        let rows: Vec<Vec<f64>> = (0..400).map(|_| vec![r.random::<f64>(), r.random::<f64>()]).collect();
        // label mostly from column 1, a little from column 0
        let y: Vec<u8> = rows.iter().map(|v| (v[1] + 0.1 * v[0] > 0.55) as u8).collect();
        for kind in [ModelKind::RandomForest, ModelKind::ExtraTrees, ModelKind::GradientBoosting] {
            let m = fit(&ModelSpec::default_for(kind, 0), &matrix(&rows), &y).unwrap();
            let imp = m.feature_importance().unwrap();
            assert!(imp[1] > imp[0], "{kind}: {imp:?}");
            assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn contract_error_on_column_mismatch() {
        let (x, y) = separable_toy();
        let m = fit(&ModelSpec::default_for(ModelKind::GradientBoosting, 0), &x, &y).unwrap();
        let wider = matrix(&[vec![0.0, 0.0, 0.0]]);
        assert!(matches!(m.predict_proba(&wider), Err(Error::Contract(_))));
    }

    #[test]
    fn seeds_are_deterministic() {
        let (x, y) = separable_toy();
        for kind in ModelKind::ALL {
            let spec = ModelSpec::default_for(kind, 99);
            let a = fit(&spec, &x, &y).unwrap().predict_proba(&x).unwrap();
            let b = fit(&spec, &x, &y).unwrap().predict_proba(&x).unwrap();
            assert_eq!(a, b, "{kind}");
            assert!(a.iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }

    #[test]
    fn svm_separates_toy_with_unit_margins() {
        let (x, y) = separable_toy();
        // without shrinkage the margin updates stop once every margin is >= 1
        let spec = ModelSpec {
            hyper: Hyperparams::LinearSvm(SvmParams {
                lambda: 0.0,
                learning_rate: 0.1,
                epochs: 2000,
                positive_weight: 1.0,
            }),
            seed: 0,
        };
        let m = fit(&spec, &x, &y).unwrap();
        let Learner::LinearSvm(svm) = &m.learner else { panic!() };
        assert_eq!(svm.hinge_loss(&x, &y), 0.0);
        for i in 0..x.n_rows {
            let s = if y[i] == 1 { 1.0 } else { -1.0 };
            assert!(s * svm.decision_row(x.row(i)) >= 1.0 - 1e-6);
        }
    }

    #[test]
    fn boosting_loss_never_increases() {
        let (x, y) = separable_toy();
        let m = fit(&ModelSpec::default_for(ModelKind::GradientBoosting, 0), &x, &y).unwrap();
        let Learner::Boosting(b) = &m.learner else { panic!() };
        assert_eq!(b.train_loss.len(), 101);
        for w in b.train_loss.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn rf_and_et_agree_when_cuts_cannot_differ() {
        // binary features: any cut in [0, 1) separates the same rows
        let mut r = rng::rng(8);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|_| (0..4).map(|_| (r.random::<f64>() < 0.5) as u8 as f64).collect())
            .collect();
        let y: Vec<u8> = rows.iter().map(|v| ((v[0] as u8) ^ (v[2] as u8)) | (v[3] as u8 & v[1] as u8)).collect();
        let x = matrix(&rows);
        let params = ForestParams {
            n_trees: 5,
            max_depth: 6,
            max_features: MaxFeatures::All,
            bootstrap: false,
            positive_weight: 1.0,
        };
        let rf = Forest::fit(&x, &y, &params, ThresholdMode::Best, 3);
        let et = Forest::fit(&x, &y, &params, ThresholdMode::Random, 3);
        for (a, b) in rf.trees.iter().zip(&et.trees) {
            assert_eq!(a.nodes.len(), b.nodes.len());
            for (na, nb) in a.nodes.iter().zip(&b.nodes) {
                match (na, nb) {
                    (tree::Node::Leaf { value: va }, tree::Node::Leaf { value: vb }) => assert_eq!(va, vb),
                    (
                        tree::Node::Split { column: ca, left: la, right: ra, .. },
                        tree::Node::Split { column: cb, left: lb, right: rb, .. },
                    ) => assert_eq!((ca, la, ra), (cb, lb, rb)),
                    _ => panic!("node shapes differ"),
                }
            }
        }
        for mask in 0..16u32 {
            let probe: Vec<f64> = (0..4).map(|b| ((mask >> b) & 1) as f64).collect();
            assert_eq!(rf.predict_row(&probe), et.predict_row(&probe));
        }
    }
}
