//! Encoder, trained model and reference input bundled for raw-row prediction.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{fit, ModelKind, ModelSpec, TrainedModel};
use crate::encode::Encoder;
use crate::error::{Error, Result};
use crate::explainer::{Predictor, ReferenceInput};
use crate::feature::FeatureId;
use crate::loans::{FeatureFrame, LoanDataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub features: Vec<FeatureId>,
    pub encoder: Encoder,
    pub model: TrainedModel,
    pub reference: ReferenceInput,
}

impl Pipeline {
    /// Fits encoder, reference and model on `train` restricted to `features`.
    pub fn train(spec: &ModelSpec, train: &LoanDataset, features: &[FeatureId]) -> Result<Pipeline> {
        if features.is_empty() {
            return Err(Error::arg("a model needs at least one feature"));
        }
        let frame = train.frame(features)?;
        let encoder = Encoder::fit(&frame, spec.kind().encoding())?;
        let x = encoder.transform(&frame)?;
        let model = fit(spec, &x, train.target())?;
        Ok(Pipeline {
            features: features.to_vec(),
            reference: ReferenceInput::from_frame(&frame),
            encoder,
            model,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }

    pub fn predict_frame(&self, frame: &FeatureFrame) -> Result<Vec<f64>> {
        let x = self.encoder.transform(frame)?;
        self.model.predict_proba(&x)
    }

    pub fn predict_dataset(&self, ds: &LoanDataset) -> Result<Vec<f64>> {
        self.predict_frame(&ds.frame(&self.features)?)
    }

    /// Importance per model feature, in model order.
    pub fn feature_importance(&self) -> Result<Vec<(FeatureId, f64)>> {
        let imp = self.model.feature_importance()?;
        Ok(self
            .features
            .iter()
            .enumerate()
            .map(|(j, f)| (f.clone(), imp.get(j).copied().unwrap_or(0.0)))
            .collect())
    }
}

impl Predictor for Pipeline {
    fn features(&self) -> &[FeatureId] {
        &self.features
    }

    fn predict_rows(&self, rows: &[f64]) -> Result<Vec<f64>> {
        let frame = FeatureFrame::new(self.features.clone(), self.encoder.kinds.clone(), rows.to_vec())?;
        self.predict_frame(&frame)
    }
}
