//! Feature ranking by random-forest impurity decrease.

use alloc::format;
use alloc::vec::Vec;

use super::LoanDataset;
use crate::encode::{Encoder, EncodingMode};
use crate::error::{Error, Result};
use crate::feature::FeatureId;
use crate::models::{self, ForestParams, Hyperparams, ModelSpec};

/// Top `keep` columns of `ds` by mean impurity decrease of a default random
/// forest, most important first. Ties keep column order.
pub fn select_features(ds: &LoanDataset, keep: usize, seed: u64) -> Result<Vec<FeatureId>> {
    select_features_with(ds, keep, &ForestParams::random_forest(), seed)
}

pub fn select_features_with(ds: &LoanDataset, keep: usize, params: &ForestParams, seed: u64) -> Result<Vec<FeatureId>> {
    let names = ds.feature_names();
    if keep == 0 {
        return Err(Error::arg("keep must be positive"));
    }
    if keep > names.len() {
        return Err(Error::arg(format!("keep = {keep} exceeds the {} feature columns", names.len())));
    }
    let frame = ds.frame(&names)?;
    let x = Encoder::fit(&frame, EncodingMode::Tree)?.transform(&frame)?;
    let spec = ModelSpec {
        hyper: Hyperparams::RandomForest(*params),
        seed,
    };
    let importance = models::fit(&spec, &x, ds.target())?.feature_importance()?;
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| importance[b].total_cmp(&importance[a]).then(a.cmp(&b)));
    Ok(order.into_iter().take(keep).map(|j| names[j].clone()).collect())
}
