//! Exact Shapley decomposition of single predictions.
//!
//! The value of a coalition `S` is the model output on the sample with every
//! feature outside `S` replaced by its reference value. The output then
//! splits as `p = baseline + sum(phi)`, with `baseline` the output on the
//! reference itself.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::concepts::{Concept, ConceptMap};
use crate::encode::median;
use crate::error::{Error, Result};
use crate::feature::FeatureId;
use crate::loans::{ColumnKind, FeatureFrame};

/// Exact enumeration visits `2^d` coalitions; wider inputs are refused.
pub const MAX_EXACT_FEATURES: usize = 12;

/// Anything that maps raw feature rows to a probability.
pub trait Predictor {
    fn features(&self) -> &[FeatureId];

    /// `rows` is row-major with `features().len()` values per row.
    fn predict_rows(&self, rows: &[f64]) -> Result<Vec<f64>>;
}

/// Per-feature replacement values: train median for numerics, train mode
/// for categoricals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceInput {
    pub features: Vec<FeatureId>,
    pub values: Vec<f64>,
}

impl ReferenceInput {
    pub fn from_frame(frame: &FeatureFrame) -> Self {
        let values = (0..frame.width())
            .map(|j| {
                let column = (0..frame.n_rows).map(|r| frame.row(r)[j]);
                match frame.kinds[j] {
                    ColumnKind::Numeric => {
                        let present: Vec<f64> = column.filter(|v| !v.is_nan()).collect();
                        median(&present).unwrap_or(0.0)
                    }
                    ColumnKind::Categorical => mode(column),
                }
            })
            .collect();
        ReferenceInput {
            features: frame.features.clone(),
            values,
        }
    }
}

/// Most frequent code; ties go to the smallest.
fn mode(values: impl Iterator<Item = f64>) -> f64 {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v as u32).or_default() += 1;
    }
    let mut best: Option<(u32, usize)> = None;
    for (code, n) in counts {
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((code, n));
        }
    }
    best.map_or(0.0, |(c, _)| c as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributionReport {
    pub sample_id: u64,
    pub p_default: f64,
    pub baseline: f64,
    /// One entry per model feature, in model order.
    pub contributions: Vec<(FeatureId, f64)>,
    pub concept_totals: BTreeMap<Concept, f64>,
    pub unmapped_total: f64,
}

impl ContributionReport {
    pub fn contribution_sum(&self) -> f64 {
        self.contributions.iter().map(|(_, v)| v).sum()
    }

    /// `|p_default - baseline - sum(phi)|`
    pub fn efficiency_gap(&self) -> f64 {
        libm::fabs(self.p_default - self.baseline - self.contribution_sum())
    }

    /// Each contribution as a share of the total absolute contribution.
    /// All zeros when every contribution is zero.
    pub fn shares(&self) -> Vec<(FeatureId, f64)> {
        let total: f64 = self.contributions.iter().map(|(_, v)| libm::fabs(*v)).sum();
        self.contributions
            .iter()
            .map(|(f, v)| (f.clone(), if total > 0.0 { v / total } else { 0.0 }))
            .collect()
    }
}

/// Shapley values of `x` (raw values, model feature order) against `reference`.
pub fn shapley_contributions<P: Predictor + ?Sized>(
    model: &P,
    sample_id: u64,
    x: &[f64],
    reference: &ReferenceInput,
) -> Result<ContributionReport> {
    let features = model.features();
    let d = features.len();
    if d > MAX_EXACT_FEATURES {
        return Err(Error::Unsupported(format!(
            "exact Shapley values over {d} features (limit {MAX_EXACT_FEATURES})"
        )));
    }
    if reference.features != features {
        return Err(Error::contract("reference features differ from model features"));
    }
    if x.len() != d {
        return Err(Error::contract(format!("sample has {} values, model expects {d}", x.len())));
    }
    let n_coalitions = 1usize << d;
    let mut rows = Vec::with_capacity(n_coalitions * d);
    for mask in 0..n_coalitions {
        rows.extend((0..d).map(|j| if mask >> j & 1 == 1 { x[j] } else { reference.values[j] }));
    }
    let value = model.predict_rows(&rows)?;
    if value.len() != n_coalitions {
        return Err(Error::contract("predictor returned the wrong number of outputs"));
    }
    let weight = shapley_weights(d);
    let mut phi = vec![0.0; d];
    for (g, slot) in phi.iter_mut().enumerate() {
        let bit = 1usize << g;
        let mut acc = 0.0;
        for mask in 0..n_coalitions {
            if mask & bit == 0 {
                acc += weight[mask.count_ones() as usize] * (value[mask | bit] - value[mask]);
            }
        }
        *slot = acc;
    }
    Ok(ContributionReport {
        sample_id,
        p_default: value[n_coalitions - 1],
        baseline: value[0],
        contributions: features.iter().cloned().zip(phi).collect(),
        concept_totals: BTreeMap::new(),
        unmapped_total: 0.0,
    })
}

/// `w(s) = s! (d - s - 1)! / d!` for coalition sizes `s < d`.
fn shapley_weights(d: usize) -> Vec<f64> {
    let mut fact = vec![1.0f64; d + 1];
    for k in 1..=d {
        fact[k] = fact[k - 1] * k as f64;
    }
    (0..d.max(1)).map(|s| fact[s] * fact[d.saturating_sub(s + 1)] / fact[d]).collect()
}

/// Fills `concept_totals` (every concept present, zero when empty) and
/// `unmapped_total`.
pub fn aggregate_by_concept(mut report: ContributionReport, map: &ConceptMap) -> ContributionReport {
    let mut totals: BTreeMap<Concept, f64> = Concept::ALL.iter().map(|c| (*c, 0.0)).collect();
    let mut unmapped = 0.0;
    for (f, v) in &report.contributions {
        match map.concept_of(f) {
            Some(c) => *totals.entry(c).or_default() += v,
            None => unmapped += v,
        }
    }
    report.concept_totals = totals;
    report.unmapped_total = unmapped;
    report
}

/// Explains every row of `samples`. Failures stay per sample.
pub fn explain_batch<P: Predictor + ?Sized>(
    model: &P,
    samples: &FeatureFrame,
    sample_ids: &[u64],
    reference: &ReferenceInput,
    map: &ConceptMap,
) -> Vec<Result<ContributionReport>> {
    (0..samples.n_rows)
        .map(|r| {
            if samples.features != model.features() {
                return Err(Error::contract("sample features differ from model features"));
            }
            let id = sample_ids.get(r).copied().unwrap_or(r as u64);
            shapley_contributions(model, id, samples.row(r), reference).map(|rep| aggregate_by_concept(rep, map))
        })
        .collect()
}
