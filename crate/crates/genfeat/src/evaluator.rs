//! Original-versus-generalized comparison: every model kind is trained on the
//! original features and on each generalized set, all runs are scored on one
//! shared holdout, and the best generalized run per model is checked against
//! an allowable drop of the selection metric.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use genfeat_core::loans::{stratified_split, LoanDataset, SplitSpec};
use genfeat_core::metrics::{MetricsRow, METRIC_NAMES};
use genfeat_core::models::{ModelKind, ModelSpec, Pipeline};
use genfeat_core::{Error as CoreError, FeatureId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::io::sha256_hex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub original_features: Vec<FeatureId>,
    pub generalized_sets: Vec<Vec<FeatureId>>,
    pub models: Vec<ModelSpec>,
    pub split: SplitSpec,
    /// Largest tolerated drop of the selection metric.
    pub threshold: f64,
    pub selection_metric: String,
    /// Probability cut for the confusion-matrix metrics.
    pub decision_threshold: f64,
}

impl ExperimentPlan {
    pub fn validate(&self, ds: &LoanDataset) -> Result<()> {
        let invalid = |m: String| AppError::Core(CoreError::Validation(m));
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(invalid(format!("threshold must be a non-negative number, got {}", self.threshold)));
        }
        if !METRIC_NAMES.contains(&self.selection_metric.as_str()) {
            return Err(AppError::Core(CoreError::Argument(format!(
                "unknown selection metric {:?} (expected one of {})",
                self.selection_metric,
                METRIC_NAMES.join(", ")
            ))));
        }
        if !(0.0..=1.0).contains(&self.decision_threshold) {
            return Err(invalid(format!("decision threshold {} is outside [0, 1]", self.decision_threshold)));
        }
        if self.models.is_empty() {
            return Err(invalid("the plan lists no models".into()));
        }
        let mut kinds: Vec<ModelKind> = self.models.iter().map(ModelSpec::kind).collect();
        kinds.sort();
        kinds.dedup();
        if kinds.len() != self.models.len() {
            return Err(invalid("each model kind may appear once".into()));
        }
        for spec in &self.models {
            spec.validate()?;
        }
        if self.original_features.is_empty() {
            return Err(invalid("no original features".into()));
        }
        let absent = |features: &[FeatureId]| -> Vec<String> {
            features.iter().filter(|f| ds.column(f).is_none()).map(|f| f.to_string()).collect()
        };
        let gone = absent(&self.original_features);
        if !gone.is_empty() {
            return Err(invalid(format!("original features missing from the dataset: {}", gone.join(", "))));
        }
        for (i, set) in self.generalized_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(invalid(format!("generalized set {} is empty", i + 1)));
            }
            let gone = absent(set);
            if !gone.is_empty() {
                return Err(invalid(format!(
                    "generalized set {} has features missing from the dataset: {}",
                    i + 1,
                    gone.join(", ")
                )));
            }
        }
        Ok(())
    }
}

/// One trained-and-scored configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: ModelKind,
    /// Zero-based index into the plan's generalized sets; `None` for baseline.
    pub set_index: Option<usize>,
    pub features: Vec<FeatureId>,
    pub metrics: Option<MetricsRow>,
    pub error: Option<String>,
    pub warnings: Vec<String>,
    /// sha256 over the row ids this run was scored on.
    pub holdout_hash: String,
    /// Training wall time. Kept out of JSON so reports are byte-stable.
    #[serde(skip)]
    pub train_seconds: f64,
}

pub struct RunOutput {
    pub record: RunRecord,
    pub pipeline: Option<Pipeline>,
}

pub fn holdout_hash(ds: &LoanDataset) -> String {
    let bytes: Vec<u8> = ds.row_ids().iter().flat_map(|id| id.to_le_bytes()).collect();
    sha256_hex(&bytes)
}

fn run_one(
    spec: &ModelSpec,
    features: &[FeatureId],
    set_index: Option<usize>,
    train: &LoanDataset,
    test: &LoanDataset,
    decision_threshold: f64,
) -> RunOutput {
    let mut record = RunRecord {
        model: spec.kind(),
        set_index,
        features: features.to_vec(),
        metrics: None,
        error: None,
        warnings: Vec::new(),
        holdout_hash: holdout_hash(test),
        train_seconds: 0.0,
    };
    let attempt = catch_unwind(AssertUnwindSafe(|| -> genfeat_core::Result<(Pipeline, MetricsRow, f64)> {
        let start = Instant::now();
        let mut pipeline = Pipeline::train(spec, train, features)?;
        let seconds = start.elapsed().as_secs_f64();
        pipeline.model.train_seconds = seconds;
        let scores = pipeline.predict_dataset(test)?;
        let metrics = MetricsRow::evaluate(test.target(), &scores, decision_threshold)?;
        Ok((pipeline, metrics, seconds))
    }));
    match attempt {
        Ok(Ok((pipeline, metrics, seconds))) => {
            record.metrics = Some(metrics);
            record.warnings = pipeline.model.warnings.clone();
            if metrics.roc_auc.is_none() {
                record.warnings.push("holdout holds a single class; ROC AUC undefined".into());
            }
            record.train_seconds = seconds;
            RunOutput {
                record,
                pipeline: Some(pipeline),
            }
        }
        Ok(Err(e)) => {
            record.error = Some(e.to_string());
            RunOutput { record, pipeline: None }
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "training panicked".into());
            record.error = Some(format!("run aborted: {msg}"));
            RunOutput { record, pipeline: None }
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| AppError::Runtime(format!("cannot start worker pool: {e}")))
}

/// Runs `(spec, features, set_index)` jobs on at most `jobs` workers.
/// Output order follows input order whatever the worker count.
fn run_many(
    tasks: Vec<(&ModelSpec, &[FeatureId], Option<usize>)>,
    train: &LoanDataset,
    test: &LoanDataset,
    decision_threshold: f64,
    jobs: usize,
) -> Result<Vec<RunOutput>> {
    Ok(pool(jobs)?.install(|| {
        tasks
            .par_iter()
            .map(|(spec, features, set)| run_one(spec, features, *set, train, test, decision_threshold))
            .collect()
    }))
}

/// One run per model on the original features.
pub fn run_baseline(plan: &ExperimentPlan, train: &LoanDataset, test: &LoanDataset, jobs: usize) -> Result<Vec<RunOutput>> {
    let tasks = plan
        .models
        .iter()
        .map(|s| (s, plan.original_features.as_slice(), None))
        .collect();
    run_many(tasks, train, test, plan.decision_threshold, jobs)
}

/// One run per model and generalized set, model-major.
pub fn run_generalized(plan: &ExperimentPlan, train: &LoanDataset, test: &LoanDataset, jobs: usize) -> Result<Vec<RunOutput>> {
    let tasks = plan
        .models
        .iter()
        .flat_map(|s| {
            plan.generalized_sets
                .iter()
                .enumerate()
                .map(move |(i, set)| (s, set.as_slice(), Some(i)))
        })
        .collect();
    run_many(tasks, train, test, plan.decision_threshold, jobs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub model: ModelKind,
    pub baseline: Option<MetricsRow>,
    /// One entry per generalized set; `None` for failed runs.
    pub generalized: Vec<Option<MetricsRow>>,
    /// Zero-based index of the generalized run maximizing the selection
    /// metric (first one on ties).
    pub best_set: Option<usize>,
    /// Best generalized minus baseline, per metric.
    pub deltas: BTreeMap<String, f64>,
    pub accept: bool,
}

impl ModelComparison {
    pub fn best(&self) -> Option<&MetricsRow> {
        self.best_set.and_then(|i| self.generalized[i].as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub threshold: f64,
    pub selection_metric: String,
    pub models: Vec<ModelComparison>,
}

/// Index of the largest value; ties keep the first. `None` entries are skipped.
pub fn argmax_first(values: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Picks each model's best generalized run and applies the acceptance rule
/// `baseline - best <= threshold` on `metric`.
pub fn compare(baseline: &[RunRecord], generalized: &[RunRecord], threshold: f64, metric: &str) -> Result<ComparisonReport> {
    if !METRIC_NAMES.contains(&metric) {
        return Err(AppError::Core(CoreError::Argument(format!("unknown metric {metric:?}"))));
    }
    let mut base_kinds: Vec<ModelKind> = baseline.iter().map(|r| r.model).collect();
    let mut gen_kinds: Vec<ModelKind> = generalized.iter().map(|r| r.model).collect();
    base_kinds.sort();
    base_kinds.dedup();
    gen_kinds.sort();
    gen_kinds.dedup();
    if base_kinds != gen_kinds {
        return Err(AppError::Core(CoreError::Argument(
            "baseline and generalized runs cover different model kinds".into(),
        )));
    }
    let mut models = Vec::new();
    for b in baseline {
        let mut runs: Vec<&RunRecord> = generalized.iter().filter(|r| r.model == b.model).collect();
        runs.sort_by_key(|r| r.set_index);
        let rows: Vec<Option<MetricsRow>> = runs.iter().map(|r| r.metrics).collect();
        let scores = rows
            .iter()
            .map(|m| m.map(|m| m.get(metric)).transpose())
            .collect::<genfeat_core::Result<Vec<_>>>()?;
        let best_set = argmax_first(&scores);
        let mut deltas = BTreeMap::new();
        let mut accept = false;
        if let (Some(base), Some(best)) = (b.metrics, best_set.and_then(|i| rows[i])) {
            for name in METRIC_NAMES {
                if name == "roc_auc" && (base.roc_auc.is_none() || best.roc_auc.is_none()) {
                    continue;
                }
                deltas.insert(name.to_string(), best.get(name)? - base.get(name)?);
            }
            accept = base.get(metric)? - best.get(metric)? <= threshold;
        }
        models.push(ModelComparison {
            model: b.model,
            baseline: b.metrics,
            generalized: rows,
            best_set,
            deltas,
            accept,
        });
    }
    Ok(ComparisonReport {
        threshold,
        selection_metric: metric.to_string(),
        models,
    })
}

/// Everything one `evaluate` invocation produces.
pub struct Evaluation {
    pub train: LoanDataset,
    pub test: LoanDataset,
    pub split_warnings: Vec<String>,
    pub holdout_hash: String,
    pub baseline: Vec<RunOutput>,
    pub generalized: Vec<RunOutput>,
    pub report: ComparisonReport,
}

impl Evaluation {
    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.baseline.iter().chain(&self.generalized).map(|r| &r.record)
    }

    /// Pipeline of `model`'s best generalized run.
    pub fn best_pipeline(&self, model: ModelKind) -> Option<(usize, &Pipeline)> {
        let cmp = self.report.models.iter().find(|m| m.model == model)?;
        let set = cmp.best_set?;
        self.generalized
            .iter()
            .find(|r| r.record.model == model && r.record.set_index == Some(set))
            .and_then(|r| r.pipeline.as_ref())
            .map(|p| (set, p))
    }
}

/// Runs a validated plan on already-split data.
pub fn evaluate_split(plan: &ExperimentPlan, train: LoanDataset, test: LoanDataset, split_warnings: Vec<String>, jobs: usize) -> Result<Evaluation> {
    plan.validate(&train)?;
    let baseline = run_baseline(plan, &train, &test, jobs)?;
    let generalized = run_generalized(plan, &train, &test, jobs)?;
    let base_records: Vec<RunRecord> = baseline.iter().map(|r| r.record.clone()).collect();
    let gen_records: Vec<RunRecord> = generalized.iter().map(|r| r.record.clone()).collect();
    let report = compare(&base_records, &gen_records, plan.threshold, &plan.selection_metric)?;
    Ok(Evaluation {
        holdout_hash: holdout_hash(&test),
        train,
        test,
        split_warnings,
        baseline,
        generalized,
        report,
    })
}

/// Splits `ds` per the plan, then runs it.
pub fn evaluate(plan: &ExperimentPlan, ds: &LoanDataset, jobs: usize) -> Result<Evaluation> {
    plan.validate(ds)?;
    let split = stratified_split(ds, &plan.split)?;
    evaluate_split(plan, split.train, split.test, split.warnings, jobs)
}
