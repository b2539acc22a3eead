//! Comparison outputs: a paired-row CSV (model, model-G, delta), the full
//! JSON of every run, and a separate timings CSV. Wall times are kept out of
//! the first two so reruns reproduce them byte for byte.

use genfeat_core::metrics::MetricsRow;
use serde::Serialize;

use crate::error::{AppError, Result};
use crate::evaluator::{ComparisonReport, Evaluation, RunRecord};

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn metric_cells(m: &MetricsRow) -> Vec<String> {
    vec![
        fixed(m.accuracy),
        fixed(m.precision),
        fixed(m.recall),
        fixed(m.f1),
        m.roc_auc.map(fixed).unwrap_or_default(),
    ]
}

fn undefined_note(m: &MetricsRow) -> String {
    let mut notes = Vec::new();
    if !m.precision_defined {
        notes.push("precision undefined");
    }
    if !m.recall_defined {
        notes.push("recall undefined");
    }
    if m.roc_auc.is_none() {
        notes.push("roc_auc undefined");
    }
    notes.join("; ")
}

pub const COMPARISON_HEADER: [&str; 9] = [
    "algorithm", "accuracy", "precision", "recall", "f1", "roc_auc", "best_set", "accept", "notes",
];

/// Three rows per model: baseline, best generalized (`-G`), and the delta
/// (generalized minus baseline). `best_set` is 1-based.
pub fn comparison_csv(report: &ComparisonReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| AppError::Runtime(format!("csv encoding failed: {e}"));
    w.write_record(COMPARISON_HEADER).map_err(err)?;
    let blank = || vec![String::new(); 5];
    for m in &report.models {
        let label = m.model.label();
        let mut row = vec![label.to_string()];
        match &m.baseline {
            Some(b) => {
                row.extend(metric_cells(b));
                row.extend([String::new(), String::new(), undefined_note(b)]);
            }
            None => {
                row.extend(blank());
                row.extend([String::new(), String::new(), "run failed".into()]);
            }
        }
        w.write_record(&row).map_err(err)?;

        let mut row = vec![format!("{label}-G")];
        let best_set = m.best_set.map(|i| (i + 1).to_string()).unwrap_or_default();
        match m.best() {
            Some(g) => {
                row.extend(metric_cells(g));
                row.extend([best_set, m.accept.to_string(), undefined_note(g)]);
            }
            None => {
                row.extend(blank());
                row.extend([best_set, m.accept.to_string(), "no successful generalized run".into()]);
            }
        }
        w.write_record(&row).map_err(err)?;

        let mut row = vec!["delta".to_string()];
        for name in ["accuracy", "precision", "recall", "f1", "roc_auc"] {
            row.push(m.deltas.get(name).copied().map(fixed).unwrap_or_default());
        }
        row.extend([String::new(), String::new(), String::new()]);
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| AppError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| AppError::Runtime(e.to_string()))
}

/// `algorithm,set,train_seconds`; `set` is `baseline` or the 1-based set number.
pub fn timings_csv<'a>(records: impl IntoIterator<Item = &'a RunRecord>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| AppError::Runtime(format!("csv encoding failed: {e}"));
    w.write_record(["algorithm", "set", "train_seconds"]).map_err(err)?;
    for r in records {
        let set = r.set_index.map_or_else(|| "baseline".to_string(), |i| (i + 1).to_string());
        w.write_record([r.model.label().to_string(), set, format!("{:.6}", r.train_seconds)])
            .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| AppError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| AppError::Runtime(e.to_string()))
}

#[derive(Serialize)]
pub struct DatasetSummary {
    pub rows: usize,
    pub positives: usize,
    pub train_rows: usize,
    pub train_positives: usize,
    pub test_rows: usize,
    pub test_positives: usize,
    pub holdout_hash: String,
    pub split_warnings: Vec<String>,
}

impl DatasetSummary {
    pub fn of(ev: &Evaluation) -> Self {
        DatasetSummary {
            rows: ev.train.n_rows() + ev.test.n_rows(),
            positives: ev.train.positives() + ev.test.positives(),
            train_rows: ev.train.n_rows(),
            train_positives: ev.train.positives(),
            test_rows: ev.test.n_rows(),
            test_positives: ev.test.positives(),
            holdout_hash: ev.holdout_hash.clone(),
            split_warnings: ev.split_warnings.clone(),
        }
    }
}
