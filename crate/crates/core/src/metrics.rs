//! Confusion-matrix metrics and ROC AUC.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::arg(format!(
            "{} labels but {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut cm = ConfusionMatrix::default();
    for (i, (&t, &p)) in y_true.iter().zip(y_pred).enumerate() {
        match (t, p) {
            (1, 1) => cm.tp += 1,
            (0, 1) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            (1, 0) => cm.fn_ += 1,
            _ => return Err(Error::arg(format!("non-binary value at row {i}"))),
        }
    }
    Ok(cm)
}

/// Threshold metrics. A ratio with a zero denominator is reported as 0 and
/// its `*_defined` flag is false.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_defined: bool,
    pub recall_defined: bool,
    pub f1_defined: bool,
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, false)
    } else {
        (num as f64 / den as f64, true)
    }
}

pub fn summarize(cm: &ConfusionMatrix) -> Summary {
    let (accuracy, _) = ratio(cm.tp + cm.tn, cm.total());
    let (precision, precision_defined) = ratio(cm.tp, cm.tp + cm.fp);
    let (recall, recall_defined) = ratio(cm.tp, cm.tp + cm.fn_);
    // 2PR/(P+R) simplifies to 2tp/(2tp+fp+fn); defined when both P and R are
    // and at least one is non-zero
    let (f1, f1_defined) = if precision_defined && recall_defined {
        ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn_)
    } else {
        (0.0, false)
    };
    Summary {
        accuracy,
        precision,
        recall,
        f1,
        precision_defined,
        recall_defined,
        f1_defined: f1_defined && cm.tp > 0,
    }
}

/// One evaluated run in the results-table column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `None` when the evaluated labels hold a single class.
    pub roc_auc: Option<f64>,
    pub confusion: ConfusionMatrix,
    pub precision_defined: bool,
    pub recall_defined: bool,
}

impl MetricsRow {
    pub fn evaluate(y_true: &[u8], scores: &[f64], threshold: f64) -> Result<MetricsRow> {
        let pred = crate::models::classify(scores, threshold)?;
        let cm = confusion(y_true, &pred)?;
        let s = summarize(&cm);
        let roc_auc = match roc_auc(y_true, scores) {
            Ok(v) => Some(v),
            Err(Error::UndefinedMetric(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(MetricsRow {
            accuracy: s.accuracy,
            precision: s.precision,
            recall: s.recall,
            f1: s.f1,
            roc_auc,
            confusion: cm,
            precision_defined: s.precision_defined,
            recall_defined: s.recall_defined,
        })
    }

    /// Metric by name: accuracy, precision, recall, f1 or roc_auc.
    pub fn get(&self, metric: &str) -> Result<f64> {
        match metric {
            "accuracy" => Ok(self.accuracy),
            "precision" => Ok(self.precision),
            "recall" => Ok(self.recall),
            "f1" => Ok(self.f1),
            "roc_auc" => Ok(self.roc_auc.unwrap_or(0.0)),
            other => Err(Error::arg(format!("unknown metric {other:?}"))),
        }
    }
}

pub const METRIC_NAMES: [&str; 5] = ["accuracy", "precision", "recall", "f1", "roc_auc"];

fn check_scores(y_true: &[u8], scores: &[f64]) -> Result<(usize, usize)> {
    if y_true.len() != scores.len() {
        return Err(Error::arg(format!("{} labels but {} scores", y_true.len(), scores.len())));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::arg("scores contain NaN"));
    }
    if y_true.iter().any(|&y| y > 1) {
        return Err(Error::arg("labels must be 0/1"));
    }
    let pos = y_true.iter().filter(|&&y| y == 1).count();
    let neg = y_true.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedMetric(
            "ROC AUC needs both classes in y_true".into(),
        ));
    }
    Ok((pos, neg))
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half (Mann-Whitney statistic with average ranks).
pub fn roc_auc(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    let (pos, neg) = check_scores(y_true, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // ranks doubled so tied averages stay integral
    let mut rank_sum2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg2 = (i + 1 + j + 1) as u128;
        let tied_pos = order[i..=j].iter().filter(|&&k| y_true[k] == 1).count() as u128;
        rank_sum2 += avg2 * tied_pos;
        i = j + 1;
    }
    let (p, n) = (pos as u128, neg as u128);
    // U = rank_sum - p(p+1)/2; work in halves to stay exact
    let u2 = rank_sum2 - p * (p + 1);
    Ok(u2 as f64 / (2 * p * n) as f64)
}

/// Area under the ROC curve by the trapezoid rule over tie-grouped thresholds.
pub fn roc_auc_trapezoid(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    let (pos, neg) = check_scores(y_true, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let (mut tp, mut fp) = (0u64, 0u64);
    // accumulate twice the area in count units: sum (fp_step) * (tp_prev + tp)
    let mut area2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let (tp0, fp0) = (tp, fp);
        let mut j = i;
        loop {
            if y_true[order[j]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            if j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
                j += 1;
            } else {
                break;
            }
        }
        area2 += (fp - fp0) as u128 * (tp0 + tp) as u128;
        i = j + 1;
    }
    Ok(area2 as f64 / (2 * pos as u128 * neg as u128) as f64)
}

/// ROC points `(fpr, tpr)` from (0, 0) to (1, 1), one per distinct score.
pub fn roc_curve(y_true: &[u8], scores: &[f64]) -> Result<Vec<(f64, f64)>> {
    let (pos, neg) = check_scores(y_true, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut out = alloc::vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    for (k, &i) in order.iter().enumerate() {
        if y_true[i] == 1 {
            tp += 1;
        } else {
            fp += 1;
        }
        if k + 1 == order.len() || scores[order[k + 1]] != scores[i] {
            out.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
        }
    }
    Ok(out)
}
