//! Feature encoding fitted on training rows only.
//!
//! Tree learners see numerics with missing values filled by the train median
//! and categoricals as integer codes (split by equality). Gradient learners see
//! z-scored numerics and one-hot categoricals over the levels seen in train.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature::FeatureId;
use crate::loans::{ColumnKind, FeatureFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingMode {
    Tree,
    Gradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureEncoding {
    Numeric { fill: f64, mean: f64, scale: f64 },
    Categorical { levels: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    pub mode: EncodingMode,
    pub features: Vec<FeatureId>,
    pub kinds: Vec<ColumnKind>,
    pub encodings: Vec<FeatureEncoding>,
}

/// Dense row-major design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<f64>,
    /// Encoded column → index of its source feature.
    pub provenance: Vec<usize>,
    /// Encoded column holds category codes (equality splits only).
    pub categorical: Vec<bool>,
}

impl EncodedMatrix {
    /// All-numeric matrix from rows; each column is its own feature.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::arg("ragged rows"));
        }
        Ok(EncodedMatrix {
            n_rows: rows.len(),
            n_cols,
            data: rows.iter().flatten().copied().collect(),
            provenance: (0..n_cols).collect(),
            categorical: alloc::vec![false; n_cols],
        })
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    /// Column signature a model checks at predict time.
    pub fn signature(&self) -> InputSignature {
        InputSignature {
            provenance: self.provenance.clone(),
            categorical: self.categorical.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSignature {
    pub provenance: Vec<usize>,
    pub categorical: Vec<bool>,
}

impl InputSignature {
    pub fn width(&self) -> usize {
        self.provenance.len()
    }
}

impl Encoder {
    pub fn fit(frame: &FeatureFrame, mode: EncodingMode) -> Result<Self> {
        let encodings = (0..frame.width())
            .map(|j| {
                let column = (0..frame.n_rows).map(|r| frame.row(r)[j]);
                match frame.kinds[j] {
                    ColumnKind::Numeric => {
                        let present: Vec<f64> = column.filter(|v| !v.is_nan()).collect();
                        let fill = median(&present).unwrap_or(0.0);
                        let n = frame.n_rows.max(1) as f64;
                        // moments after imputation, i.e. of what the model sees
                        let missing = (frame.n_rows - present.len()) as f64;
                        let mean = (present.iter().sum::<f64>() + missing * fill) / n;
                        let var = (present.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                            + missing * (fill - mean) * (fill - mean))
                            / n;
                        let scale = if var > 1e-24 { libm::sqrt(var) } else { 1.0 };
                        FeatureEncoding::Numeric { fill, mean, scale }
                    }
                    ColumnKind::Categorical => {
                        let mut levels: Vec<u32> = column.map(|v| v as u32).collect();
                        levels.sort_unstable();
                        levels.dedup();
                        FeatureEncoding::Categorical { levels }
                    }
                }
            })
            .collect();
        Ok(Encoder {
            mode,
            features: frame.features.clone(),
            kinds: frame.kinds.clone(),
            encodings,
        })
    }

    pub fn signature(&self) -> InputSignature {
        let mut provenance = Vec::new();
        let mut categorical = Vec::new();
        for (j, enc) in self.encodings.iter().enumerate() {
            match (self.mode, enc) {
                (EncodingMode::Gradient, FeatureEncoding::Categorical { levels }) => {
                    provenance.extend(core::iter::repeat_n(j, levels.len()));
                    categorical.extend(core::iter::repeat_n(false, levels.len()));
                }
                (EncodingMode::Tree, FeatureEncoding::Categorical { .. }) => {
                    provenance.push(j);
                    categorical.push(true);
                }
                (_, FeatureEncoding::Numeric { .. }) => {
                    provenance.push(j);
                    categorical.push(false);
                }
            }
        }
        InputSignature {
            provenance,
            categorical,
        }
    }

    pub fn transform(&self, frame: &FeatureFrame) -> Result<EncodedMatrix> {
        if frame.features != self.features {
            return Err(Error::contract(format!(
                "frame features {:?} differ from encoder features {:?}",
                frame.features, self.features
            )));
        }
        let sig = self.signature();
        let n_cols = sig.width();
        let mut data = Vec::with_capacity(frame.n_rows * n_cols);
        for r in 0..frame.n_rows {
            self.encode_row(frame.row(r), &mut data);
        }
        Ok(EncodedMatrix {
            n_rows: frame.n_rows,
            n_cols,
            data,
            provenance: sig.provenance,
            categorical: sig.categorical,
        })
    }

    fn encode_row(&self, raw: &[f64], out: &mut Vec<f64>) {
        for (v, enc) in raw.iter().zip(&self.encodings) {
            match (self.mode, enc) {
                (EncodingMode::Tree, FeatureEncoding::Numeric { fill, .. }) => {
                    out.push(if v.is_nan() { *fill } else { *v });
                }
                (EncodingMode::Gradient, FeatureEncoding::Numeric { fill, mean, scale }) => {
                    let x = if v.is_nan() { *fill } else { *v };
                    out.push((x - mean) / scale);
                }
                (EncodingMode::Tree, FeatureEncoding::Categorical { .. }) => out.push(*v),
                (EncodingMode::Gradient, FeatureEncoding::Categorical { levels }) => {
                    let code = *v as u32;
                    out.extend(levels.iter().map(|l| if *l == code { 1.0 } else { 0.0 }));
                }
            }
        }
    }
}

/// Median of non-empty input; `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}
