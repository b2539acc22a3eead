//! Columnar loan records with a binary default target.

mod select;
mod split;
mod synth;

pub use select::{select_features, select_features_with};
pub use split::{stratified_split, SplitOutcome, SplitSpec};
pub use synth::{generate_synthetic, GeneratorConfig, SignalTerm};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature::FeatureId;

/// Category assigned to blank categorical cells.
pub const MISSING_LEVEL: &str = "MISSING";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

/// One feature column. Numeric cells hold the value (NaN when missing);
/// categorical cells hold an index into `levels` as `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: FeatureId,
    pub kind: ColumnKind,
    pub values: Vec<f64>,
    pub levels: Vec<String>,
}

impl Column {
    pub fn numeric(name: FeatureId, values: Vec<f64>) -> Self {
        Column {
            name,
            kind: ColumnKind::Numeric,
            values,
            levels: Vec::new(),
        }
    }

    /// Interns string cells; `None` becomes [`MISSING_LEVEL`].
    pub fn categorical<'a>(name: FeatureId, cells: impl IntoIterator<Item = Option<&'a str>>) -> Self {
        let mut col = Column {
            name,
            kind: ColumnKind::Categorical,
            values: Vec::new(),
            levels: Vec::new(),
        };
        for cell in cells {
            let code = col.intern(cell.unwrap_or(MISSING_LEVEL));
            col.values.push(code as f64);
        }
        col
    }

    pub fn intern(&mut self, level: &str) -> usize {
        match self.levels.iter().position(|l| l == level) {
            Some(i) => i,
            None => {
                self.levels.push(String::from(level));
                self.levels.len() - 1
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoanDataset {
    columns: Vec<Column>,
    target: Vec<u8>,
    /// Position of each row in the original source, carried through splits.
    row_ids: Vec<u64>,
}

impl LoanDataset {
    pub fn new(columns: Vec<Column>, target: Vec<u8>, row_ids: Vec<u64>) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::validation("dataset has no rows"));
        }
        if row_ids.len() != target.len() {
            return Err(Error::validation("row id count differs from target length"));
        }
        if let Some(bad) = target.iter().position(|&t| t > 1) {
            return Err(Error::validation(format!("row {bad}: target must be 0 or 1")));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.len() != target.len() {
                return Err(Error::validation(format!(
                    "column {} has {} values for {} rows",
                    c.name,
                    c.len(),
                    target.len()
                )));
            }
            if columns[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::validation(format!("duplicate column {}", c.name)));
            }
            if c.kind == ColumnKind::Categorical {
                let n = c.levels.len() as f64;
                if c.values.iter().any(|v| !(libm::trunc(*v) == *v && *v >= 0.0 && *v < n)) {
                    return Err(Error::validation(format!("column {} has invalid category codes", c.name)));
                }
            }
        }
        Ok(LoanDataset {
            columns,
            target,
            row_ids,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn feature_names(&self) -> Vec<FeatureId> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn column(&self, name: &FeatureId) -> Option<&Column> {
        self.columns.iter().find(|c| &c.name == name)
    }

    pub fn target(&self) -> &[u8] {
        &self.target
    }

    pub fn row_ids(&self) -> &[u64] {
        &self.row_ids
    }

    pub fn positives(&self) -> usize {
        self.target.iter().filter(|&&t| t == 1).count()
    }

    pub fn positive_ratio(&self) -> f64 {
        self.positives() as f64 / self.n_rows() as f64
    }

    /// Rows at `indices`, in the given order.
    pub fn take(&self, indices: &[usize]) -> LoanDataset {
        LoanDataset {
            columns: self
                .columns
                .iter()
                .map(|c| Column {
                    name: c.name.clone(),
                    kind: c.kind,
                    values: indices.iter().map(|&i| c.values[i]).collect(),
                    levels: c.levels.clone(),
                })
                .collect(),
            target: indices.iter().map(|&i| self.target[i]).collect(),
            row_ids: indices.iter().map(|&i| self.row_ids[i]).collect(),
        }
    }

    /// Row-major view over `features`, in that order.
    pub fn frame(&self, features: &[FeatureId]) -> Result<FeatureFrame> {
        let cols = features
            .iter()
            .map(|f| {
                self.column(f)
                    .ok_or_else(|| Error::contract(format!("dataset has no column {f}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = self.n_rows();
        let mut data = Vec::with_capacity(n * cols.len());
        for r in 0..n {
            data.extend(cols.iter().map(|c| c.values[r]));
        }
        Ok(FeatureFrame {
            features: features.to_vec(),
            kinds: cols.iter().map(|c| c.kind).collect(),
            n_rows: n,
            data,
        })
    }
}

/// Raw (unencoded) feature values, row-major, for a fixed feature list.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureFrame {
    pub features: Vec<FeatureId>,
    pub kinds: Vec<ColumnKind>,
    pub n_rows: usize,
    pub data: Vec<f64>,
}

impl FeatureFrame {
    pub fn new(features: Vec<FeatureId>, kinds: Vec<ColumnKind>, data: Vec<f64>) -> Result<Self> {
        if features.len() != kinds.len() {
            return Err(Error::arg("feature and kind lists differ in length"));
        }
        let width = features.len().max(1);
        if data.len() % width != 0 || (features.is_empty() && !data.is_empty()) {
            return Err(Error::arg("data length is not a multiple of the feature count"));
        }
        let n_rows = if features.is_empty() { 0 } else { data.len() / width };
        Ok(FeatureFrame {
            features,
            kinds,
            n_rows,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.features.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.width();
        &self.data[r * w..(r + 1) * w]
    }
}
