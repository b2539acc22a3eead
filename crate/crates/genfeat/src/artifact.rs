//! Saved pipelines. Categorical columns are stored as codes into a per-file
//! level table, so an artifact keeps the training level names and remaps
//! every dataset it is applied to.

use std::collections::BTreeMap;
use std::path::Path;

use genfeat_core::loans::{Column, ColumnKind, LoanDataset};
use genfeat_core::models::Pipeline;
use genfeat_core::{Error as CoreError, FeatureId};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::io::{self, Provenance};

pub const FORMAT: &str = "genfeat-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format: String,
    pub version: u32,
    pub meta: Provenance,
    pub model: String,
    /// 1-based generalized set number; absent for a baseline model.
    pub set_number: Option<usize>,
    pub features: Vec<FeatureId>,
    /// Training level names of each categorical feature, indexed by code.
    pub levels: BTreeMap<FeatureId, Vec<String>>,
    pub pipeline: Pipeline,
}

impl ModelArtifact {
    pub fn new(meta: Provenance, set_number: Option<usize>, pipeline: Pipeline, train: &LoanDataset) -> Result<Self> {
        let mut levels = BTreeMap::new();
        for f in &pipeline.features {
            let col = train
                .column(f)
                .ok_or_else(|| AppError::Core(CoreError::Contract(format!("training data has no column {f}"))))?;
            if col.kind == ColumnKind::Categorical {
                levels.insert(f.clone(), col.levels.clone());
            }
        }
        Ok(ModelArtifact {
            format: FORMAT.into(),
            version: FORMAT_VERSION,
            meta,
            model: pipeline.kind().label().into(),
            set_number,
            features: pipeline.features.clone(),
            levels,
            pipeline,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let a: ModelArtifact = io::read_json(path, "model artifact")?;
        if a.format != FORMAT {
            return Err(AppError::format(path, format!("not a model artifact (format {:?})", a.format)));
        }
        if a.version != FORMAT_VERSION {
            return Err(AppError::format(
                path,
                format!("artifact version {} is not supported (expected {FORMAT_VERSION})", a.version),
            ));
        }
        if a.features != a.pipeline.features {
            return Err(AppError::format(path, "feature list disagrees with the stored pipeline"));
        }
        Ok(a)
    }

    /// The model's columns of `ds`, with categorical codes rewritten to the
    /// training codes. Levels never seen in training get codes past the
    /// training table, which every encoder treats as unseen.
    pub fn align(&self, ds: &LoanDataset) -> Result<LoanDataset> {
        let mut columns = Vec::with_capacity(self.features.len());
        for f in &self.features {
            let col = ds.column(f).ok_or_else(|| {
                AppError::Core(CoreError::Contract(format!("data has no column {f} required by the model")))
            })?;
            match (self.levels.get(f), col.kind) {
                (None, ColumnKind::Numeric) => columns.push(col.clone()),
                (Some(train_levels), ColumnKind::Categorical) => {
                    let mut table = train_levels.clone();
                    let remap: Vec<f64> = col
                        .levels
                        .iter()
                        .map(|name| match table.iter().position(|l| l == name) {
                            Some(i) => i as f64,
                            None => {
                                table.push(name.clone());
                                (table.len() - 1) as f64
                            }
                        })
                        .collect();
                    columns.push(Column {
                        name: col.name.clone(),
                        kind: ColumnKind::Categorical,
                        values: col.values.iter().map(|&v| remap[v as usize]).collect(),
                        levels: table,
                    });
                }
                _ => {
                    return Err(AppError::Core(CoreError::Contract(format!(
                        "column {f} has a different kind than in training"
                    ))))
                }
            }
        }
        Ok(LoanDataset::new(columns, ds.target().to_vec(), ds.row_ids().to_vec())?)
    }
}
