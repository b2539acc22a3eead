//! Loan CSV files described by a small schema:
//! `{"target": name, "positive_label": value, "columns": {name: "numeric" | "categorical"}}`
//! plus optional `"id"` (row-id column) and `"missing"` (cell markers read as blank).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use genfeat_core::loans::{Column, ColumnKind, LoanDataset};
use genfeat_core::{AliasTable, FeatureId};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{AppError, Result};
use crate::io;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoanSchema {
    pub target: String,
    pub positive_label: Value,
    pub columns: BTreeMap<String, ColumnKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default = "default_missing")]
    pub missing: Vec<String>,
}

fn default_missing() -> Vec<String> {
    ["", "NA", "N/A", "NaN", "null"].iter().map(|s| s.to_string()).collect()
}

impl LoanSchema {
    fn is_positive(&self, cell: &str) -> bool {
        match &self.positive_label {
            Value::String(s) => cell == s.trim() || both_numbers_equal(cell, s),
            Value::Number(n) => both_numbers_equal(cell, &n.to_string()),
            Value::Bool(b) => cell.eq_ignore_ascii_case(if *b { "true" } else { "false" }),
            _ => false,
        }
    }
}

fn both_numbers_equal(a: &str, b: &str) -> bool {
    matches!((a.trim().parse::<f64>(), b.trim().parse::<f64>()), (Ok(x), Ok(y)) if x == y)
}

pub fn load_schema(path: &Path) -> Result<LoanSchema> {
    io::read_json(path, "schema")
}

/// Reads `path`. Column names are canonicalized with `aliases`.
pub fn load_loans(path: &Path, schema: &LoanSchema, aliases: &AliasTable) -> Result<LoanDataset> {
    if !path.exists() {
        return Err(AppError::NotFound {
            what: "loan data",
            path: path.to_path_buf(),
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| AppError::format(path, e.to_string()))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| AppError::format(path, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let position = |name: &str| header.iter().position(|h| h == name);
    let target_at = position(&schema.target)
        .ok_or_else(|| AppError::format(path, format!("target column {:?} is not in the header", schema.target)))?;
    let id_at = match &schema.id {
        Some(id) => Some(position(id).ok_or_else(|| AppError::format(path, format!("id column {id:?} is not in the header")))?),
        None => None,
    };
    for name in schema.columns.keys() {
        if position(name).is_none() {
            return Err(AppError::format(path, format!("schema column {name:?} is not in the header")));
        }
    }
    let mut features: Vec<(usize, &str, ColumnKind)> = Vec::new();
    for (j, name) in header.iter().enumerate() {
        if j == target_at || Some(j) == id_at {
            continue;
        }
        let kind = schema
            .columns
            .get(name)
            .ok_or_else(|| AppError::format(path, format!("column {name:?} has no kind in the schema")))?;
        features.push((j, name, *kind));
    }
    let missing: BTreeSet<&str> = schema.missing.iter().map(|s| s.trim()).collect();

    let mut numeric: Vec<Vec<f64>> = vec![Vec::new(); features.len()];
    let mut cells: Vec<Vec<Option<String>>> = vec![Vec::new(); features.len()];
    let mut target = Vec::new();
    let mut row_ids = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| AppError::format(path, e.to_string()))?;
        let line = record.position().map_or(r as u64 + 2, |p| p.line());
        let cell_error = |column: &str, msg: String| AppError::format(path, format!("line {line}, column {column:?}: {msg}"));
        let t = record.get(target_at).unwrap_or("");
        if missing.contains(t) {
            return Err(cell_error(&schema.target, "target is missing".into()));
        }
        target.push(schema.is_positive(t) as u8);
        row_ids.push(match id_at {
            Some(k) => {
                let v = record.get(k).unwrap_or("");
                v.parse::<u64>()
                    .map_err(|_| cell_error(schema.id.as_deref().unwrap_or("id"), format!("cannot parse {v:?} as a row id")))?
            }
            None => r as u64,
        });
        for (slot, (j, name, kind)) in features.iter().enumerate() {
            let v = record.get(*j).unwrap_or("");
            let blank = missing.contains(v);
            match kind {
                ColumnKind::Numeric => {
                    let x = if blank {
                        f64::NAN
                    } else {
                        v.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| cell_error(name, format!("cannot parse {v:?} as a number")))?
                    };
                    numeric[slot].push(x);
                }
                ColumnKind::Categorical => cells[slot].push((!blank).then(|| v.to_owned())),
            }
        }
    }
    if target.is_empty() {
        return Err(AppError::format(path, "no data rows"));
    }
    let columns = features
        .iter()
        .enumerate()
        .map(|(slot, (_, name, kind))| {
            let id = aliases.canonical(name);
            match kind {
                ColumnKind::Numeric => Column::numeric(id, std::mem::take(&mut numeric[slot])),
                ColumnKind::Categorical => Column::categorical(id, cells[slot].iter().map(|c| c.as_deref())),
            }
        })
        .collect();
    LoanDataset::new(columns, target, row_ids).map_err(|e| AppError::format(path, e.to_string()))
}

pub const TARGET_COLUMN: &str = "default";
pub const ID_COLUMN: &str = "loanId";

/// Schema matching what [`write_loans`] emits for `ds`.
pub fn schema_for(ds: &LoanDataset) -> LoanSchema {
    LoanSchema {
        target: TARGET_COLUMN.into(),
        positive_label: Value::from(1),
        columns: ds.columns().iter().map(|c| (c.name.to_string(), c.kind)).collect(),
        id: Some(ID_COLUMN.into()),
        missing: vec![String::new()],
    }
}

/// Writes `loanId, <features...>, default`; blanks for missing values.
pub fn loans_to_csv(ds: &LoanDataset) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec![ID_COLUMN.into()];
    header.extend(ds.columns().iter().map(|c| c.name.to_string()));
    header.push(TARGET_COLUMN.into());
    let err = |e: csv::Error| AppError::Runtime(format!("csv encoding failed: {e}"));
    w.write_record(&header).map_err(err)?;
    let mut row: Vec<String> = Vec::with_capacity(header.len());
    for r in 0..ds.n_rows() {
        row.clear();
        row.push(ds.row_ids()[r].to_string());
        for c in ds.columns() {
            let v = c.values[r];
            row.push(match c.kind {
                ColumnKind::Numeric if v.is_nan() => String::new(),
                ColumnKind::Numeric => format!("{v}"),
                ColumnKind::Categorical => {
                    let level = &c.levels[v as usize];
                    if level == genfeat_core::loans::MISSING_LEVEL {
                        String::new()
                    } else {
                        level.clone()
                    }
                }
            });
        }
        row.push(ds.target()[r].to_string());
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| AppError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| AppError::Runtime(e.to_string()))
}

pub fn write_loans(ds: &LoanDataset, path: &Path) -> Result<()> {
    io::write_text(path, &loans_to_csv(ds)?)
}

/// Features of `ds` named in `wanted` that are absent.
pub fn missing_features<'a>(ds: &LoanDataset, wanted: impl IntoIterator<Item = &'a FeatureId>) -> Vec<FeatureId> {
    wanted.into_iter().filter(|f| ds.column(f).is_none()).cloned().collect()
}
