use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::LoanDataset;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.7,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub train: LoanDataset,
    pub test: LoanDataset,
    /// Row positions (into the input dataset) of each side, ascending.
    pub train_index: Vec<usize>,
    pub test_index: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Per class `c`, `round_half_up(train_fraction * count_c)` rows go to train,
/// chosen by a seeded shuffle of that class; the rest go to test.
pub fn stratified_split(ds: &LoanDataset, spec: &SplitSpec) -> Result<SplitOutcome> {
    let f = spec.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::arg(format!("train_fraction must lie in (0, 1), got {f}")));
    }
    let mut train_index = Vec::new();
    let mut test_index = Vec::new();
    let mut warnings = Vec::new();
    for class in [0u8, 1u8] {
        let mut rows: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.target()[i] == class).collect();
        if rows.len() < 2 {
            return Err(Error::Split(format!(
                "class {class} has {} rows; at least 2 are required",
                rows.len()
            )));
        }
        rows.shuffle(&mut rng::stream(spec.seed, class as u64));
        let n_train = train_count(f, rows.len());
        if n_train == rows.len() {
            warnings.push(format!("class {class}: rounding leaves no test rows"));
        }
        if n_train == 0 {
            warnings.push(format!("class {class}: rounding leaves no train rows"));
        }
        train_index.extend_from_slice(&rows[..n_train]);
        test_index.extend_from_slice(&rows[n_train..]);
    }
    train_index.sort_unstable();
    test_index.sort_unstable();
    Ok(SplitOutcome {
        train: ds.take(&train_index),
        test: ds.take(&test_index),
        train_index,
        test_index,
        warnings,
    })
}

/// Round half up.
pub(crate) fn train_count(fraction: f64, count: usize) -> usize {
    let exact = fraction * count as f64;
    (libm::floor(exact + 0.5) as usize).min(count)
}
