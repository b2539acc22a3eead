//! Literature feature corpus: which papers use which explanatory variables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature::{AliasTable, FeatureId};

/// One record of the corpus file, before canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPaperRecord {
    pub paper_id: String,
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub features: BTreeSet<FeatureId>,
}

/// Immutable, validated corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureCorpus {
    papers: Vec<PaperRecord>,
    universe: BTreeSet<FeatureId>,
}

impl FeatureCorpus {
    /// Canonicalizes and validates raw records. Record positions in error
    /// messages are zero-based.
    pub fn from_raw(records: Vec<RawPaperRecord>, aliases: &AliasTable) -> Result<Self> {
        let papers = records
            .into_iter()
            .enumerate()
            .map(|(i, raw)| {
                let mut features = BTreeSet::new();
                for name in &raw.features {
                    if name.trim().is_empty() {
                        return Err(Error::validation(format!(
                            "record {i} ({:?}): empty feature name",
                            raw.paper_id
                        )));
                    }
                    features.insert(aliases.canonical(name));
                }
                Ok(PaperRecord {
                    paper_id: raw.paper_id,
                    features,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(papers)
    }

    pub fn new(papers: Vec<PaperRecord>) -> Result<Self> {
        if papers.is_empty() {
            return Err(Error::validation("corpus has no papers"));
        }
        let mut seen = BTreeMap::new();
        for (i, p) in papers.iter().enumerate() {
            if p.paper_id.trim().is_empty() {
                return Err(Error::validation(format!("record {i}: empty paper_id")));
            }
            if let Some(first) = seen.insert(p.paper_id.as_str(), i) {
                return Err(Error::validation(format!(
                    "duplicate paper_id {:?} at records {first} and {i}",
                    p.paper_id
                )));
            }
            if p.features.is_empty() {
                return Err(Error::validation(format!(
                    "record {i} ({:?}): feature list is empty",
                    p.paper_id
                )));
            }
        }
        let universe = papers
            .iter()
            .flat_map(|p| p.features.iter().cloned())
            .collect();
        Ok(FeatureCorpus { papers, universe })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    pub fn universe(&self) -> &BTreeSet<FeatureId> {
        &self.universe
    }

    /// Number of papers listing `feature`.
    pub fn appearance_count(&self, feature: &FeatureId) -> usize {
        self.papers
            .iter()
            .filter(|p| p.features.contains(feature))
            .count()
    }

    /// Appearance count for every feature in the universe, most frequent first
    /// (ties by name).
    pub fn appearance_table(&self) -> Vec<(FeatureId, usize)> {
        let mut rows: Vec<_> = self
            .universe
            .iter()
            .map(|f| (f.clone(), self.appearance_count(f)))
            .collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        rows
    }

    /// Records in file order, features in canonical order.
    pub fn to_raw(&self) -> Vec<RawPaperRecord> {
        self.papers
            .iter()
            .map(|p| RawPaperRecord {
                paper_id: p.paper_id.clone(),
                features: p.features.iter().map(|f| String::from(f.as_str())).collect(),
            })
            .collect()
    }
}
