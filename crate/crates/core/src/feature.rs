//! Feature identifiers and spelling normalization.
//!
//! Identity is case-insensitive: a raw name is trimmed and lowercased, resolved
//! through the alias table, and then mapped back to its preferred spelling when
//! the name belongs to the known mortgage-feature vocabulary. Names outside the
//! vocabulary keep their lowercased form.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Canonical feature name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureId(String);

impl FeatureId {
    /// Canonicalize `raw` with the builtin alias table.
    pub fn new(raw: &str) -> Self {
        AliasTable::builtin().canonical(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for FeatureId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Preferred spellings of the mortgage features that appear in the corpus
/// tables and the loan schema.
pub const VOCABULARY: &[&str] = &[
    "creditScore",
    "creditScoreOriginal",
    "creditScoreCoborrower",
    "LTV",
    "LTVoriginal",
    "CLTV",
    "CLTVoriginal",
    "interestRateOriginal",
    "interestRateCurrent",
    "propertyState",
    "postalCode",
    "UPBoriginal",
    "UPBactual",
    "debtToIncomeRatioOriginal",
    "loanAge",
    "numberOfBorrowers",
    "numberOfUnits",
    "currentLoanDelinquencyStatus",
    "propertyType",
    "loanTermOriginal",
    "productType",
    "prepaymentPenaltyMortgageFlag",
];

/// Variant spelling → preferred spelling.
pub const BUILTIN_ALIASES: &[(&str, &str)] = &[
    ("currentDelinquencyStatus", "currentLoanDelinquencyStatus"),
    ("creditScoreCoBorrower", "creditScoreCoborrower"),
];

/// Alias resolution plus vocabulary spelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasTable {
    // lowercase variant -> lowercase target
    aliases: BTreeMap<String, String>,
    // lowercase -> preferred spelling
    spelling: BTreeMap<String, String>,
}

impl AliasTable {
    /// The bundled vocabulary and aliases.
    pub fn builtin() -> Self {
        let mut table = AliasTable {
            aliases: BTreeMap::new(),
            spelling: VOCABULARY
                .iter()
                .map(|s| (s.to_lowercase(), (*s).to_owned()))
                .collect(),
        };
        for (from, to) in BUILTIN_ALIASES {
            table.insert_alias(from, to);
        }
        table
    }

    /// Builtin table extended with extra `variant → canonical` pairs.
    pub fn with_aliases<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut table = Self::builtin();
        for (from, to) in pairs {
            table.insert_alias(from, to);
        }
        table
    }

    fn insert_alias(&mut self, from: &str, to: &str) {
        let from = normalize(from);
        let to = normalize(to);
        if from != to {
            self.aliases.insert(from, to);
        }
    }

    /// Alias pairs in preferred spelling, sorted by variant.
    pub fn alias_pairs(&self) -> Vec<(String, String)> {
        self.aliases
            .iter()
            .map(|(from, to)| (from.clone(), self.spell(to)))
            .collect()
    }

    fn spell(&self, lower: &str) -> String {
        self.spelling
            .get(lower)
            .cloned()
            .unwrap_or_else(|| lower.to_owned())
    }

    pub fn canonical(&self, raw: &str) -> FeatureId {
        let mut key = normalize(raw);
        // alias chains are short; bound the walk in case of a cycle
        for _ in 0..8 {
            match self.aliases.get(&key) {
                Some(next) => key = next.clone(),
                None => break,
            }
        }
        FeatureId(self.spell(&key))
    }
}

impl Default for AliasTable {
    fn default() -> Self {
        Self::builtin()
    }
}

fn normalize(raw: &str) -> String {
    raw.trim().to_lowercase()
}
