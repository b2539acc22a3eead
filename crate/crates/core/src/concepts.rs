//! The five C's of credit as a concept layer over feature names, and the
//! coverage filter that turns length-8 frequent sets into generalized sets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature::{AliasTable, FeatureId};
use crate::miner::ItemSet;
use crate::ratio::Ratio;

/// Size of a generalized feature set.
pub const GENERALIZED_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Concept {
    Character,
    Capacity,
    Capital,
    Conditions,
    Collateral,
}

impl Concept {
    pub const ALL: [Concept; 5] = [
        Concept::Character,
        Concept::Capacity,
        Concept::Capital,
        Concept::Conditions,
        Concept::Collateral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Concept::Character => "Character",
            Concept::Capacity => "Capacity",
            Concept::Capital => "Capital",
            Concept::Conditions => "Conditions",
            Concept::Collateral => "Collateral",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concept {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Concept::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::validation(format!("unknown concept {s:?}")))
    }
}

/// Concept → member features. Every concept is non-empty and no feature
/// belongs to two concepts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptMap {
    members: BTreeMap<Concept, BTreeSet<FeatureId>>,
    #[serde(skip)]
    owner: BTreeMap<FeatureId, Concept>,
}

impl ConceptMap {
    pub fn new(members: BTreeMap<Concept, BTreeSet<FeatureId>>) -> Result<Self> {
        let mut owner = BTreeMap::new();
        for concept in Concept::ALL {
            let feats = members
                .get(&concept)
                .ok_or_else(|| Error::validation(format!("concept map is missing {concept}")))?;
            if feats.is_empty() {
                return Err(Error::validation(format!("concept {concept} has no features")));
            }
            for f in feats {
                if let Some(prev) = owner.insert(f.clone(), concept) {
                    return Err(Error::validation(format!(
                        "feature {f} is mapped to both {prev} and {concept}"
                    )));
                }
            }
        }
        Ok(ConceptMap { members, owner })
    }

    /// Builds a map from concept-name keys (as in the JSON file), canonicalizing
    /// feature names through `aliases`.
    pub fn from_named(named: &BTreeMap<String, Vec<String>>, aliases: &AliasTable) -> Result<Self> {
        let mut members = BTreeMap::new();
        for (key, feats) in named {
            let concept: Concept = key.parse()?;
            let set = feats.iter().map(|f| aliases.canonical(f)).collect();
            if members.insert(concept, set).is_some() {
                return Err(Error::validation(format!("concept {concept} listed twice")));
            }
        }
        Self::new(members)
    }

    /// The bundled five-C mapping.
    pub fn default_map() -> Self {
        let table: [(Concept, &[&str]); 5] = [
            (
                Concept::Character,
                &["creditScore", "creditScoreOriginal", "creditScoreCoborrower"],
            ),
            (
                Concept::Capacity,
                &["debtToIncomeRatioOriginal", "currentDelinquencyStatus"],
            ),
            (Concept::Capital, &["UPBactual", "UPBoriginal"]),
            (
                Concept::Conditions,
                &["propertyState", "interestRateCurrent", "interestRateOriginal", "postalCode"],
            ),
            (Concept::Collateral, &["LTV", "LTVoriginal", "CLTV", "CLTVoriginal"]),
        ];
        let members = table
            .iter()
            .map(|(c, names)| (*c, names.iter().map(|n| FeatureId::new(n)).collect()))
            .collect();
        Self::new(members).expect("bundled concept map is valid")
    }

    pub fn features(&self, concept: Concept) -> &BTreeSet<FeatureId> {
        &self.members[&concept]
    }

    pub fn concept_of(&self, feature: &FeatureId) -> Option<Concept> {
        self.owner.get(feature).copied()
    }

    /// Concept keys → feature names, as written to JSON.
    pub fn to_named(&self) -> BTreeMap<String, Vec<String>> {
        self.members
            .iter()
            .map(|(c, fs)| (String::from(c.name()), fs.iter().map(|f| String::from(f.as_str())).collect()))
            .collect()
    }

    /// Per-concept members of `features`, plus the features no concept claims.
    pub fn coverage<'a>(&self, features: impl IntoIterator<Item = &'a FeatureId>) -> Coverage {
        let mut by_concept: BTreeMap<Concept, BTreeSet<FeatureId>> = BTreeMap::new();
        let mut unmapped = BTreeSet::new();
        for f in features {
            match self.concept_of(f) {
                Some(c) => {
                    by_concept.entry(c).or_default().insert(f.clone());
                }
                None => {
                    unmapped.insert(f.clone());
                }
            }
        }
        Coverage {
            by_concept,
            unmapped,
        }
    }
}

impl Default for ConceptMap {
    fn default() -> Self {
        Self::default_map()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub by_concept: BTreeMap<Concept, BTreeSet<FeatureId>>,
    pub unmapped: BTreeSet<FeatureId>,
}

impl Coverage {
    pub fn covers_all(&self) -> bool {
        Concept::ALL
            .iter()
            .all(|c| self.by_concept.get(c).is_some_and(|s| !s.is_empty()))
    }

    pub fn missing(&self) -> Vec<Concept> {
        Concept::ALL
            .into_iter()
            .filter(|c| !self.by_concept.contains_key(c))
            .collect()
    }
}

/// Whether `features` touches every concept, with the breakdown.
pub fn covers_all_concepts<'a>(
    features: impl IntoIterator<Item = &'a FeatureId>,
    map: &ConceptMap,
) -> (bool, Coverage) {
    let cov = map.coverage(features);
    (cov.covers_all(), cov)
}

/// A length-8 frequent set that covers all five concepts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedFeatureSet {
    pub features: Vec<FeatureId>,
    /// Absent when the input set came without a support (e.g. a hand-made list).
    pub support: Option<Ratio>,
    pub coverage: BTreeMap<Concept, BTreeSet<FeatureId>>,
    pub unmapped: BTreeSet<FeatureId>,
}

/// Keeps the sets covering every concept, annotated with their breakdown.
pub fn generalize(itemsets: &[ItemSet], map: &ConceptMap) -> Result<Vec<GeneralizedFeatureSet>> {
    generalize_candidates(itemsets.iter().map(|s| (s.features.as_slice(), Some(s.support))), map)
}

/// [`generalize`] over feature lists with optional supports.
pub fn generalize_candidates<'a>(
    candidates: impl IntoIterator<Item = (&'a [FeatureId], Option<Ratio>)>,
    map: &ConceptMap,
) -> Result<Vec<GeneralizedFeatureSet>> {
    let mut out = Vec::new();
    for (i, (features, support)) in candidates.into_iter().enumerate() {
        let distinct: BTreeSet<&FeatureId> = features.iter().collect();
        if distinct.len() != GENERALIZED_LEN || features.len() != GENERALIZED_LEN {
            return Err(Error::arg(format!(
                "itemset {i} has {} features; generalization expects exactly {GENERALIZED_LEN}",
                distinct.len()
            )));
        }
        let (ok, cov) = covers_all_concepts(distinct.iter().copied(), map);
        if ok {
            out.push(GeneralizedFeatureSet {
                features: distinct.into_iter().cloned().collect(),
                support,
                coverage: cov.by_concept,
                unmapped: cov.unmapped,
            });
        }
    }
    Ok(out)
}
