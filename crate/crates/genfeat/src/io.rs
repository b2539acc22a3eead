//! JSON file formats: corpus, aliases, concept maps, itemsets and the
//! provenance envelope every output carries.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use genfeat_core::corpus::RawPaperRecord;
use genfeat_core::{AliasTable, ConceptMap, FeatureCorpus, FeatureId, Ratio};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{AppError, Result};

/// Files shipped with the tool.
pub mod bundled {
    pub const ALIASES: &str = include_str!("../data/aliases.json");
    pub const CONCEPTS: &str = include_str!("../data/concepts.json");
    pub const REFERENCE_SETS: &str = include_str!("../data/reference_sets.json");
    pub const LITERATURE_CORPUS: &str = include_str!("../data/literature_corpus.json");
    pub const MINI_CORPUS: &str = include_str!("../data/mini_corpus.json");
}

pub const TOOL: &str = "genfeat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn read_text(path: &Path, what: &'static str) -> Result<String> {
    if !path.exists() {
        return Err(AppError::NotFound {
            what,
            path: path.to_path_buf(),
        });
    }
    fs::read_to_string(path).map_err(|source| AppError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_json<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        AppError::format(
            path,
            format!("line {} column {}: {e}", e.line(), e.column()),
        )
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &'static str) -> Result<T> {
    parse_json(&read_text(path, what)?, path)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| AppError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| AppError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| AppError::Runtime(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_pretty(value)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reproducibility block embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    /// sha256 of the compact JSON of `config`.
    pub config_hash: String,
    pub seeds: BTreeMap<String, u64>,
}

impl Provenance {
    pub fn new<C: Serialize>(command: &str, config: &C, seeds: BTreeMap<String, u64>) -> Result<Self> {
        let config = serde_json::to_value(config).map_err(|e| AppError::Runtime(e.to_string()))?;
        let compact = serde_json::to_vec(&config).map_err(|e| AppError::Runtime(e.to_string()))?;
        Ok(Provenance {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            config_hash: sha256_hex(&compact),
            config,
            seeds,
        })
    }
}

/// Inner array of a file that is either a bare array or an object holding
/// the array under `key`.
pub fn payload<'a>(value: &'a Value, key: &str, path: &Path) -> Result<&'a Vec<Value>> {
    match value {
        Value::Array(items) => Ok(items),
        Value::Object(map) => match map.get(key) {
            Some(Value::Array(items)) => Ok(items),
            _ => Err(AppError::format(path, format!("expected an array or an object with an array under {key:?}"))),
        },
        _ => Err(AppError::format(path, "expected a JSON array or object")),
    }
}

pub fn parse_aliases(text: &str, path: &Path) -> Result<AliasTable> {
    let pairs: BTreeMap<String, String> = parse_json(text, path)?;
    Ok(AliasTable::with_aliases(pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))))
}

/// Builtin aliases plus the bundled file plus `path` when given.
pub fn load_aliases(path: Option<&Path>) -> Result<AliasTable> {
    let mut pairs: BTreeMap<String, String> = parse_json(bundled::ALIASES, Path::new("<bundled aliases.json>"))?;
    if let Some(p) = path {
        let extra: BTreeMap<String, String> = read_json(p, "alias file")?;
        pairs.extend(extra);
    }
    Ok(AliasTable::with_aliases(pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))))
}

pub fn parse_corpus(text: &str, path: &Path, aliases: &AliasTable) -> Result<FeatureCorpus> {
    let records: Vec<RawPaperRecord> = parse_json(text, path)?;
    FeatureCorpus::from_raw(records, aliases).map_err(|e| AppError::format(path, e.to_string()))
}

pub fn load_corpus(path: &Path, aliases: &AliasTable) -> Result<FeatureCorpus> {
    parse_corpus(&read_text(path, "corpus")?, path, aliases)
}

pub fn parse_concept_map(text: &str, path: &Path, aliases: &AliasTable) -> Result<ConceptMap> {
    let named: BTreeMap<String, Vec<String>> = parse_json(text, path)?;
    Ok(ConceptMap::from_named(&named, aliases)?)
}

/// The bundled five-C map when `path` is `None`.
pub fn load_concept_map(path: Option<&Path>, aliases: &AliasTable) -> Result<ConceptMap> {
    match path {
        Some(p) => parse_concept_map(&read_text(p, "concept map")?, p, aliases),
        None => parse_concept_map(bundled::CONCEPTS, Path::new("<bundled concepts.json>"), aliases),
    }
}

/// A feature list with an optional support, as read from an itemset or
/// generalized-set file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSet {
    pub features: Vec<FeatureId>,
    pub support: Option<Ratio>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSet {
    Names(Vec<String>),
    Record {
        features: Vec<String>,
        #[serde(default)]
        support: Option<Ratio>,
    },
}

/// Accepts a bare array or an envelope with `sets` or `itemsets`; each entry
/// is a list of names or an object with `features` (and maybe `support`).
pub fn parse_feature_sets(text: &str, path: &Path, aliases: &AliasTable) -> Result<Vec<FeatureSet>> {
    let value: Value = parse_json(text, path)?;
    let key = match &value {
        Value::Object(m) if m.contains_key("sets") => "sets",
        _ => "itemsets",
    };
    payload(&value, key, path)?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let raw: RawSet = serde_json::from_value(v.clone())
                .map_err(|e| AppError::format(path, format!("set {i}: {e}")))?;
            let (names, support) = match raw {
                RawSet::Names(n) => (n, None),
                RawSet::Record { features, support } => (features, support),
            };
            if names.iter().any(|n| n.trim().is_empty()) {
                return Err(AppError::format(path, format!("set {i}: empty feature name")));
            }
            Ok(FeatureSet {
                features: names.iter().map(|n| aliases.canonical(n)).collect(),
                support,
            })
        })
        .collect()
}

pub fn load_feature_sets(path: &Path, aliases: &AliasTable) -> Result<Vec<FeatureSet>> {
    parse_feature_sets(&read_text(path, "feature-set file")?, path, aliases)
}
