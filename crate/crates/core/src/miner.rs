//! Level-wise Apriori over the paper corpus.
//!
//! Papers play the role of transactions. Every candidate carries the bitset of
//! papers that contain all of its features, so the support of a joined
//! candidate is the popcount of its parents' intersection.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::FeatureCorpus;
use crate::error::{Error, Result};
use crate::feature::FeatureId;
use crate::ratio::Ratio;

/// A frequent feature combination. `features` is sorted and duplicate-free;
/// `support` is (papers containing all features) / (total papers).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemSet {
    pub features: Vec<FeatureId>,
    pub support: Ratio,
}

impl ItemSet {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningConfig {
    pub min_support: Ratio,
    pub max_len: usize,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: Ratio { num: 1, den: 20 },
            max_len: 8,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<()> {
        let s = self.min_support;
        if s.den == 0 || s.num == 0 || !s.is_unit_interval() {
            return Err(Error::arg(format!("min_support must lie in (0, 1], got {s}")));
        }
        if self.max_len == 0 {
            return Err(Error::arg("max_len must be positive"));
        }
        Ok(())
    }

    /// `count / total >= min_support`, cross-multiplied.
    pub fn is_frequent(&self, count: usize, total: usize) -> bool {
        count as u128 * self.min_support.den as u128
            >= self.min_support.num as u128 * total as u128
    }
}

/// Exact support of `features` in `corpus`.
pub fn support(corpus: &FeatureCorpus, features: &[FeatureId]) -> Result<Ratio> {
    if features.is_empty() {
        return Err(Error::arg("support of an empty feature set is undefined"));
    }
    let count = corpus
        .papers()
        .iter()
        .filter(|p| features.iter().all(|f| p.features.contains(f)))
        .count();
    Ratio::new(count as u64, corpus.paper_count() as u64)
}

#[derive(Clone)]
struct PaperSet(Vec<u64>);

impl PaperSet {
    fn empty(n: usize) -> Self {
        PaperSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &PaperSet) -> PaperSet {
        PaperSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Candidate {
    items: Vec<u32>,
    papers: PaperSet,
}

/// All itemsets with `1 <= len <= max_len` and support >= `min_support`,
/// ordered by length then lexicographically by feature name.
pub fn mine_frequent(corpus: &FeatureCorpus, config: &MiningConfig) -> Result<Vec<ItemSet>> {
    config.validate()?;
    let total = corpus.paper_count();
    // universe is a BTreeSet, so index order is name order
    let names: Vec<&FeatureId> = corpus.universe().iter().collect();
    let index: BTreeMap<&FeatureId, u32> = names
        .iter()
        .enumerate()
        .map(|(i, f)| (*f, i as u32))
        .collect();

    let mut singles: Vec<PaperSet> = vec![PaperSet::empty(total); names.len()];
    for (pi, paper) in corpus.papers().iter().enumerate() {
        for f in &paper.features {
            singles[index[f] as usize].insert(pi);
        }
    }

    let mut level: Vec<Candidate> = singles
        .into_iter()
        .enumerate()
        .filter(|(_, ps)| config.is_frequent(ps.count(), total))
        .map(|(i, papers)| Candidate {
            items: vec![i as u32],
            papers,
        })
        .collect();

    let mut out = Vec::new();
    let mut len = 1;
    while !level.is_empty() {
        out.extend(level.iter().map(|c| ItemSet {
            features: c.items.iter().map(|&i| names[i as usize].clone()).collect(),
            support: Ratio {
                num: c.papers.count() as u64,
                den: total as u64,
            },
        }));
        if len == config.max_len {
            break;
        }
        level = next_level(&level, config, total);
        len += 1;
    }
    Ok(out)
}

/// Join candidates sharing a (k-1)-prefix, prune by downward closure, count.
fn next_level(level: &[Candidate], config: &MiningConfig, total: usize) -> Vec<Candidate> {
    let k = level[0].items.len();
    let mut next = Vec::new();
    let mut start = 0;
    while start < level.len() {
        // level is sorted, so equal prefixes form contiguous blocks
        let prefix = &level[start].items[..k - 1];
        let mut end = start + 1;
        while end < level.len() && &level[end].items[..k - 1] == prefix {
            end += 1;
        }
        for i in start..end {
            for j in i + 1..end {
                let mut items = level[i].items.clone();
                items.push(level[j].items[k - 1]);
                if !all_subsets_frequent(&items, level) {
                    continue;
                }
                let papers = level[i].papers.and(&level[j].papers);
                if config.is_frequent(papers.count(), total) {
                    next.push(Candidate { items, papers });
                }
            }
        }
        start = end;
    }
    next
}

fn all_subsets_frequent(items: &[u32], level: &[Candidate]) -> bool {
    // the two subsets dropping one of the last two items are the join parents
    let k = items.len();
    let mut subset = Vec::with_capacity(k - 1);
    (0..k.saturating_sub(2)).all(|skip| {
        subset.clear();
        subset.extend(items.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v));
        level
            .binary_search_by(|c| c.items.as_slice().cmp(subset.as_slice()))
            .is_ok()
    })
}

/// Itemsets with exactly `exact_len` features, order preserved.
pub fn filter_by_length(itemsets: &[ItemSet], exact_len: usize) -> Result<Vec<ItemSet>> {
    if exact_len == 0 {
        return Err(Error::arg("exact_len must be at least 1"));
    }
    Ok(itemsets
        .iter()
        .filter(|s| s.len() == exact_len)
        .cloned()
        .collect())
}

/// `(length, count)` pairs in ascending length.
pub fn length_histogram(itemsets: &[ItemSet]) -> Vec<(usize, usize)> {
    let mut counts = BTreeMap::new();
    for s in itemsets {
        *counts.entry(s.len()).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}
