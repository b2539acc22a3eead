use std::collections::BTreeMap;

use genfeat_core::concepts::generalize;
use genfeat_core::corpus::RawPaperRecord;
use genfeat_core::explainer::{explain_batch, MAX_EXACT_FEATURES};
use genfeat_core::loans::{generate_synthetic, stratified_split, GeneratorConfig, SplitSpec};
use genfeat_core::miner::{filter_by_length, mine_frequent};
use genfeat_core::models::{ModelKind, ModelSpec, Pipeline};
use genfeat_core::{AliasTable, ConceptMap, FeatureCorpus, FeatureId, MiningConfig, Ratio};
use proptest::prelude::*;

const EIGHT: [&str; 8] = [
    "creditScore",
    "currentLoanDelinquencyStatus",
    "UPBactual",
    "postalCode",
    "LTV",
    "loanAge",
    "numberOfUnits",
    "CLTVoriginal",
];

fn paper(id: &str, names: &[&str]) -> RawPaperRecord {
    RawPaperRecord {
        paper_id: id.into(),
        features: names.iter().map(|s| s.to_string()).collect(),
    }
}

#[test]
fn mined_eight_feature_set_is_generalized() {
    // three papers share a set touching every concept; one does not
    let records = vec![
        paper("a", &EIGHT),
        paper("b", &EIGHT),
        paper("c", &EIGHT[..7]),
        paper("d", &["creditScore", "LTV"]),
    ];
    let corpus = FeatureCorpus::from_raw(records, &AliasTable::builtin()).unwrap();
    let config = MiningConfig {
        min_support: Ratio::new(1, 2).unwrap(),
        max_len: 8,
    };
    let all = mine_frequent(&corpus, &config).unwrap();
    let eights = filter_by_length(&all, 8).unwrap();
    assert_eq!(eights.len(), 1);
    assert_eq!(eights[0].support, Ratio::new(2, 4).unwrap());
    let gen = generalize(&eights, &ConceptMap::default_map()).unwrap();
    assert_eq!(gen.len(), 1);
    let unmapped: Vec<&str> = gen[0].unmapped.iter().map(|f| f.as_str()).collect();
    assert_eq!(unmapped, ["loanAge", "numberOfUnits"]);
}

#[test]
fn every_model_kind_explains_held_out_rows() {
    let ds = generate_synthetic(
        &GeneratorConfig {
            rows: 1500,
            positive_ratio: 0.05,
            noise_features: 0,
            ..GeneratorConfig::default()
        },
        12,
    )
    .unwrap();
    let split = stratified_split(&ds, &SplitSpec::default()).unwrap();
    let features: Vec<FeatureId> = EIGHT.iter().map(|n| FeatureId::new(n)).collect();
    let frame = split.test.frame(&features).unwrap();
    let map = ConceptMap::default_map();
    for kind in ModelKind::ALL {
        let p = Pipeline::train(&ModelSpec::default_for(kind, 1), &split.train, &features).unwrap();
        let probs = p.predict_dataset(&split.test).unwrap();
        let reports = explain_batch(&p, &frame, split.test.row_ids(), &p.reference, &map);
        for (i, r) in reports.into_iter().take(25).enumerate() {
            let r = r.unwrap();
            assert_eq!(r.p_default, probs[i], "{kind}");
            assert!(r.efficiency_gap() <= 1e-9, "{kind}");
            let by_concept: f64 = r.concept_totals.values().sum::<f64>() + r.unmapped_total;
            assert!((by_concept - r.contribution_sum()).abs() <= 1e-12);
        }
    }
    assert!(features.len() <= MAX_EXACT_FEATURES);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frequent_sets_are_frequent_and_closed(
        papers in prop::collection::vec(prop::collection::btree_set(0u8..7, 1..6), 1..7),
        k in 1u64..=6,
    ) {
        let records: Vec<RawPaperRecord> = papers
            .iter()
            .enumerate()
            .map(|(i, p)| RawPaperRecord { paper_id: format!("p{i}"), features: p.iter().map(|f| format!("x{f}")).collect() })
            .collect();
        let corpus = FeatureCorpus::from_raw(records, &AliasTable::builtin()).unwrap();
        let config = MiningConfig { min_support: Ratio::new(k, 6).unwrap(), max_len: 8 };
        let mined = mine_frequent(&corpus, &config).unwrap();
        let lookup: BTreeMap<Vec<FeatureId>, Ratio> = mined.iter().map(|s| (s.features.clone(), s.support)).collect();
        for s in &mined {
            prop_assert!(s.support >= config.min_support);
            for drop in 0..s.features.len() {
                if s.features.len() == 1 {
                    break;
                }
                let mut sub = s.features.clone();
                sub.remove(drop);
                prop_assert!(lookup.get(&sub).is_some_and(|r| *r >= s.support));
            }
        }
    }
}
