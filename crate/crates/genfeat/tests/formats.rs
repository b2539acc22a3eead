use std::io::Write;
use std::path::Path;

use genfeat::io::{parse_feature_sets, Provenance};
use genfeat::loans_csv::{load_loans, loans_to_csv, schema_for};
use genfeat_core::loans::{Column, LoanDataset};
use genfeat_core::{AliasTable, FeatureId};
use proptest::prelude::*;

fn dataset(numeric: Vec<Option<i32>>, cats: Vec<Option<u8>>, target: Vec<bool>) -> LoanDataset {
    let n = target.len();
    let values = numeric.iter().take(n).map(|v| v.map_or(f64::NAN, |x| x as f64 / 8.0)).collect();
    let levels: Vec<Option<String>> = cats.iter().take(n).map(|c| c.map(|c| format!("L{c}"))).collect();
    LoanDataset::new(
        vec![
            Column::numeric(FeatureId::new("creditScore"), values),
            Column::categorical(FeatureId::new("propertyState"), levels.iter().map(|l| l.as_deref())),
        ],
        target.iter().map(|&t| t as u8).collect(),
        (0..n as u64).map(|i| i * 3 + 1).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loan_csv_round_trips(
        rows in prop::collection::vec((prop::option::of(-8000i32..8000), prop::option::of(0u8..5), any::<bool>()), 1..40)
    ) {
        let numeric = rows.iter().map(|r| r.0).collect();
        let cats = rows.iter().map(|r| r.1).collect();
        let target = rows.iter().map(|r| r.2).collect();
        let ds = dataset(numeric, cats, target);
        let text = loans_to_csv(&ds).unwrap();
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        let back = load_loans(f.path(), &schema_for(&ds), &AliasTable::builtin()).unwrap();
        prop_assert_eq!(back.target(), ds.target());
        prop_assert_eq!(back.row_ids(), ds.row_ids());
        let a = &ds.columns()[0].values;
        let b = &back.columns()[0].values;
        for (x, y) in a.iter().zip(b) {
            prop_assert!(x == y || (x.is_nan() && y.is_nan()));
        }
        prop_assert_eq!(loans_to_csv(&back).unwrap(), text);
    }

    #[test]
    fn set_files_canonicalize_idempotently(names in prop::collection::vec("[A-Za-z]{1,12}", 1..9)) {
        let aliases = AliasTable::builtin();
        let text = serde_json::to_string(&vec![names.clone()]).unwrap();
        let once = parse_feature_sets(&text, Path::new("p"), &aliases).unwrap();
        let spelled: Vec<String> = once[0].features.iter().map(|f| f.to_string()).collect();
        let twice = parse_feature_sets(&serde_json::to_string(&vec![spelled]).unwrap(), Path::new("p"), &aliases).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn config_hash_is_a_function_of_config(a in any::<u32>(), b in any::<u32>()) {
        let h = |v: u32| Provenance::new("x", &serde_json::json!({"v": v}), Default::default()).unwrap().config_hash;
        prop_assert_eq!(h(a) == h(b), a == b);
    }
}
