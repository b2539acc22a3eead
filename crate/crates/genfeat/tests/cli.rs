use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn genfeat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genfeat")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = genfeat(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

#[test]
fn mine_matches_enumeration_on_mini_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "c.json", genfeat::io::bundled::MINI_CORPUS);
    let out = dir.path().join("items.json");
    ok(&["mine", "--corpus", s(&corpus), "--min-support", "1/3", "--out", s(&out)]);

    // enumerate by hand, with the two delinquency spellings merged
    let raw: Vec<Value> = serde_json::from_str(genfeat::io::bundled::MINI_CORPUS).unwrap();
    let papers: Vec<BTreeSet<String>> = raw
        .iter()
        .map(|p| {
            p["features"]
                .as_array()
                .unwrap()
                .iter()
                .map(|f| match f.as_str().unwrap() {
                    "currentDelinquencyStatus" => "currentLoanDelinquencyStatus".to_string(),
                    other => other.to_string(),
                })
                .collect()
        })
        .collect();
    let universe: Vec<String> = papers.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut expected: BTreeMap<BTreeSet<String>, usize> = BTreeMap::new();
    for mask in 1u32..(1 << universe.len()) {
        let subset: BTreeSet<String> = (0..universe.len()).filter(|j| mask >> j & 1 == 1).map(|j| universe[j].clone()).collect();
        let count = papers.iter().filter(|p| subset.is_subset(p)).count();
        if count * 3 >= papers.len() {
            expected.insert(subset, count);
        }
    }

    let doc = json(&out);
    let got: BTreeMap<BTreeSet<String>, usize> = doc["itemsets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|it| {
            let f = it["features"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
            assert_eq!(it["support"]["den"], 6);
            (f, it["support"]["num"].as_u64().unwrap() as usize)
        })
        .collect();
    assert_eq!(got, expected);
    assert_eq!(doc["summary"]["total"], expected.len());
    assert_eq!(doc["summary"]["papers"], 6);
    assert_eq!(doc["meta"]["config"]["min_support"], "1/3");
    assert_eq!(doc["meta"]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn mine_output_feeds_generalize_and_reference_sets_passes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "c.json", genfeat::io::bundled::LITERATURE_CORPUS);
    let items = dir.path().join("items.json");
    ok(&["mine", "--corpus", s(&corpus), "--out", s(&items)]);
    let gen = dir.path().join("gen.json");
    let stdout = ok(&["generalize", "--itemsets", s(&items), "--out", s(&gen)]);
    let summary: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(summary["input"], json(&items)["summary"]["total"]);

    let sets = write(dir.path(), "sets.json", genfeat::io::bundled::REFERENCE_SETS);
    let out = dir.path().join("sets_out.json");
    ok(&["generalize", "--itemsets", s(&sets), "--out", s(&out)]);
    let doc = json(&out);
    assert_eq!(doc["summary"]["accepted"], 6);
    assert_eq!(doc["sets"][0]["unmapped"], serde_json::json!(["numberOfBorrowers"]));
}

#[test]
fn missing_corpus_exits_2_with_json() {
    let out = genfeat(&["mine", "--corpus", "/definitely/not/here.json", "--out", "/tmp/never.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert!(err["error"].as_str().unwrap().contains("corpus not found"));
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn concept_map_without_a_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let sets = write(dir.path(), "sets.json", genfeat::io::bundled::REFERENCE_SETS);
    let map = write(
        dir.path(),
        "map.json",
        r#"{"Character": ["creditScore"], "Capacity": ["loanAge"], "Capital": ["UPBactual"], "Conditions": ["postalCode"]}"#,
    );
    let out = genfeat(&["generalize", "--itemsets", s(&sets), "--concepts", s(&map), "--out", s(&dir.path().join("o.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"].as_str().unwrap().contains("Collateral"));
}

#[test]
fn bad_flag_is_exit_2() {
    assert_eq!(genfeat(&["mine", "--bogus"]).status.code(), Some(2));
    assert_eq!(genfeat(&["evaluate", "--out", "x", "--jobs", "0"]).status.code(), Some(2));
}

/// synth + a small evaluate; returns the output directory.
fn small_evaluation(dir: &Path) -> std::path::PathBuf {
    let data = dir.join("loans.csv");
    ok(&["synth", "--rows", "2500", "--positive-ratio", "0.04", "--seed", "2", "--out", s(&data)]);
    let cfg = write(
        dir,
        "cfg.json",
        r#"{"select": 10, "models": ["RF", "GB", "SVM", "ANN", "ET"],
            "hyperparams": {"RF": {"kind": "RandomForest", "n_trees": 10, "max_depth": 6, "max_features": "sqrt", "bootstrap": true, "positive_weight": 1.0},
                            "ET": {"kind": "ExtraTrees", "n_trees": 10, "max_depth": 6, "max_features": "sqrt", "bootstrap": false, "positive_weight": 1.0},
                            "GB": {"kind": "GradientBoosting", "n_rounds": 15, "max_depth": 3, "learning_rate": 0.1, "positive_weight": 1.0},
                            "ANN": {"kind": "NeuralNet", "hidden": 8, "batch_size": 32, "learning_rate": 0.05, "epochs": 5, "positive_weight": 1.0}}}"#,
    );
    let out = dir.join("eval");
    let schema = dir.join("loans.csv.schema.json");
    ok(&["evaluate", "--config", s(&cfg), "--data", s(&data), "--schema", s(&schema), "--out", s(&out), "--jobs", "2"]);
    out
}

#[test]
fn evaluate_writes_paired_rows_and_explain_recomposes() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_evaluation(dir.path());
    let csv = std::fs::read_to_string(out.join("comparison.csv")).unwrap();
    let labels: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        labels,
        ["RF", "RF-G", "delta", "GB", "GB-G", "delta", "SVM", "SVM-G", "delta", "ANN", "ANN-G", "delta", "ET", "ET-G", "delta"]
    );
    let report = json(&out.join("report.json"));
    assert_eq!(report["runs"].as_array().unwrap().len(), 5 + 5 * 6);
    let hashes: BTreeSet<&str> = report["runs"].as_array().unwrap().iter().map(|r| r["holdout_hash"].as_str().unwrap()).collect();
    assert_eq!(hashes.len(), 1);
    assert!(report["meta"]["seeds"]["split"].is_u64());
    let timings = std::fs::read_to_string(out.join("timings.csv")).unwrap();
    assert_eq!(timings.lines().count(), 1 + 35);

    let data = dir.path().join("loans.csv");
    let schema = dir.path().join("loans.csv.schema.json");
    for model in ["RF", "GB", "SVM", "ANN", "ET"] {
        let model_path = out.join("models").join(format!("{model}.json"));
        let exp = dir.path().join(format!("explain_{model}.json"));
        ok(&["explain", "--model", s(&model_path), "--data", s(&data), "--schema", s(&schema), "--rows", "0,7,42", "--out", s(&exp)]);
        let doc = json(&exp);
        let reports = doc["reports"].as_array().unwrap();
        assert_eq!(reports.len(), 3);
        for r in reports {
            let features: f64 = r["features"].as_object().unwrap().values().map(|v| v.as_f64().unwrap()).sum();
            let p = r["p_default"].as_f64().unwrap();
            let b = r["baseline"].as_f64().unwrap();
            assert!((p - b - features).abs() <= 1e-9, "{model}");
            let concepts = r["concepts"].as_object().unwrap();
            assert_eq!(concepts.len(), 6);
            let total: f64 = concepts.values().map(|v| v.as_f64().unwrap()).sum();
            assert!((total - features).abs() <= 1e-12, "{model}");
            assert_eq!(r["features"].as_object().unwrap().len(), 8);
        }
        assert!(doc["share_normalization"].is_string());
    }
}

#[test]
fn explain_single_row_file_and_contract_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_evaluation(dir.path());
    let model = out.join("models").join("GB.json");
    let set: Vec<String> = json(&model)["features"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();

    // one row, all model columns present, plus the target
    let full = std::fs::read_to_string(dir.path().join("loans.csv")).unwrap();
    let mut lines = full.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    let keep: Vec<usize> = (0..header.len()).filter(|&j| set.iter().any(|f| f == header[j]) || header[j] == "default").collect();
    let pick = |row: &[&str]| keep.iter().map(|&j| row[j]).collect::<Vec<_>>().join(",");
    let one = write(dir.path(), "one.csv", &format!("{}\n{}\n", pick(&header), pick(&first)));
    let columns: BTreeMap<&str, &str> = keep
        .iter()
        .map(|&j| header[j])
        .filter(|h| *h != "default")
        .map(|h| (h, if h == "propertyState" || h == "postalCode" { "categorical" } else { "numeric" }))
        .collect();
    let schema = write(
        dir.path(),
        "one.schema.json",
        &serde_json::json!({"target": "default", "positive_label": 1, "columns": columns}).to_string(),
    );
    let stdout = ok(&["explain", "--model", s(&model), "--data", s(&one), "--schema", s(&schema)]);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["reports"].as_array().unwrap().len(), 1);

    // drop one model column: contract error
    let fewer: Vec<usize> = keep.iter().copied().filter(|&j| header[j] != set[0]).collect();
    let pick = |row: &[&str]| fewer.iter().map(|&j| row[j]).collect::<Vec<_>>().join(",");
    let short = write(dir.path(), "short.csv", &format!("{}\n{}\n", pick(&header), pick(&first)));
    let mut cols = columns.clone();
    cols.remove(set[0].as_str());
    let schema = write(
        dir.path(),
        "short.schema.json",
        &serde_json::json!({"target": "default", "positive_label": 1, "columns": cols}).to_string(),
    );
    let out = genfeat(&["explain", "--model", s(&model), "--data", s(&short), "--schema", s(&schema)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["kind"], "contract");

    let out = genfeat(&["explain", "--model", s(&model), "--data", s(&one), "--schema", s(&dir.path().join("one.schema.json")), "--rows", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
