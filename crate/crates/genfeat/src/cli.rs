//! Subcommands: `mine`, `generalize`, `synth`, `evaluate`, `explain`.
//!
//! Every output file carries a [`Provenance`] block. Failures print one JSON
//! line on stderr; the exit code is 0 on success, 1 for runtime failures and
//! 2 for usage or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use genfeat_core::concepts::{generalize_candidates, GENERALIZED_LEN};
use genfeat_core::explainer::explain_batch;
use genfeat_core::loans::{select_features, stratified_split, GeneratorConfig, LoanDataset, SplitSpec};
use genfeat_core::miner::{filter_by_length, length_histogram, mine_frequent};
use genfeat_core::models::{Hyperparams, ModelKind, ModelSpec};
use genfeat_core::{AliasTable, Concept, FeatureId, MiningConfig, Ratio};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::artifact::ModelArtifact;
use crate::error::{AppError, Result};
use crate::evaluator::{evaluate_split, ExperimentPlan};
use crate::io::{self, Provenance};
use crate::loans_csv::{self, load_loans, load_schema};
use crate::report::{comparison_csv, timings_csv, DatasetSummary};

#[derive(Parser, Debug)]
#[command(name = "genfeat", version, about = "Concept-generalized frequent feature sets for credit-default models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mine frequent feature sets from a paper corpus.
    Mine(MineArgs),
    /// Keep the length-8 sets that cover all five C's of credit.
    Generalize(GeneralizeArgs),
    /// Write a synthetic loan CSV and its schema.
    Synth(SynthArgs),
    /// Compare models trained on original and on generalized features.
    Evaluate(EvaluateArgs),
    /// Decompose predictions of a saved model into feature and concept contributions.
    Explain(ExplainArgs),
}

fn parse_ratio(s: &str) -> std::result::Result<Ratio, String> {
    s.parse::<Ratio>().map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
pub struct MineArgs {
    /// Corpus JSON: `[{"paper_id": .., "features": [..]}, ..]`.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Extra alias file `{variant: canonical}`.
    #[arg(long)]
    pub aliases: Option<PathBuf>,
    /// Minimum support, as a decimal or a fraction.
    #[arg(long, default_value = "0.05", value_parser = parse_ratio)]
    pub min_support: Ratio,
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    /// Length reported as `length_filtered` in the summary.
    #[arg(long, default_value_t = GENERALIZED_LEN)]
    pub length: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct GeneralizeArgs {
    /// Output of `mine`, or any list of feature sets.
    #[arg(long)]
    pub itemsets: PathBuf,
    /// Concept map JSON `{"Character": [..], ..}`; the bundled map by default.
    #[arg(long)]
    pub concepts: Option<PathBuf>,
    #[arg(long)]
    pub aliases: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Generator configuration JSON; flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub positive_ratio: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `<out>.schema.json`.
    #[arg(long)]
    pub schema_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Evaluation configuration JSON; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Loan CSV; synthetic data is generated when absent.
    #[arg(long, requires = "schema")]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long)]
    pub aliases: Option<PathBuf>,
    #[arg(long)]
    pub synth_rows: Option<usize>,
    #[arg(long)]
    pub synth_ratio: Option<f64>,
    #[arg(long)]
    pub synth_seed: Option<u64>,
    /// Generalized sets (output of `generalize`); the bundled six sets by default.
    #[arg(long)]
    pub sets: Option<PathBuf>,
    /// JSON list of original feature names; overrides `--select`.
    #[arg(long, conflicts_with = "select")]
    pub features: Option<PathBuf>,
    /// Number of original features chosen by forest importance on the train part.
    #[arg(long)]
    pub select: Option<usize>,
    /// Comma-separated model labels (ANN, SVM, RF, ET, GB).
    #[arg(long, value_delimiter = ',')]
    pub models: Option<Vec<String>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub split_seed: Option<u64>,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Largest tolerated drop of the selection metric.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long)]
    pub decision_threshold: Option<f64>,
    /// Weight of positive rows in every learner's loss.
    #[arg(long)]
    pub positive_weight: Option<f64>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExplainArgs {
    /// Model artifact written by `evaluate`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub aliases: Option<PathBuf>,
    /// Comma-separated 0-based row positions; row 0 by default.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    pub rows: Option<Vec<usize>>,
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub concepts: Option<PathBuf>,
    /// Output JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Resolved `evaluate` settings: config file, then flags. This is what the
/// provenance block records, so it leaves out the output directory and the
/// worker count, neither of which changes results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluateConfig {
    pub data: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub synth: GeneratorConfig,
    pub synth_seed: u64,
    pub sets: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub select: usize,
    pub models: Vec<String>,
    /// Per-label hyperparameter overrides.
    pub hyperparams: BTreeMap<String, Hyperparams>,
    pub seed: u64,
    pub split_seed: u64,
    pub train_fraction: f64,
    pub threshold: f64,
    pub metric: String,
    pub decision_threshold: f64,
    pub positive_weight: Option<f64>,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        EvaluateConfig {
            data: None,
            schema: None,
            aliases: None,
            synth: GeneratorConfig::default(),
            synth_seed: 0,
            sets: None,
            features: None,
            select: 30,
            models: ModelKind::ALL.iter().map(|k| k.label().to_string()).collect(),
            hyperparams: BTreeMap::new(),
            seed: 0,
            split_seed: 0,
            train_fraction: SplitSpec::default().train_fraction,
            threshold: 0.05,
            metric: "recall".into(),
            decision_threshold: 0.5,
            positive_weight: None,
        }
    }
}

impl EvaluateConfig {
    pub fn resolve(args: &EvaluateArgs) -> Result<Self> {
        let mut c: EvaluateConfig = match &args.config {
            Some(p) => io::read_json(p, "config file")?,
            None => EvaluateConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &args.$field {
                    c.$field = v.clone().into();
                }
            )*};
        }
        set!(data, schema, aliases, sets, features, select, models, seed, split_seed, train_fraction, threshold, metric, decision_threshold);
        if args.positive_weight.is_some() {
            c.positive_weight = args.positive_weight;
        }
        if let Some(v) = args.synth_rows {
            c.synth.rows = v;
        }
        if let Some(v) = args.synth_ratio {
            c.synth.positive_ratio = v;
        }
        if let Some(v) = args.synth_seed {
            c.synth_seed = v;
        }
        if c.data.is_some() != c.schema.is_some() {
            return Err(AppError::Config("data and schema must be given together".into()));
        }
        if c.data.is_some() {
            // the generator settings are unused; keep them out of the record
            c.synth = GeneratorConfig::default();
            c.synth_seed = 0;
        }
        Ok(c)
    }

    pub fn model_specs(&self) -> Result<Vec<ModelSpec>> {
        let mut specs = Vec::new();
        for label in &self.models {
            let kind: ModelKind = label.parse()?;
            let mut spec = ModelSpec::default_for(kind, self.seed);
            if let Some(h) = self.hyperparams.get(kind.label()) {
                let overridden = ModelSpec { hyper: *h, seed: self.seed };
                if overridden.kind() != kind {
                    return Err(AppError::Config(format!("hyperparameters under {label} are for another model kind")));
                }
                spec = overridden;
            }
            if let Some(w) = self.positive_weight {
                spec = spec.with_positive_weight(w);
            }
            specs.push(spec);
        }
        for label in self.hyperparams.keys() {
            if !self.models.iter().any(|m| m.eq_ignore_ascii_case(label)) {
                return Err(AppError::Config(format!("hyperparameters given for {label}, which is not run")));
            }
        }
        Ok(specs)
    }

    fn seeds(&self) -> BTreeMap<String, u64> {
        let mut s = BTreeMap::from([("model".to_string(), self.seed), ("split".to_string(), self.split_seed)]);
        if self.data.is_none() {
            s.insert("synth".into(), self.synth_seed);
        }
        s
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Mine(a) => cmd_mine(&a),
        Command::Generalize(a) => cmd_generalize(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Explain(a) => cmd_explain(&a),
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

pub fn cmd_mine(a: &MineArgs) -> Result<()> {
    let config = MiningConfig {
        min_support: a.min_support,
        max_len: a.max_len,
    };
    config.validate()?;
    let aliases = io::load_aliases(a.aliases.as_deref())?;
    let corpus = io::load_corpus(&a.corpus, &aliases)?;
    let itemsets = mine_frequent(&corpus, &config)?;
    let by_length: Vec<Value> = length_histogram(&itemsets)
        .into_iter()
        .map(|(len, count)| json!({"length": len, "count": count}))
        .collect();
    let filtered = filter_by_length(&itemsets, a.length)?.len();
    let meta = Provenance::new(
        "mine",
        &json!({
            "corpus": a.corpus,
            "aliases": a.aliases,
            "min_support": a.min_support.to_string(),
            "max_len": a.max_len,
            "length": a.length,
        }),
        BTreeMap::new(),
    )?;
    let summary = json!({
        "papers": corpus.paper_count(),
        "total": itemsets.len(),
        "by_length": by_length,
        "length": a.length,
        "length_filtered": filtered,
    });
    io::write_json(&a.out, &json!({"meta": meta, "summary": summary, "itemsets": itemsets}))?;
    println!("{}", compact(&summary));
    Ok(())
}

pub fn cmd_generalize(a: &GeneralizeArgs) -> Result<()> {
    let aliases = io::load_aliases(a.aliases.as_deref())?;
    let map = io::load_concept_map(a.concepts.as_deref(), &aliases)?;
    let sets = io::load_feature_sets(&a.itemsets, &aliases)?;
    let candidates: Vec<_> = sets.iter().filter(|s| s.features.len() == GENERALIZED_LEN).collect();
    let accepted = generalize_candidates(candidates.iter().map(|s| (s.features.as_slice(), s.support)), &map)?;
    let meta = Provenance::new(
        "generalize",
        &json!({
            "itemsets": a.itemsets,
            "concepts": a.concepts,
            "aliases": a.aliases,
            "length": GENERALIZED_LEN,
        }),
        BTreeMap::new(),
    )?;
    let summary = json!({
        "input": sets.len(),
        "length_filtered": candidates.len(),
        "accepted": accepted.len(),
    });
    io::write_json(&a.out, &json!({"meta": meta, "summary": summary, "sets": accepted}))?;
    println!("{}", compact(&summary));
    Ok(())
}

pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let mut config: GeneratorConfig = match &a.config {
        Some(p) => io::read_json(p, "generator config")?,
        None => GeneratorConfig::default(),
    };
    if let Some(r) = a.rows {
        config.rows = r;
    }
    if let Some(r) = a.positive_ratio {
        config.positive_ratio = r;
    }
    let ds = genfeat_core::loans::generate_synthetic(&config, a.seed)?;
    loans_csv::write_loans(&ds, &a.out)?;
    let meta = Provenance::new("synth", &config, BTreeMap::from([("synth".to_string(), a.seed)]))?;
    let mut schema = serde_json::to_value(loans_csv::schema_for(&ds)).map_err(|e| AppError::Runtime(e.to_string()))?;
    if let Value::Object(m) = &mut schema {
        m.insert("meta".into(), serde_json::to_value(&meta).map_err(|e| AppError::Runtime(e.to_string()))?);
    }
    let schema_path = a.schema_out.clone().unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".schema.json");
        PathBuf::from(p)
    });
    io::write_json(&schema_path, &schema)?;
    println!(
        "{}",
        compact(&json!({"rows": ds.n_rows(), "positives": ds.positives(), "columns": ds.columns().len(), "schema": schema_path}))
    );
    Ok(())
}

fn load_dataset(c: &EvaluateConfig, aliases: &AliasTable) -> Result<LoanDataset> {
    match (&c.data, &c.schema) {
        (Some(data), Some(schema)) => load_loans(data, &load_schema(schema)?, aliases),
        _ => Ok(genfeat_core::loans::generate_synthetic(&c.synth, c.synth_seed)?),
    }
}

fn load_sets(c: &EvaluateConfig, aliases: &AliasTable) -> Result<Vec<Vec<FeatureId>>> {
    let sets = match &c.sets {
        Some(p) => io::load_feature_sets(p, aliases)?,
        None => io::parse_feature_sets(io::bundled::REFERENCE_SETS, Path::new("<bundled sets>"), aliases)?,
    };
    if sets.is_empty() {
        return Err(AppError::Config("the generalized-set file holds no sets".into()));
    }
    Ok(sets.into_iter().map(|s| s.features).collect())
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let c = EvaluateConfig::resolve(a)?;
    let jobs = match a.jobs {
        Some(0) => return Err(AppError::Config("--jobs must be positive".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let models = c.model_specs()?;
    let aliases = io::load_aliases(c.aliases.as_deref())?;
    let generalized_sets = load_sets(&c, &aliases)?;
    let fixed_features: Option<Vec<FeatureId>> = match &c.features {
        Some(p) => {
            let names: Vec<String> = io::read_json(p, "feature list")?;
            Some(names.iter().map(|n| aliases.canonical(n)).collect())
        }
        None => None,
    };
    let ds = load_dataset(&c, &aliases)?;
    let split_spec = SplitSpec {
        train_fraction: c.train_fraction,
        seed: c.split_seed,
    };
    let split = stratified_split(&ds, &split_spec)?;
    let mut notes = split.warnings.clone();
    let original_features = match fixed_features {
        Some(f) => f,
        None => {
            let n = split.train.columns().len();
            if c.select == 0 {
                return Err(AppError::Config("select must be positive".into()));
            }
            if c.select > n {
                notes.push(format!("asked to select {} features but the data has {n}; using all", c.select));
            }
            select_features(&split.train, c.select.min(n), c.seed)?
        }
    };
    let plan = ExperimentPlan {
        original_features,
        generalized_sets,
        models,
        split: split_spec,
        threshold: c.threshold,
        selection_metric: c.metric.clone(),
        decision_threshold: c.decision_threshold,
    };
    let ev = evaluate_split(&plan, split.train, split.test, notes, jobs)?;
    let meta = Provenance::new("evaluate", &c, c.seeds())?;

    let out = &a.out;
    io::write_text(&out.join("comparison.csv"), &comparison_csv(&ev.report)?)?;
    io::write_text(&out.join("timings.csv"), &timings_csv(ev.records())?)?;

    let runs: Vec<Value> = ev
        .records()
        .map(|r| {
            let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
            if let Value::Object(m) = &mut v {
                m.insert("set_number".into(), json!(r.set_index.map(|i| i + 1)));
            }
            v
        })
        .collect();
    let mut comparison = serde_json::to_value(&ev.report).map_err(|e| AppError::Runtime(e.to_string()))?;
    if let Some(Value::Array(ms)) = comparison.get_mut("models") {
        for (m, cmp) in ms.iter_mut().zip(&ev.report.models) {
            if let Value::Object(m) = m {
                m.insert("best_set_number".into(), json!(cmp.best_set.map(|i| i + 1)));
            }
        }
    }
    let report = json!({
        "meta": meta,
        "dataset": DatasetSummary::of(&ev),
        "plan": plan,
        "runs": runs,
        "comparison": comparison,
    });
    io::write_json(&out.join("report.json"), &report)?;

    for cmp in &ev.report.models {
        if let Some((set, pipeline)) = ev.best_pipeline(cmp.model) {
            let artifact = ModelArtifact::new(meta.clone(), Some(set + 1), pipeline.clone(), &ev.train)?;
            artifact.save(&out.join("models").join(format!("{}.json", cmp.model.label())))?;
        }
    }
    print!("{}", comparison_csv(&ev.report)?);
    Ok(())
}

/// Largest tolerated `|p - baseline - sum(phi)|` in emitted reports.
pub const EFFICIENCY_TOLERANCE: f64 = 1e-9;

pub const SHARE_NOTE: &str =
    "shares are contribution / sum of absolute contributions; the normalization is a presentation choice, not part of the decomposition";

pub fn cmd_explain(a: &ExplainArgs) -> Result<()> {
    let artifact = ModelArtifact::load(&a.model)?;
    let aliases = io::load_aliases(a.aliases.as_deref())?;
    let map = io::load_concept_map(a.concepts.as_deref(), &aliases)?;
    let ds = load_loans(&a.data, &load_schema(&a.schema)?, &aliases)?;
    let aligned = artifact.align(&ds)?;
    let rows: Vec<usize> = if a.all {
        (0..aligned.n_rows()).collect()
    } else {
        a.rows.clone().unwrap_or_else(|| vec![0])
    };
    if let Some(bad) = rows.iter().find(|&&r| r >= aligned.n_rows()) {
        return Err(AppError::Config(format!("row {bad} is out of range ({} rows)", aligned.n_rows())));
    }
    let samples = aligned.take(&rows);
    let frame = samples.frame(&artifact.features)?;
    let pipeline = &artifact.pipeline;
    let results = explain_batch(pipeline, &frame, samples.row_ids(), &pipeline.reference, &map);

    let mut reports = Vec::with_capacity(rows.len());
    for (pos, result) in rows.iter().zip(results) {
        let r = result?;
        let gap = r.efficiency_gap();
        if gap > EFFICIENCY_TOLERANCE {
            return Err(AppError::Runtime(format!("row {pos}: contributions miss the prediction by {gap:e}")));
        }
        let concept_sum: f64 = r.concept_totals.values().sum::<f64>() + r.unmapped_total;
        if (concept_sum - r.contribution_sum()).abs() > 1e-12 {
            return Err(AppError::Runtime(format!("row {pos}: concept totals do not recompose the features")));
        }
        let features: Map<String, Value> = r.contributions.iter().map(|(f, v)| (f.to_string(), json!(v))).collect();
        let mut concepts: Map<String, Value> = Concept::ALL
            .iter()
            .map(|c| (c.name().to_string(), json!(r.concept_totals.get(c).copied().unwrap_or(0.0))))
            .collect();
        concepts.insert("other".into(), json!(r.unmapped_total));
        let shares: Map<String, Value> = r.shares().into_iter().map(|(f, v)| (f.to_string(), json!(v))).collect();
        reports.push(json!({
            "row": pos,
            "sample_id": r.sample_id,
            "p_default": r.p_default,
            "baseline": r.baseline,
            "features": features,
            "concepts": concepts,
            "shares": shares,
            "efficiency_gap": gap,
        }));
    }
    let meta = Provenance::new(
        "explain",
        &json!({
            "model": a.model,
            "data": a.data,
            "schema": a.schema,
            "aliases": a.aliases,
            "concepts": a.concepts,
            "rows": rows,
        }),
        artifact.meta.seeds.clone(),
    )?;
    let doc = json!({
        "meta": meta,
        "model": artifact.model,
        "set_number": artifact.set_number,
        "model_config_hash": artifact.meta.config_hash,
        "reference": pipeline
            .reference
            .features
            .iter()
            .zip(&pipeline.reference.values)
            .map(|(f, v)| {
                // categorical references read better as level names
                let shown = match artifact.levels.get(f).and_then(|l| l.get(*v as usize)) {
                    Some(level) => json!(level),
                    None => json!(v),
                };
                (f.to_string(), shown)
            })
            .collect::<Map<String, Value>>(),
        "share_normalization": SHARE_NOTE,
        "reports": reports,
    });
    match &a.out {
        Some(p) => io::write_json(p, &doc),
        None => {
            print!("{}", io::to_pretty(&doc)?);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["genfeat", "mine", "--corpus", "c.json", "--out", "o.json", "--min-support", "1/20"]).unwrap();
        match cli.command {
            Command::Mine(m) => assert_eq!(m.min_support, Ratio::new(1, 20).unwrap()),
            _ => unreachable!(),
        }
        assert!(Cli::try_parse_from(["genfeat", "mine", "--corpus", "c.json", "--out", "o", "--min-support", "abc"]).is_err());
    }

    #[test]
    fn config_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"threshold": 0.1, "models": ["RF"], "select": 12}"#).unwrap();
        let cli = Cli::try_parse_from([
            "genfeat", "evaluate", "--config", path.to_str().unwrap(), "--select", "9", "--out", "x",
        ])
        .unwrap();
        let Command::Evaluate(a) = cli.command else { unreachable!() };
        let c = EvaluateConfig::resolve(&a).unwrap();
        assert_eq!(c.threshold, 0.1);
        assert_eq!(c.select, 9);
        assert_eq!(c.model_specs().unwrap().len(), 1);
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"treshold": 0.1}"#).unwrap();
        let cli = Cli::try_parse_from(["genfeat", "evaluate", "--config", path.to_str().unwrap(), "--out", "x"]).unwrap();
        let Command::Evaluate(a) = cli.command else { unreachable!() };
        assert_eq!(EvaluateConfig::resolve(&a).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn mismatched_hyperparams_rejected() {
        let c: EvaluateConfig = serde_json::from_str(
            r#"{"models": ["RF"], "hyperparams": {"RF": {"kind": "GradientBoosting", "n_rounds": 3, "max_depth": 2, "learning_rate": 0.1, "positive_weight": 1.0}}}"#,
        )
        .unwrap();
        assert_eq!(c.model_specs().unwrap_err().exit_code(), 2);
        let c: EvaluateConfig = serde_json::from_str(
            r#"{"models": ["GB"], "hyperparams": {"ANN": {"kind": "NeuralNet", "hidden": 4, "batch_size": 8, "learning_rate": 0.1, "epochs": 2, "positive_weight": 1.0}}}"#,
        )
        .unwrap();
        assert!(c.model_specs().is_err());
    }
}
