//! Subcommand implementations. Text and structured outputs carry the same
//! facts; structured mode is line-delimited JSON except where a single
//! object is the natural shape (eval, baseline).

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;

use serde::{Deserialize, Serialize};

use sollens_core::corpus;
use sollens_core::diffview;
use sollens_core::erc20;
use sollens_core::features::{information_gain, keyword_predict, KeywordRule};
use sollens_core::lineage;
use sollens_core::mlkit::{self, Algorithm, Dataset, Hyperparameters, Model};
use sollens_core::solfront::{extract_units, split_functions};
use sollens_core::textprep::{self, FunctionRecord};

use crate::report;
use crate::{AppError, OutputFormat};

type CmdResult = Result<(), AppError>;

/// One dataset line: a function record with an optional fold assignment.
#[derive(Debug, Serialize, Deserialize)]
pub struct DatasetLine {
    #[serde(flatten)]
    pub record: FunctionRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold: Option<u8>,
}

fn read_file(path: &str) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|e| AppError::Input(format!("cannot read {path}: {e}")))
}

fn write_output(out: Option<&str>, content: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| AppError::Input(format!("cannot write {path}: {e}"))),
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| AppError::Input(e.to_string()))
        }
    }
}

/// Loads a function dataset (JSON lines). Malformed lines are fatal here:
/// datasets are machine-written, unlike corpora.
fn load_dataset(path: &str) -> Result<Vec<DatasetLine>, AppError> {
    let text = read_file(path)?;
    let mut lines = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: DatasetLine = serde_json::from_str(line).map_err(|e| {
            AppError::Input(format!("{path}:{}: invalid dataset line: {e}", idx + 1))
        })?;
        lines.push(parsed);
    }
    if lines.is_empty() {
        return Err(AppError::Input(format!("{path}: dataset is empty")));
    }
    Ok(lines)
}

/// Sources to analyze: a .sol file yields itself; anything else is read as
/// a corpus of records.
fn collect_sources(paths: &[String]) -> Result<Vec<(String, String)>, AppError> {
    let mut sources = Vec::new();
    for path in paths {
        if path.ends_with(".sol") {
            sources.push((path.clone(), read_file(path)?));
        } else {
            let load =
                corpus::load_corpus(path).map_err(|e| AppError::Input(e.to_string()))?;
            for diag in &load.diagnostics {
                eprintln!("{diag}");
            }
            if load.skipped() > 0 {
                eprintln!("{path}: skipped {} malformed line(s)", load.skipped());
            }
            if load.records.is_empty() {
                return Err(AppError::Input(format!("{path}: no parseable records")));
            }
            for rec in load.records {
                sources.push((rec.address.clone(), rec.source));
            }
        }
    }
    Ok(sources)
}

fn parse_algorithm(name: &str) -> Result<Algorithm, AppError> {
    name.parse::<Algorithm>()
        .map_err(|e| AppError::Usage(e.to_string()))
}

fn warn_nonstandard_folds(folds: u8) -> Result<(), AppError> {
    if folds == 0 {
        return Err(AppError::Usage("--folds must be at least 1".into()));
    }
    if folds != 10 {
        eprintln!("warning: the protocol uses 10 folds; running with {folds}");
    }
    Ok(())
}

pub fn check_erc20(paths: &[String], format: OutputFormat) -> CmdResult {
    let mut out = String::new();
    for (origin, source) in collect_sources(paths)? {
        let extraction = extract_units(&source);
        for diag in &extraction.diagnostics {
            eprintln!("{origin}:{}: {}", diag.line, diag.message);
        }
        let report = erc20::check_units(&extraction.units);
        match format {
            OutputFormat::Text => report::erc20_text(&mut out, &origin, &report),
            OutputFormat::Json => report::erc20_json(&mut out, &origin, &report),
        }
    }
    write_output(None, &out)
}

pub fn extract(paths: &[String], deny_modifiers: Option<&str>, out: Option<&str>) -> CmdResult {
    let deny: BTreeSet<String> = match deny_modifiers {
        Some(path) => read_file(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_owned)
            .collect(),
        None => BTreeSet::new(),
    };
    let mut buffer = String::new();
    for (origin, source) in collect_sources(paths)? {
        let extraction = extract_units(&source);
        for diag in &extraction.diagnostics {
            eprintln!("{origin}:{}: {}", diag.line, diag.message);
        }
        for unit in &extraction.units {
            for record in split_functions(unit, &origin, &deny) {
                let line = DatasetLine {
                    record,
                    fold: None,
                };
                buffer.push_str(&serde_json::to_string(&line).expect("serializable"));
                buffer.push('\n');
            }
        }
    }
    write_output(out, &buffer)
}

pub fn dataset(functions: &str, seed: u64, folds: u8, out: Option<&str>) -> CmdResult {
    warn_nonstandard_folds(folds)?;
    let mut lines = load_dataset(functions)?;
    let fold_ids = mlkit::assign_folds(lines.len(), folds, seed);
    let mut buffer = String::new();
    for (line, fold) in lines.iter_mut().zip(fold_ids) {
        line.fold = Some(fold);
        buffer.push_str(&serde_json::to_string(&line).expect("serializable"));
        buffer.push('\n');
    }
    write_output(out, &buffer)
}

pub fn train(dataset_path: &str, algo: &str, seed: u64, out: &str) -> CmdResult {
    let algorithm = parse_algorithm(algo)?;
    let lines = load_dataset(dataset_path)?;
    let records: Vec<FunctionRecord> = lines.into_iter().map(|l| l.record).collect();
    let stems: Vec<Vec<String>> = records.iter().map(textprep::preprocess).collect();
    let vocab = textprep::build_vocab_from_stems(&stems)
        .map_err(|e| AppError::Input(e.to_string()))?;
    let vectors: Vec<_> = stems
        .iter()
        .map(|s| textprep::vectorize_stems(s, &vocab))
        .collect();
    let labels: Vec<bool> = records.iter().map(|r| r.label).collect();
    let model = Model::train(algorithm, vocab, &vectors, &labels, &Hyperparameters::default(), seed)
        .map_err(|e| AppError::Input(e.to_string()))?;
    fs::write(out, model.to_json())
        .map_err(|e| AppError::Input(format!("cannot write {out}: {e}")))?;
    println!(
        "trained {} on {} functions (vocabulary {}) -> {}",
        algorithm,
        records.len(),
        model.vocab_size(),
        out
    );
    Ok(())
}

pub fn eval(dataset_path: &str, algo: &str, seed: u64, folds: u8, format: OutputFormat) -> CmdResult {
    let algorithm = parse_algorithm(algo)?;
    warn_nonstandard_folds(folds)?;
    let lines = load_dataset(dataset_path)?;
    let carries_folds = lines.iter().all(|l| l.fold.is_some());
    let (records, fold_ids): (Vec<FunctionRecord>, Vec<Option<u8>>) =
        lines.into_iter().map(|l| (l.record, l.fold)).unzip();
    let ds = if carries_folds {
        let ids: Vec<u8> = fold_ids.into_iter().map(|f| f.expect("checked")).collect();
        if let Some(bad) = ids.iter().find(|&&f| f >= folds) {
            return Err(AppError::Input(format!(
                "dataset fold {bad} is out of range for --folds {folds}"
            )));
        }
        Dataset::with_folds(records, ids, folds)
    } else {
        Dataset::new(records, folds, seed)
    };
    let cv = mlkit::cross_validate(&ds, algorithm, &Hyperparameters::default(), seed)
        .map_err(|e| AppError::Input(e.to_string()))?;
    match format {
        OutputFormat::Text => print!("{}", report::eval_text(&cv, seed)),
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&cv).expect("serializable"))
        }
    }
    Ok(())
}

pub fn predict(model_path: &str, paths: &[String], format: OutputFormat) -> CmdResult {
    let model_json = read_file(model_path)?;
    let model = Model::from_json(&model_json)
        .map_err(|e| AppError::Input(format!("cannot parse model {model_path}: {e}")))?;
    let mut out = String::new();
    for (origin, source) in collect_sources(paths)? {
        let extraction = extract_units(&source);
        for unit in &extraction.units {
            for record in split_functions(unit, &origin, &BTreeSet::new()) {
                let p = model.predict_record(&record);
                report::prediction_line(&mut out, &origin, &record, p, format);
            }
        }
    }
    write_output(None, &out)
}

pub fn ig(dataset_path: &str, top: Option<usize>, format: OutputFormat) -> CmdResult {
    let lines = load_dataset(dataset_path)?;
    let stems: Vec<Vec<String>> = lines.iter().map(|l| textprep::preprocess(&l.record)).collect();
    let labels: Vec<bool> = lines.iter().map(|l| l.record.label).collect();
    let mut entries = information_gain(&stems, &labels);
    if let Some(n) = top {
        entries.truncate(n);
    }
    match format {
        OutputFormat::Text => print!("{}", report::ig_text(&entries)),
        OutputFormat::Json => {
            for e in &entries {
                println!("{}", serde_json::to_string(e).expect("serializable"));
            }
        }
    }
    Ok(())
}

pub fn baseline(dataset_path: &str, keywords: Option<&str>, format: OutputFormat) -> CmdResult {
    let rule = match keywords {
        Some(path) => KeywordRule::from_lines(&read_file(path)?),
        None => KeywordRule::default(),
    };
    if rule.keywords.is_empty() {
        return Err(AppError::Usage("keyword list is empty".into()));
    }
    let lines = load_dataset(dataset_path)?;
    let truth: Vec<bool> = lines.iter().map(|l| l.record.label).collect();
    let predicted: Vec<bool> = lines
        .iter()
        .map(|l| keyword_predict(&l.record, &rule))
        .collect();
    let scores: Vec<f64> = predicted.iter().map(|&p| f64::from(u8::from(p))).collect();
    let metrics = mlkit::compute_metrics(&predicted, &scores, &truth)
        .map_err(|e| AppError::Input(e.to_string()))?;
    match format {
        OutputFormat::Text => print!("{}", report::metrics_text("keyword baseline", &metrics)),
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&metrics).expect("serializable"))
        }
    }
    Ok(())
}

pub fn pairs(
    corpus_path: &str,
    threshold: f64,
    normalize_identifiers: bool,
    format: OutputFormat,
) -> CmdResult {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(AppError::Usage(format!(
            "--threshold must be in (0, 1], got {threshold}"
        )));
    }
    let load = corpus::load_corpus(corpus_path).map_err(|e| AppError::Input(e.to_string()))?;
    for diag in &load.diagnostics {
        eprintln!("{diag}");
    }
    if load.skipped() > 0 {
        eprintln!(
            "{corpus_path}: skipped {} malformed line(s)",
            load.skipped()
        );
    }
    let groups = corpus::cluster_by_creator(load.records);
    let found = lineage::find_ps_pairs(&groups, threshold, normalize_identifiers);
    let mut out = String::new();
    for pair in &found {
        match format {
            OutputFormat::Text => {
                out.push_str(&format!(
                    "{} {} {:.6}\n",
                    pair.predecessor.address, pair.successor.address, pair.similarity
                ));
            }
            OutputFormat::Json => {
                let obj = serde_json::json!({
                    "predecessor": pair.predecessor.address,
                    "successor": pair.successor.address,
                    "similarity": pair.similarity,
                });
                out.push_str(&obj.to_string());
                out.push('\n');
            }
        }
    }
    write_output(None, &out)
}

pub fn diff(old: &str, new: &str, ignore_blank: bool, format: OutputFormat) -> CmdResult {
    let old_text = read_file(old)?;
    let new_text = read_file(new)?;
    let mut hunks = diffview::lcs_diff(&old_text, &new_text);
    if ignore_blank {
        for hunk in &mut hunks {
            if hunk.kind != diffview::HunkKind::Common {
                hunk.lines.retain(|l| !l.text.trim().is_empty());
            }
        }
        hunks.retain(|h| !h.lines.is_empty());
    }
    match format {
        OutputFormat::Text => print!("{}", diffview::render_diff(&hunks, false)),
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&hunks).expect("serializable"))
        }
    }
    Ok(())
}
