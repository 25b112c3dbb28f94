//! Contract corpus loading, creator clustering and candidate-pair
//! enumeration.
//!
//! A corpus is a line-delimited UTF-8 file, one JSON object per line with
//! keys `address`, `creator`, `created_at`, `destructed`, optional
//! `destructed_at`, `source` and optional `compiler_version`. Malformed
//! lines are skipped with a per-line diagnostic rather than aborting the
//! whole load.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::Diagnostic;

/// One verified-contract entry of a corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractRecord {
    /// 0x-prefixed, 40 lowercase hex chars after normalization.
    pub address: String,
    pub creator: String,
    /// Unix seconds of the creating transaction.
    pub created_at: i64,
    pub destructed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub destructed_at: Option<i64>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compiler_version: Option<String>,
}

/// Contracts sharing one creator address, ordered by `(created_at, address)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CreatorGroup {
    pub creator: String,
    pub contracts: Vec<ContractRecord>,
}

/// A self-destructed contract paired with a contract the same creator
/// deployed at the same time or later.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlPair<'a> {
    pub predecessor: &'a ContractRecord,
    pub later: &'a ContractRecord,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Result of loading a corpus file: parsed records in file order plus one
/// diagnostic per skipped line.
#[derive(Debug, Default)]
pub struct CorpusLoad {
    pub records: Vec<ContractRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

impl CorpusLoad {
    pub fn skipped(&self) -> usize {
        self.diagnostics.len()
    }
}

fn normalize_address(raw: &str) -> Result<String, String> {
    let lower = raw.to_ascii_lowercase();
    let hex = lower
        .strip_prefix("0x")
        .ok_or_else(|| format!("address `{raw}` lacks 0x prefix"))?;
    if hex.len() != 40 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(format!("address `{raw}` is not 40 hex chars"));
    }
    Ok(lower)
}

fn validate(mut rec: ContractRecord) -> Result<ContractRecord, String> {
    rec.address = normalize_address(&rec.address)?;
    rec.creator = normalize_address(&rec.creator)?;
    if rec.source.is_empty() {
        return Err("empty source".to_owned());
    }
    if let Some(at) = rec.destructed_at {
        if !rec.destructed {
            return Err("destructed_at present but destructed is false".to_owned());
        }
        if at < rec.created_at {
            return Err("destructed_at precedes created_at".to_owned());
        }
    }
    Ok(rec)
}

/// Parses one corpus line. Exposed for loaders that stream from sources
/// other than a file.
pub fn parse_record(line: &str) -> Result<ContractRecord, String> {
    let rec: ContractRecord =
        serde_json::from_str(line).map_err(|e| format!("invalid record: {e}"))?;
    validate(rec)
}

/// Loads a corpus file. Unreadable files are fatal; malformed lines are
/// skipped with a diagnostic naming the line. Blank lines are ignored.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<CorpusLoad, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let origin = path.display().to_string();
    let mut out = CorpusLoad::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line) {
            Ok(rec) => out.records.push(rec),
            Err(msg) => out
                .diagnostics
                .push(Diagnostic::new(Some(&origin), idx + 1, msg)),
        }
    }
    Ok(out)
}

/// Groups records by creator without dropping anything; groups are sorted
/// by creator address, members by `(created_at, address)`.
pub fn creator_groups_all(records: Vec<ContractRecord>) -> Vec<CreatorGroup> {
    let mut by_creator: std::collections::BTreeMap<String, Vec<ContractRecord>> =
        std::collections::BTreeMap::new();
    for rec in records {
        by_creator.entry(rec.creator.clone()).or_default().push(rec);
    }
    by_creator
        .into_iter()
        .map(|(creator, mut contracts)| {
            contracts.sort_by(|a, b| {
                a.created_at
                    .cmp(&b.created_at)
                    .then_with(|| a.address.cmp(&b.address))
            });
            CreatorGroup { creator, contracts }
        })
        .collect()
}

/// Groups records by creator and keeps only groups containing at least one
/// self-destructed contract.
pub fn cluster_by_creator(records: Vec<ContractRecord>) -> Vec<CreatorGroup> {
    creator_groups_all(records)
        .into_iter()
        .filter(|g| g.contracts.iter().any(|c| c.destructed))
        .collect()
}

/// Enumerates predecessor/later pairs: for each destructed contract, one
/// pair per contract positioned after it in the group ordering.
pub fn pl_pairs(group: &CreatorGroup) -> Vec<PlPair<'_>> {
    let mut pairs = Vec::new();
    for (i, pred) in group.contracts.iter().enumerate() {
        if !pred.destructed {
            continue;
        }
        for later in &group.contracts[i + 1..] {
            pairs.push(PlPair {
                predecessor: pred,
                later,
            });
        }
    }
    pairs
}
