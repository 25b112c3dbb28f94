//! Browser bindings for the interactive demo page: ERC20 conformance
//! checking, contract comparison (similarity plus line diff) and function
//! extraction with the keyword permission heuristic, all running on pasted
//! source text.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sollens_core::diffview::{lcs_diff, DiffHunk};
use sollens_core::erc20::{check_units, MemberStatus, STANDARD_EVENTS, STANDARD_FUNCTIONS};
use sollens_core::features::{keyword_predict, KeywordRule};
use sollens_core::lineage::source_similarity;
use sollens_core::solfront::{extract_units, split_functions};
use sollens_core::textprep::preprocess;

#[derive(Serialize)]
struct MemberRow {
    name: &'static str,
    is_event: bool,
    status: String,
}

#[derive(Serialize)]
struct Erc20Result {
    verdict: String,
    appeared: u32,
    legal_func: u32,
    legal_event: u32,
    members: Vec<MemberRow>,
    diagnostics: Vec<String>,
}

fn status_word(status: MemberStatus) -> &'static str {
    match status {
        MemberStatus::Absent => "absent",
        MemberStatus::PresentUnmatched => "present (unmatched)",
        MemberStatus::MatchedViaVariable => "matched via variable",
        MemberStatus::Matched => "matched",
    }
}

fn to_js<T: Serialize>(value: &T) -> Result<JsValue, JsValue> {
    serde_wasm_bindgen::to_value(value).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// ERC20 conformance verdict for one pasted source file.
#[wasm_bindgen]
pub fn check_erc20(source: &str) -> Result<JsValue, JsValue> {
    let extraction = extract_units(source);
    let report = check_units(&extraction.units);
    let members = STANDARD_FUNCTIONS
        .iter()
        .map(|m| (m, false))
        .chain(STANDARD_EVENTS.iter().map(|m| (m, true)))
        .map(|(m, is_event)| MemberRow {
            name: m.name,
            is_event,
            status: status_word(report.scan.per_member[m.name]).to_owned(),
        })
        .collect();
    to_js(&Erc20Result {
        verdict: report.verdict.to_string(),
        appeared: report.scan.appeared_func,
        legal_func: report.scan.legal_func,
        legal_event: report.scan.legal_event,
        members,
        diagnostics: extraction
            .diagnostics
            .iter()
            .map(|d| d.to_string())
            .collect(),
    })
}

#[derive(Serialize)]
struct CompareResult {
    similarity: Option<f64>,
    above_threshold: Option<bool>,
    hunks: Vec<DiffHunk>,
}

/// Similarity score plus line diff between two pasted sources.
#[wasm_bindgen]
pub fn compare_contracts(
    old_source: &str,
    new_source: &str,
    threshold: f64,
    normalize_identifiers: bool,
) -> Result<JsValue, JsValue> {
    let similarity = source_similarity(old_source, new_source, normalize_identifiers).ok();
    to_js(&CompareResult {
        similarity,
        above_threshold: similarity.map(|s| s > threshold),
        hunks: lcs_diff(old_source, new_source),
    })
}

#[derive(Serialize)]
struct FunctionRow {
    name: String,
    modifiers: Vec<String>,
    has_permission_modifier: bool,
    keyword_hit: bool,
    stems: Vec<String>,
    text: String,
}

/// Extracts every bodied function with its preprocessing trace and the
/// keyword-rule permission guess.
#[wasm_bindgen]
pub fn analyze_functions(source: &str) -> Result<JsValue, JsValue> {
    let extraction = extract_units(source);
    let rule = KeywordRule::default();
    let mut rows = Vec::new();
    for unit in &extraction.units {
        for record in split_functions(unit, &unit.name, &Default::default()) {
            rows.push(FunctionRow {
                name: if record.name.is_empty() {
                    "<fallback>".to_owned()
                } else {
                    record.name.clone()
                },
                modifiers: record.modifiers.clone(),
                has_permission_modifier: record.label,
                keyword_hit: keyword_predict(&record, &rule),
                stems: preprocess(&record),
                text: record.text,
            });
        }
    }
    to_js(&rows)
}
