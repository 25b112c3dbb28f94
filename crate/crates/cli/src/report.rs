//! Text renderings of the analysis results. The structured (JSON) mode is
//! the source of facts; these are human-readable views over the same data.

use std::fmt::Write;

use sollens_core::erc20::{Erc20Report, MemberStatus, STANDARD_EVENTS, STANDARD_FUNCTIONS};
use sollens_core::features::IgEntry;
use sollens_core::mlkit::{CvReport, Metrics, Prediction};
use sollens_core::textprep::FunctionRecord;

use crate::OutputFormat;

fn status_word(status: MemberStatus) -> &'static str {
    match status {
        MemberStatus::Absent => "absent",
        MemberStatus::PresentUnmatched => "present_unmatched",
        MemberStatus::MatchedViaVariable => "matched_via_variable",
        MemberStatus::Matched => "matched",
    }
}

pub fn erc20_text(out: &mut String, origin: &str, report: &Erc20Report) {
    let scan = &report.scan;
    let _ = writeln!(
        out,
        "{origin}: {} (appeared {}, legal functions {}, legal events {})",
        report.verdict, scan.appeared_func, scan.legal_func, scan.legal_event
    );
    for member in STANDARD_FUNCTIONS.iter().chain(STANDARD_EVENTS) {
        let _ = writeln!(
            out,
            "  {:<14} {}",
            member.name,
            status_word(scan.per_member[member.name])
        );
    }
}

pub fn erc20_json(out: &mut String, origin: &str, report: &Erc20Report) {
    let mut members = serde_json::Map::new();
    for member in STANDARD_FUNCTIONS.iter().chain(STANDARD_EVENTS) {
        members.insert(
            member.name.to_owned(),
            serde_json::Value::String(status_word(report.scan.per_member[member.name]).to_owned()),
        );
    }
    let obj = serde_json::json!({
        "file": origin,
        "verdict": report.verdict,
        "appeared": report.scan.appeared_func,
        "legal_func": report.scan.legal_func,
        "legal_event": report.scan.legal_event,
        "members": members,
    });
    let _ = writeln!(out, "{obj}");
}

fn percent(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

/// Ten round columns plus the average, one row per metric.
pub fn eval_text(cv: &CvReport, seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Algorithm: {} (seed {}, {} rounds)",
        cv.algorithm,
        seed,
        cv.rounds.len()
    );
    let mut header = format!("{:<10}", "");
    for r in &cv.rounds {
        header.push_str(&format!("{:>9}", format!("R{}", r.round + 1)));
    }
    header.push_str(&format!("{:>9}", "AVG"));
    let _ = writeln!(out, "{header}");

    let rows: [(&str, Box<dyn Fn(&Metrics) -> String>); 5] = [
        ("Precision", Box::new(|m| percent(m.precision))),
        ("Recall", Box::new(|m| percent(m.recall))),
        ("F-Measure", Box::new(|m| percent(m.f_measure))),
        ("Accuracy", Box::new(|m| percent(m.accuracy))),
        ("AUC", Box::new(|m| format!("{:.4}", m.auc))),
    ];
    for (name, render) in rows {
        let mut row = format!("{name:<10}");
        for r in &cv.rounds {
            row.push_str(&format!("{:>9}", render(&r.metrics)));
        }
        row.push_str(&format!("{:>9}", render(&cv.average)));
        let _ = writeln!(out, "{row}");
    }
    for r in &cv.rounds {
        if let Some(w) = &r.metrics.warning {
            let _ = writeln!(out, "warning (R{}): {}", r.round + 1, w);
        }
    }
    out
}

pub fn metrics_text(title: &str, m: &Metrics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  Precision {}", percent(m.precision));
    let _ = writeln!(out, "  Recall    {}", percent(m.recall));
    let _ = writeln!(out, "  F-Measure {}", percent(m.f_measure));
    let _ = writeln!(out, "  Accuracy  {}", percent(m.accuracy));
    let _ = writeln!(out, "  AUC       {:.4}", m.auc);
    if let Some(w) = &m.warning {
        let _ = writeln!(out, "  warning: {w}");
    }
    out
}

pub fn ig_text(entries: &[IgEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4}  {:<24}{:>12}{:>9}{:>9}{:>9}{:>9}",
        "rank", "word", "ig", "n(w,t)", "n(w,!t)", "n(!w,t)", "n(!w,!t)"
    );
    for (rank, e) in entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>4}  {:<24}{:>12.6}{:>9}{:>9}{:>9}{:>9}",
            rank + 1,
            e.word,
            e.ig,
            e.n_word_pos,
            e.n_word_neg,
            e.n_nonword_pos,
            e.n_nonword_neg
        );
    }
    out
}

pub fn prediction_line(
    out: &mut String,
    origin: &str,
    record: &FunctionRecord,
    p: Prediction,
    format: OutputFormat,
) {
    let name = if record.name.is_empty() {
        "<fallback>"
    } else {
        record.name.as_str()
    };
    match format {
        OutputFormat::Text => {
            let verdict = if p.label {
                "needs-permission-check"
            } else {
                "no-check-needed"
            };
            let _ = writeln!(out, "{origin}:{name}: {verdict} (score {:.4})", p.score);
        }
        OutputFormat::Json => {
            let obj = serde_json::json!({
                "contract": origin,
                "function": record.name,
                "label": p.label,
                "score": p.score,
            });
            let _ = writeln!(out, "{obj}");
        }
    }
}
