//! Word ranking by information gain and the keyword baseline classifier.

use serde::{Deserialize, Serialize};

use crate::textprep::FunctionRecord;

/// Information-gain entry for one word: the mutual information between the
/// word's presence and the permission label, plus the four joint counts it
/// was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgEntry {
    pub word: String,
    pub ig: f64,
    /// Functions containing the word, labeled positive.
    pub n_word_pos: u32,
    /// Functions containing the word, labeled negative.
    pub n_word_neg: u32,
    /// Functions without the word, labeled positive.
    pub n_nonword_pos: u32,
    /// Functions without the word, labeled negative.
    pub n_nonword_neg: u32,
}

fn ig_term(joint: f64, marginal_w: f64, marginal_t: f64) -> f64 {
    // 0 * log 0 := 0
    if joint <= 0.0 {
        return 0.0;
    }
    joint * (joint / (marginal_w * marginal_t)).ln()
}

/// Computes information gain for every word of the dataset, presence
/// semantics (a word counts once per function). Probabilities are
/// empirical frequencies over functions; natural log. Sorted descending by
/// gain, ties by word.
pub fn information_gain<S: AsRef<str>>(stems: &[Vec<S>], labels: &[bool]) -> Vec<IgEntry> {
    assert_eq!(stems.len(), labels.len());
    let n = stems.len();
    if n == 0 {
        return Vec::new();
    }
    let n_pos = labels.iter().filter(|&&l| l).count() as u32;

    let mut counts: std::collections::BTreeMap<&str, (u32, u32)> = std::collections::BTreeMap::new();
    for (function, &label) in stems.iter().zip(labels) {
        let present: std::collections::BTreeSet<&str> =
            function.iter().map(AsRef::as_ref).collect();
        for word in present {
            let slot = counts.entry(word).or_insert((0, 0));
            if label {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
    }

    let total = n as f64;
    let p_pos = f64::from(n_pos) / total;
    let p_neg = 1.0 - p_pos;
    let mut entries: Vec<IgEntry> = counts
        .into_iter()
        .map(|(word, (word_pos, word_neg))| {
            let nonword_pos = n_pos - word_pos;
            let nonword_neg = (n as u32 - n_pos) - word_neg;
            let p_w = f64::from(word_pos + word_neg) / total;
            let p_nw = 1.0 - p_w;
            let ig = ig_term(f64::from(word_pos) / total, p_w, p_pos)
                + ig_term(f64::from(word_neg) / total, p_w, p_neg)
                + ig_term(f64::from(nonword_pos) / total, p_nw, p_pos)
                + ig_term(f64::from(nonword_neg) / total, p_nw, p_neg);
            IgEntry {
                word: word.to_owned(),
                // clamp the tiny negative rounding residue of independent words
                ig: ig.max(0.0),
                n_word_pos: word_pos,
                n_word_neg: word_neg,
                n_nonword_pos: nonword_pos,
                n_nonword_neg: nonword_neg,
            }
        })
        .collect();
    entries.sort_by(|a, b| b.ig.total_cmp(&a.ig).then_with(|| a.word.cmp(&b.word)));
    entries
}

/// The keyword baseline: a function needs a permission check when its raw
/// lowercased text contains any of the keywords as a substring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordRule {
    pub keywords: Vec<String>,
}

impl Default for KeywordRule {
    fn default() -> Self {
        KeywordRule {
            keywords: [
                "msg.sender.transfer",
                "ownership",
                "administr",
                "mint",
                "renounce",
                "mload",
                "assemble",
                "emerge",
                "pause",
                "stop",
                "unpause",
            ]
            .iter()
            .map(|s| (*s).to_owned())
            .collect(),
        }
    }
}

impl KeywordRule {
    /// One lowercase keyword per line; blank lines ignored.
    pub fn from_lines(text: &str) -> KeywordRule {
        KeywordRule {
            keywords: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| l.to_ascii_lowercase())
                .collect(),
        }
    }
}

/// Applies the rule to the original (pre-preprocessing) function text.
pub fn keyword_predict(record: &FunctionRecord, rule: &KeywordRule) -> bool {
    let text = record.text.to_ascii_lowercase();
    rule.keywords.iter().any(|k| text.contains(k.as_str()))
}
