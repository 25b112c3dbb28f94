//! Contract code embeddings and predecessor/successor pair mining.
//!
//! A contract embeds as a token-count vector over a shared dictionary:
//! comments stripped, source lexed, numeric and string literals collapsed
//! to NUM/STR placeholders, identifiers kept verbatim (or mapped to
//! positional placeholders in normalized mode). Two embeddings compare as
//! `1 - euclidean(e1, e2) / (||e1|| + ||e2||)`; candidate pairs above the
//! threshold become PS pairs.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{pl_pairs, ContractRecord, CreatorGroup};
use crate::solfront::{lex, strip_comments, TokenKind};

pub const DEFAULT_SIMILARITY_THRESHOLD: f64 = 0.6;

/// Maps token spellings to dense indices. Build it over every contract
/// that will be compared; for count vectors a per-pair dictionary yields
/// the same similarity as a global one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenDictionary {
    indices: BTreeMap<String, u32>,
}

impl TokenDictionary {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn add_tokens<I: IntoIterator<Item = String>>(&mut self, tokens: I) {
        for tok in tokens {
            let next = self.indices.len() as u32;
            self.indices.entry(tok).or_insert(next);
        }
    }

    fn index_of(&self, token: &str) -> Option<u32> {
        self.indices.get(token).copied()
    }
}

/// Sparse token-count vector with its cached Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeEmbedding {
    entries: Vec<(u32, u32)>,
    norm: f64,
}

impl CodeEmbedding {
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A matched predecessor/successor pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsPair {
    pub predecessor: ContractRecord,
    pub successor: ContractRecord,
    pub similarity: f64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error("similarity of two zero embeddings is undefined (0/0)")]
    BothZero,
}

/// Normalized token stream of one contract source: literals collapsed to
/// NUM/STR; identifiers verbatim or positional when `normalize_identifiers`
/// is set.
pub fn normalized_tokens(source: &str, normalize_identifiers: bool) -> Vec<String> {
    let (clean, _) = strip_comments(source);
    let mut ids: HashMap<String, usize> = HashMap::new();
    lex(&clean)
        .into_iter()
        .map(|tok| match tok.kind {
            TokenKind::Number => "NUM".to_owned(),
            TokenKind::Str => "STR".to_owned(),
            TokenKind::Identifier if normalize_identifiers => {
                let next = ids.len();
                let slot = *ids.entry(tok.text).or_insert(next);
                format!("ID{slot}")
            }
            _ => tok.text,
        })
        .collect()
}

/// Builds the dictionary covering a set of contracts.
pub fn build_dictionary<'a, I>(sources: I, normalize_identifiers: bool) -> TokenDictionary
where
    I: IntoIterator<Item = &'a str>,
{
    let mut dict = TokenDictionary::default();
    for src in sources {
        dict.add_tokens(normalized_tokens(src, normalize_identifiers));
    }
    dict
}

/// Token-count embedding of one contract over a shared dictionary.
pub fn embed(
    record: &ContractRecord,
    dictionary: &TokenDictionary,
    normalize_identifiers: bool,
) -> CodeEmbedding {
    embed_source(&record.source, dictionary, normalize_identifiers)
}

pub fn embed_source(
    source: &str,
    dictionary: &TokenDictionary,
    normalize_identifiers: bool,
) -> CodeEmbedding {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for token in normalized_tokens(source, normalize_identifiers) {
        if let Some(idx) = dictionary.index_of(&token) {
            *counts.entry(idx).or_insert(0) += 1;
        }
    }
    let entries: Vec<(u32, u32)> = counts.into_iter().collect();
    let norm = entries
        .iter()
        .map(|&(_, c)| f64::from(c) * f64::from(c))
        .sum::<f64>()
        .sqrt();
    CodeEmbedding { entries, norm }
}

fn euclidean(a: &CodeEmbedding, b: &CodeEmbedding) -> f64 {
    let mut sum = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.entries.len() && j < b.entries.len() {
        let (ia, va) = a.entries[i];
        let (ib, vb) = b.entries[j];
        match ia.cmp(&ib) {
            std::cmp::Ordering::Less => {
                sum += f64::from(va) * f64::from(va);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                sum += f64::from(vb) * f64::from(vb);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let d = f64::from(va) - f64::from(vb);
                sum += d * d;
                i += 1;
                j += 1;
            }
        }
    }
    for &(_, v) in &a.entries[i..] {
        sum += f64::from(v) * f64::from(v);
    }
    for &(_, v) in &b.entries[j..] {
        sum += f64::from(v) * f64::from(v);
    }
    sum.sqrt()
}

/// `1 - euclidean(e1, e2) / (||e1|| + ||e2||)`; in [0, 1] for count
/// vectors by the triangle inequality.
pub fn similarity(e1: &CodeEmbedding, e2: &CodeEmbedding) -> Result<f64, SimilarityError> {
    if e1.is_zero() && e2.is_zero() {
        return Err(SimilarityError::BothZero);
    }
    Ok(1.0 - euclidean(e1, e2) / (e1.norm + e2.norm))
}

/// Similarity of two raw sources over their shared pairwise dictionary.
pub fn source_similarity(
    a: &str,
    b: &str,
    normalize_identifiers: bool,
) -> Result<f64, SimilarityError> {
    let dict = build_dictionary([a, b], normalize_identifiers);
    similarity(
        &embed_source(a, &dict, normalize_identifiers),
        &embed_source(b, &dict, normalize_identifiers),
    )
}

/// Filters every PL candidate of every group through the similarity
/// threshold (strictly greater). Output sorted by predecessor address,
/// then similarity descending, then successor address. Pairs whose two
/// sources both lex to nothing are skipped.
pub fn find_ps_pairs(
    groups: &[CreatorGroup],
    threshold: f64,
    normalize_identifiers: bool,
) -> Vec<PsPair> {
    let mut out = Vec::new();
    for group in groups {
        for candidate in pl_pairs(group) {
            let dict = build_dictionary(
                [
                    candidate.predecessor.source.as_str(),
                    candidate.later.source.as_str(),
                ],
                normalize_identifiers,
            );
            let e1 = embed(candidate.predecessor, &dict, normalize_identifiers);
            let e2 = embed(candidate.later, &dict, normalize_identifiers);
            let Ok(score) = similarity(&e1, &e2) else {
                continue;
            };
            if score > threshold {
                out.push(PsPair {
                    predecessor: candidate.predecessor.clone(),
                    successor: candidate.later.clone(),
                    similarity: score,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.predecessor
            .address
            .cmp(&b.predecessor.address)
            .then_with(|| b.similarity.total_cmp(&a.similarity))
            .then_with(|| a.successor.address.cmp(&b.successor.address))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn embedding(counts: &[u32]) -> CodeEmbedding {
        let entries: Vec<(u32, u32)> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u32, c))
            .collect();
        let norm = entries
            .iter()
            .map(|&(_, c)| f64::from(c) * f64::from(c))
            .sum::<f64>()
            .sqrt();
        CodeEmbedding { entries, norm }
    }

    #[test]
    fn identical_sources_embed_identically_and_score_one() {
        let src = "contract C { function f() public { x = 1; } }";
        let dict = build_dictionary([src, src], false);
        let a = embed_source(src, &dict, false);
        let b = embed_source(src, &dict, false);
        assert_eq!(a, b);
        assert_eq!(similarity(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn literal_changes_do_not_move_the_embedding() {
        let a = "contract C { uint x = 100; string s = \"hello\"; }";
        let b = "contract C { uint x = 42;  string s = \"other\"; }";
        let dict = build_dictionary([a, b], false);
        assert_eq!(embed_source(a, &dict, false), embed_source(b, &dict, false));
        assert_eq!(source_similarity(a, b, false).unwrap(), 1.0);
    }

    #[test]
    fn identifier_normalization_aligns_renamed_sources() {
        let a = "contract C { uint counter; function bump() public { counter += 1; } }";
        let b = "contract D { uint tally;   function grow() public { tally += 1; } }";
        assert!(source_similarity(a, b, false).unwrap() < 1.0);
        assert_eq!(source_similarity(a, b, true).unwrap(), 1.0);
    }

    #[test]
    fn empty_source_is_a_zero_vector() {
        let dict = build_dictionary(["contract C {}"], false);
        let z = embed_source("   \n", &dict, false);
        assert!(z.is_zero());
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn orthogonal_unit_vectors_score_one_minus_half_sqrt2() {
        let e1 = embedding(&[1, 0]);
        let e2 = embedding(&[0, 1]);
        let s = similarity(&e1, &e2).unwrap();
        assert!((s - (1.0 - std::f64::consts::SQRT_2 / 2.0)).abs() < 1e-12);
        assert!((s - 0.29289).abs() < 1e-5);
    }

    #[test]
    fn zero_against_nonzero_scores_zero_and_double_zero_errors() {
        let z = embedding(&[]);
        let e = embedding(&[3, 4]);
        assert_eq!(similarity(&e, &z).unwrap(), 0.0);
        assert_eq!(similarity(&z, &e).unwrap(), 0.0);
        assert_eq!(similarity(&z, &z).unwrap_err(), SimilarityError::BothZero);
    }

    proptest::proptest! {
        #[test]
        fn similarity_is_symmetric_bounded_and_scale_invariant(
            a in proptest::collection::vec(0u32..6, 1..12),
            b in proptest::collection::vec(0u32..6, 1..12),
            scale in 1u32..5,
        ) {
            let (ea, eb) = (embedding(&a), embedding(&b));
            if ea.is_zero() && eb.is_zero() {
                return Ok(());
            }
            let s_ab = similarity(&ea, &eb).unwrap();
            let s_ba = similarity(&eb, &ea).unwrap();
            proptest::prop_assert!((s_ab - s_ba).abs() < 1e-12);
            proptest::prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s_ab));
            if !ea.is_zero() {
                proptest::prop_assert!((similarity(&ea, &ea).unwrap() - 1.0).abs() == 0.0);
            }
            let scaled_a: Vec<u32> = a.iter().map(|&x| x * scale).collect();
            let scaled_b: Vec<u32> = b.iter().map(|&x| x * scale).collect();
            let s_scaled = similarity(&embedding(&scaled_a), &embedding(&scaled_b)).unwrap();
            proptest::prop_assert!((s_scaled - s_ab).abs() < 1e-12);
        }
    }
}
