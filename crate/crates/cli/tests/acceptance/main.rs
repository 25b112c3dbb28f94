//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).

mod synth;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use sollens_core::diffview;
use sollens_core::erc20::{check_units, Erc20Verdict};
use sollens_core::features::{information_gain, keyword_predict, KeywordRule};
use sollens_core::lineage;
use sollens_core::mlkit::{
    assign_folds, auc_score, compute_metrics, cross_validate, test_parts, Algorithm,
    Dataset, Hyperparameters, Model,
};
use sollens_core::solfront::extract_units;
use sollens_core::textprep::{self, build_vocab_from_stems, vectorize_stems};

fn verdict_line(name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {name}: {}{}",
        if ok { "PASS" } else { "FAIL" },
        if detail.is_empty() {
            String::new()
        } else {
            format!(" ({detail})")
        }
    );
    assert!(ok, "acceptance criterion failed: {name} {detail}");
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sollens"))
}

#[test]
fn criterion_01_erc20_checker_exactness() {
    let dir = fixture_dir().join("erc20");
    let started = Instant::now();
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sol"))
        .collect();
    files.sort();
    let mut correct = 0;
    let mut total = 0;
    let mut failures = Vec::new();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let expected = if name.starts_with("matched_") {
            Erc20Verdict::Matched
        } else if name.starts_with("unmatched_") {
            Erc20Verdict::Unmatched
        } else {
            Erc20Verdict::NotErc20
        };
        let source = std::fs::read_to_string(path).unwrap();
        let report = check_units(&extract_units(&source).units);
        total += 1;
        if report.verdict == expected {
            correct += 1;
        } else {
            failures.push(format!("{name}: {} != {expected:?}", report.verdict));
        }
    }
    let elapsed = started.elapsed();
    let ok = total >= 24 && correct == total && elapsed.as_secs_f64() < 1.0;
    verdict_line(
        "1 (ERC20 checker exactness)",
        ok,
        &format!(
            "{correct}/{total} verdicts in {:.0} ms{}",
            elapsed.as_secs_f64() * 1e3,
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    );
}

#[test]
fn criterion_02_tfidf_oracle_equivalence() {
    let pool = [
        "transfer", "balance", "owner", "value", "mint", "pause", "supply", "check", "vote",
        "claim", "registry", "oracle",
    ];
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let stems: Vec<Vec<String>> = (0..10)
            .map(|_| {
                (0..rng.random_range(0..15))
                    .map(|_| pool[rng.random_range(0..pool.len())].to_owned())
                    .collect()
            })
            .collect();
        let vocab = build_vocab_from_stems(&stems).unwrap();
        let n = stems.len() as f64;
        for function in &stems {
            let vector = vectorize_stems(function, &vocab);
            for (idx, word) in vocab.words().iter().enumerate() {
                // independent recount of tf and df, direct formula
                let tf = function.iter().filter(|s| *s == word).count() as f64;
                let df = stems
                    .iter()
                    .filter(|f| f.iter().any(|s| s == word))
                    .count() as f64;
                let expected = if tf > 0.0 { tf * (n / df).ln() } else { 0.0 };
                worst = worst.max((vector.get(idx as u32) - expected).abs());
            }
        }
    }
    verdict_line(
        "2 (TF-IDF weight oracle equivalence)",
        worst < 1e-9,
        &format!("max |diff| = {worst:.2e} over 100 corpora"),
    );
}

/// Brute-force mutual information from the explicit 2x2 joint table.
fn ig_oracle(stems: &[Vec<String>], labels: &[bool], word: &str) -> f64 {
    let n = stems.len() as f64;
    let mut joint = [[0.0f64; 2]; 2]; // [contains][positive]
    for (function, &label) in stems.iter().zip(labels) {
        let contains = usize::from(function.iter().any(|s| s == word));
        joint[contains][usize::from(label)] += 1.0;
    }
    let mut ig = 0.0;
    for w in 0..2 {
        for t in 0..2 {
            let p_joint = joint[w][t] / n;
            let p_w = (joint[w][0] + joint[w][1]) / n;
            let p_t = (joint[0][t] + joint[1][t]) / n;
            if p_joint > 0.0 {
                ig += p_joint * (p_joint / (p_w * p_t)).ln();
            }
        }
    }
    ig
}

#[test]
fn criterion_03_information_gain_oracle() {
    let pool = ["owner", "mint", "value", "check", "vote", "swap", "pool"];
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut bound_ok = true;
    for _ in 0..60 {
        let n = rng.random_range(4..=50);
        let stems: Vec<Vec<String>> = (0..n)
            .map(|_| {
                (0..rng.random_range(1..6))
                    .map(|_| pool[rng.random_range(0..pool.len())].to_owned())
                    .collect()
            })
            .collect();
        let labels: Vec<bool> = (0..n).map(|_| rng.random_range(0..2) == 1).collect();
        let entries = information_gain(&stems, &labels);
        let pos = labels.iter().filter(|&&l| l).count() as f64 / n as f64;
        let entropy = if pos == 0.0 || pos == 1.0 {
            0.0
        } else {
            -pos * pos.ln() - (1.0 - pos) * (1.0 - pos).ln()
        };
        for e in &entries {
            worst = worst.max((e.ig - ig_oracle(&stems, &labels, &e.word)).abs());
            bound_ok &= e.ig <= entropy + 1e-9;
        }
    }
    // a word present in every function is label-independent
    let stems: Vec<Vec<String>> = (0..8).map(|_| vec!["ubiquitous".to_owned()]).collect();
    let labels: Vec<bool> = (0..8).map(|i| i % 2 == 0).collect();
    let independent = information_gain(&stems, &labels)[0].ig;
    let ok = worst < 1e-9 && bound_ok && independent.abs() < 1e-12;
    verdict_line(
        "3 (information gain oracle equivalence)",
        ok,
        &format!("max |diff| = {worst:.2e}; entropy bound {bound_ok}; IG(ubiquitous) = {independent:.1e}"),
    );
}

#[test]
fn criterion_04_similarity_formula() {
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut bounds_ok = true;
    let mut identity_ok = true;

    fn embed_counts(counts: &[u32]) -> lineage::CodeEmbedding {
        // go through real sources so the public construction is exercised
        let mut dict = lineage::TokenDictionary::default();
        dict.add_tokens((0..counts.len()).map(|i| format!("tok{i}")));
        let source: String = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(format!("tok{i} "), c as usize))
            .collect();
        lineage::embed_source(&source, &dict, false)
    }

    for _ in 0..1000 {
        let dim = rng.random_range(1..12);
        let a: Vec<u32> = (0..dim).map(|_| rng.random_range(0..7)).collect();
        let b: Vec<u32> = (0..dim).map(|_| rng.random_range(0..7)).collect();
        let (ea, eb) = (embed_counts(&a), embed_counts(&b));
        if ea.is_zero() && eb.is_zero() {
            continue;
        }
        let got = lineage::similarity(&ea, &eb).unwrap();
        // direct evaluation of the published formula
        let dist: f64 = a
            .iter()
            .zip(&b)
            .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
            .sum::<f64>()
            .sqrt();
        let na = a.iter().map(|&x| f64::from(x).powi(2)).sum::<f64>().sqrt();
        let nb = b.iter().map(|&y| f64::from(y).powi(2)).sum::<f64>().sqrt();
        let expected = 1.0 - dist / (na + nb);
        worst = worst.max((got - expected).abs());
        bounds_ok &= (-1e-12..=1.0 + 1e-12).contains(&got);
        if !ea.is_zero() {
            identity_ok &= lineage::similarity(&ea, &ea).unwrap() == 1.0;
        }
    }

    // threshold monotonicity on the synthetic lineage corpus
    let corpus = synth::lineage_corpus();
    let groups = sollens_core::corpus::cluster_by_creator(corpus.records);
    let loose = lineage::find_ps_pairs(&groups, 0.6, false);
    let tight = lineage::find_ps_pairs(&groups, 0.95, false);
    let loose_set: BTreeSet<(String, String)> = loose
        .iter()
        .map(|p| (p.predecessor.address.clone(), p.successor.address.clone()))
        .collect();
    let monotone = tight.len() <= loose.len()
        && tight
            .iter()
            .all(|p| loose_set.contains(&(p.predecessor.address.clone(), p.successor.address.clone())));

    let ok = worst < 1e-12 && bounds_ok && identity_ok && monotone;
    verdict_line(
        "4 (similarity formula)",
        ok,
        &format!(
            "max |diff| = {worst:.2e}; bounds {bounds_ok}; identity {identity_ok}; monotone {monotone} ({} vs {} pairs)",
            tight.len(),
            loose.len()
        ),
    );
}

#[test]
fn criterion_05_cross_validation_protocol() {
    let n = 2000;
    let folds = assign_folds(n, 10, 42);
    // incidence: every part tests in exactly three rounds
    let mut incidence = [0u32; 10];
    for round in 0..10 {
        for p in test_parts(round, 10) {
            incidence[p as usize] += 1;
        }
    }
    let incidence_ok = incidence == [3; 10];
    // per-round sizes from the actual fold assignment
    let mut sizes_ok = true;
    for round in 0..10u8 {
        let test = test_parts(round, 10);
        let test_size = folds.iter().filter(|f| test.contains(f)).count();
        let train_size = n - test_size;
        sizes_ok &= (test_size as i64 - (n as i64 * 3) / 10).abs() <= 10;
        sizes_ok &= (train_size as i64 - (n as i64 * 7) / 10).abs() <= 10;
    }
    // each example is predicted exactly three times across the ten rounds
    let mut predictions = vec![0u32; n];
    for round in 0..10u8 {
        let test = test_parts(round, 10);
        for (i, f) in folds.iter().enumerate() {
            if test.contains(f) {
                predictions[i] += 1;
            }
        }
    }
    let coverage_ok = predictions.iter().all(|&c| c == 3);
    let ok = incidence_ok && sizes_ok && coverage_ok;
    verdict_line(
        "5 (cross-validation protocol)",
        ok,
        &format!("incidence {incidence:?}; sizes ±10 {sizes_ok}; coverage x3 {coverage_ok}"),
    );
}

#[test]
fn criterion_06_classifier_sanity() {
    let records = synth::permission_corpus(0xC0FFEE);
    let dataset = Dataset::new(records.clone(), 10, 42);
    let hp = Hyperparameters::default();

    let tree_report = cross_validate(&dataset, Algorithm::DecisionTree, &hp, 42).unwrap();
    let tree_f = tree_report.average.f_measure;
    let tree_auc = tree_report.average.auc;

    // every algorithm trains and evaluates without error on round 0
    let test = test_parts(0, 10);
    let (mut train_idx, mut test_idx) = (Vec::new(), Vec::new());
    for (i, f) in dataset.fold_ids.iter().enumerate() {
        if test.contains(f) {
            test_idx.push(i);
        } else {
            train_idx.push(i);
        }
    }
    let train_stems: Vec<Vec<String>> = train_idx.iter().map(|&i| dataset.stems[i].clone()).collect();
    let vocab = build_vocab_from_stems(&train_stems).unwrap();
    let train_vectors: Vec<_> = train_idx
        .iter()
        .map(|&i| vectorize_stems(&dataset.stems[i], &vocab))
        .collect();
    let train_labels: Vec<bool> = train_idx.iter().map(|&i| records[i].label).collect();
    let mut all_ok = true;
    for algorithm in Algorithm::ALL {
        let model = Model::train(algorithm, vocab.clone(), &train_vectors, &train_labels, &hp, 42);
        match model {
            Ok(model) => {
                let mut predicted = Vec::new();
                let mut scores = Vec::new();
                let mut truth = Vec::new();
                for &i in &test_idx {
                    let p = model.predict_stems(&dataset.stems[i]);
                    predicted.push(p.label);
                    scores.push(p.score);
                    truth.push(records[i].label);
                }
                all_ok &= compute_metrics(&predicted, &scores, &truth).is_ok();
            }
            Err(e) => {
                eprintln!("{algorithm:?} failed: {e}");
                all_ok = false;
            }
        }
    }

    // keyword baseline on the same corpus
    let rule = KeywordRule::default();
    let predicted: Vec<bool> = records.iter().map(|r| keyword_predict(r, &rule)).collect();
    let scores: Vec<f64> = predicted.iter().map(|&p| f64::from(u8::from(p))).collect();
    let truth: Vec<bool> = records.iter().map(|r| r.label).collect();
    let baseline = compute_metrics(&predicted, &scores, &truth).unwrap();

    let ok = tree_f >= 0.85 && tree_auc >= 0.90 && all_ok && baseline.f_measure < tree_f;
    verdict_line(
        "6 (classifier sanity on planted corpus)",
        ok,
        &format!(
            "tree F = {tree_f:.4}, AUC = {tree_auc:.4}; all five trained = {all_ok}; baseline F = {:.4}",
            baseline.f_measure
        ),
    );
}

#[test]
fn criterion_07_auc_exactness() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let mut exact = true;
    for _ in 0..100 {
        let n = rng.random_range(2..=200);
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0u8..12)) / 11.0).collect();
        let truth: Vec<bool> = (0..n).map(|_| rng.random_range(0..2) == 1).collect();

        let mut num = 0.0;
        let mut pairs = 0u64;
        for i in 0..n {
            if !truth[i] {
                continue;
            }
            for j in 0..n {
                if truth[j] {
                    continue;
                }
                pairs += 1;
                if scores[i] > scores[j] {
                    num += 1.0;
                } else if scores[i] == scores[j] {
                    num += 0.5;
                }
            }
        }
        let brute = (pairs > 0).then(|| num / pairs as f64);
        exact &= auc_score(&scores, &truth) == brute;
    }
    verdict_line("7 (AUC exactness vs all-pairs)", exact, "100 random score/label sets, n <= 200");
}

#[test]
fn criterion_08_porter_reference_vocabulary() {
    let fixture = std::fs::read_to_string(fixture_dir().join("porter_pairs.tsv")).unwrap();
    let mut total = 0;
    let mut mismatches = Vec::new();
    let mut has_running = false;
    for line in fixture.lines() {
        let (word, expected) = line.split_once('\t').unwrap();
        total += 1;
        if word == "running" {
            has_running = expected == "run";
        }
        let got = textprep::porter::stem(word);
        if got != expected {
            mismatches.push(format!("{word}: {got} != {expected}"));
        }
    }
    let ok = total >= 100 && mismatches.is_empty() && has_running;
    verdict_line(
        "8 (Porter stemmer reference agreement)",
        ok,
        &format!(
            "{total} pairs{}",
            if mismatches.is_empty() {
                String::new()
            } else {
                format!("; mismatches: {mismatches:?}")
            }
        ),
    );
}

#[test]
fn criterion_09_diff_correctness() {
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let mut reconstruct_ok = true;
    let mut lcs_ok = true;

    fn lcs_len_oracle(a: &[&str], b: &[&str]) -> usize {
        let mut prev = vec![0usize; b.len() + 1];
        for x in a {
            let mut cur = vec![0usize; b.len() + 1];
            for (j, y) in b.iter().enumerate() {
                cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
            }
            prev = cur;
        }
        prev[b.len()]
    }

    for _ in 0..500 {
        let base_len = rng.random_range(0..120);
        let base: Vec<String> = (0..base_len)
            .map(|i| format!("line {} token{}", i, rng.random_range(0..9)))
            .collect();
        // random line edits: delete, insert, modify
        let mut edited = base.clone();
        for _ in 0..rng.random_range(0..25) {
            match rng.random_range(0..3) {
                0 if !edited.is_empty() => {
                    let at = rng.random_range(0..edited.len());
                    edited.remove(at);
                }
                1 => {
                    let at = rng.random_range(0..=edited.len());
                    edited.insert(at, format!("inserted token{}", rng.random_range(0..9)));
                }
                _ if !edited.is_empty() => {
                    let at = rng.random_range(0..edited.len());
                    edited[at] = format!("modified token{}", rng.random_range(0..9));
                }
                _ => {}
            }
        }
        let a_text: String = base.iter().map(|l| format!("{l}\n")).collect();
        let b_text: String = edited.iter().map(|l| format!("{l}\n")).collect();
        let hunks = diffview::lcs_diff(&a_text, &b_text);
        reconstruct_ok &= diffview::reconstruct_old(&hunks) == a_text;
        reconstruct_ok &= diffview::reconstruct_new(&hunks) == b_text;
        let a_lines: Vec<&str> = a_text.split_inclusive('\n').collect();
        let b_lines: Vec<&str> = b_text.split_inclusive('\n').collect();
        lcs_ok &= diffview::common_line_count(&hunks) == lcs_len_oracle(&a_lines, &b_lines);
    }

    let sample = "contract C {\n    function f() public {\n        x = 1;\n    }\n}\n";
    let self_diff = diffview::lcs_diff(sample, sample);
    let self_ok = self_diff
        .iter()
        .all(|h| h.kind == diffview::HunkKind::Common);

    let ok = reconstruct_ok && lcs_ok && self_ok;
    verdict_line(
        "9 (diff correctness)",
        ok,
        &format!("500 fuzz cases; reconstruction {reconstruct_ok}; LCS oracle {lcs_ok}; self-diff {self_ok}"),
    );
}

#[test]
fn criterion_10_lineage_recovery() {
    let corpus = synth::lineage_corpus();
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("corpus.jsonl");
    let lines: String = corpus
        .records
        .iter()
        .map(|r| format!("{}\n", serde_json::to_string(r).unwrap()))
        .collect();
    std::fs::write(&corpus_path, lines).unwrap();

    let output = bin()
        .args(["pairs", "--corpus", corpus_path.to_str().unwrap(), "--threshold", "0.6"])
        .output()
        .unwrap();
    assert!(output.status.success(), "pairs failed: {output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut found: BTreeSet<(String, String)> = BTreeSet::new();
    for line in stdout.lines() {
        let mut it = line.split_whitespace();
        let pred = it.next().unwrap().to_owned();
        let succ = it.next().unwrap().to_owned();
        found.insert((pred, succ));
    }
    let planted: BTreeSet<(String, String)> = corpus.planted.iter().cloned().collect();
    let ok = found == planted;
    verdict_line(
        "10 (lineage recovery)",
        ok,
        &format!("recovered {}/{} planted, {} extra",
            found.intersection(&planted).count(),
            planted.len(),
            found.difference(&planted).count()
        ),
    );
}

#[test]
fn criterion_11_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth::lineage_corpus();
    let corpus_path = dir.path().join("corpus.jsonl");
    let lines: String = corpus
        .records
        .iter()
        .map(|r| format!("{}\n", serde_json::to_string(r).unwrap()))
        .collect();
    std::fs::write(&corpus_path, lines).unwrap();

    // build a labeled dataset from the fixture contracts via the binary
    let erc20_dir = fixture_dir().join("erc20");
    let mut sol_files: Vec<String> = std::fs::read_dir(&erc20_dir)
        .unwrap()
        .map(|e| e.unwrap().path().to_string_lossy().into_owned())
        .filter(|p| p.ends_with(".sol"))
        .collect();
    sol_files.sort();
    let functions_path = dir.path().join("functions.jsonl");
    let status = bin()
        .args(["extract", "--out", functions_path.to_str().unwrap()])
        .args(&sol_files)
        .status()
        .unwrap();
    assert!(status.success());
    let dataset_path = dir.path().join("dataset.jsonl");
    let status = bin()
        .args([
            "dataset",
            functions_path.to_str().unwrap(),
            "--seed",
            "42",
            "--out",
            dataset_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let run = |args: &[&str]| -> (Vec<u8>, Vec<u8>) {
        let out = bin().args(args).output().unwrap();
        assert!(out.status.success(), "command {args:?} failed: {out:?}");
        (out.stdout, out.stderr)
    };

    let ds = dataset_path.to_str().unwrap();
    let cp = corpus_path.to_str().unwrap();
    let model_a = dir.path().join("model_a.json");
    let model_b = dir.path().join("model_b.json");

    let eval_1 = run(&["eval", ds, "--algo", "dtree", "--seed", "42"]);
    let eval_2 = run(&["eval", ds, "--algo", "dtree", "--seed", "42"]);
    let pairs_1 = run(&["pairs", "--corpus", cp, "--threshold", "0.6"]);
    let pairs_2 = run(&["pairs", "--corpus", cp, "--threshold", "0.6"]);
    run(&["train", ds, "--algo", "rf", "--seed", "7", "--out", model_a.to_str().unwrap()]);
    run(&["train", ds, "--algo", "rf", "--seed", "7", "--out", model_b.to_str().unwrap()]);
    let bytes_a = std::fs::read(&model_a).unwrap();
    let bytes_b = std::fs::read(&model_b).unwrap();

    let ok = eval_1 == eval_2 && pairs_1 == pairs_2 && bytes_a == bytes_b;
    verdict_line(
        "11 (CLI determinism)",
        ok,
        &format!(
            "eval {} pairs {} model {}",
            eval_1 == eval_2,
            pairs_1 == pairs_2,
            bytes_a == bytes_b
        ),
    );
}
