//! Line-level diff between a predecessor and its successor, built on the
//! longest common subsequence. Hunks reconstruct both inputs byte-exactly:
//! common+removed lines concatenate to the old text, common+added to the
//! new one.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HunkKind {
    Common,
    Removed,
    Added,
}

/// One line with its 1-based number in the file it originates from
/// (the old text for common and removed lines, the new text for added).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffLine {
    pub line_no: usize,
    /// Line text including its terminator, when one was present.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffHunk {
    pub kind: HunkKind,
    pub lines: Vec<DiffLine>,
}

/// Splits text into lines keeping terminators, so concatenating the pieces
/// restores the input byte-exactly.
fn split_keep_ends(text: &str) -> Vec<&str> {
    text.split_inclusive('\n').collect()
}

/// Line diff of `a` against `b`. When several alignments tie, earlier
/// lines of `a` are preferred (removals come before additions).
pub fn lcs_diff(a: &str, b: &str) -> Vec<DiffHunk> {
    let a_lines = split_keep_ends(a);
    let b_lines = split_keep_ends(b);
    let n = a_lines.len();
    let m = b_lines.len();

    // dp[i][j] = LCS length of a[i..] vs b[j..], row-compressed
    let mut dp = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[i][j] = if a_lines[i] == b_lines[j] {
                dp[i + 1][j + 1] + 1
            } else {
                dp[i + 1][j].max(dp[i][j + 1])
            };
        }
    }

    let mut hunks: Vec<DiffHunk> = Vec::new();
    let mut push = |kind: HunkKind, line_no: usize, text: &str| {
        let line = DiffLine {
            line_no,
            text: text.to_owned(),
        };
        match hunks.last_mut() {
            Some(h) if h.kind == kind => h.lines.push(line),
            _ => hunks.push(DiffHunk {
                kind,
                lines: vec![line],
            }),
        }
    };

    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if a_lines[i] == b_lines[j] && dp[i][j] == dp[i + 1][j + 1] + 1 {
            push(HunkKind::Common, i + 1, a_lines[i]);
            i += 1;
            j += 1;
        } else if dp[i + 1][j] >= dp[i][j + 1] {
            push(HunkKind::Removed, i + 1, a_lines[i]);
            i += 1;
        } else {
            push(HunkKind::Added, j + 1, b_lines[j]);
            j += 1;
        }
    }
    while i < n {
        push(HunkKind::Removed, i + 1, a_lines[i]);
        i += 1;
    }
    while j < m {
        push(HunkKind::Added, j + 1, b_lines[j]);
        j += 1;
    }
    hunks
}

/// Rebuilds the old text from common and removed lines.
pub fn reconstruct_old(hunks: &[DiffHunk]) -> String {
    hunks
        .iter()
        .filter(|h| h.kind != HunkKind::Added)
        .flat_map(|h| h.lines.iter())
        .map(|l| l.text.as_str())
        .collect()
}

/// Rebuilds the new text from common and added lines.
pub fn reconstruct_new(hunks: &[DiffHunk]) -> String {
    hunks
        .iter()
        .filter(|h| h.kind != HunkKind::Removed)
        .flat_map(|h| h.lines.iter())
        .map(|l| l.text.as_str())
        .collect()
}

/// Number of common lines, which equals the LCS length of the two inputs.
pub fn common_line_count(hunks: &[DiffHunk]) -> usize {
    hunks
        .iter()
        .filter(|h| h.kind == HunkKind::Common)
        .map(|h| h.lines.len())
        .sum()
}

/// Renders hunks with ` `/`-`/`+` markers. With `ignore_blank`, removed and
/// added lines that are entirely whitespace are omitted from the output.
pub fn render_diff(hunks: &[DiffHunk], ignore_blank: bool) -> String {
    let mut out = String::new();
    for hunk in hunks {
        let marker = match hunk.kind {
            HunkKind::Common => ' ',
            HunkKind::Removed => '-',
            HunkKind::Added => '+',
        };
        for line in &hunk.lines {
            if ignore_blank && hunk.kind != HunkKind::Common && line.text.trim().is_empty() {
                continue;
            }
            out.push(marker);
            out.push_str(line.text.trim_end_matches(['\n', '\r']));
            out.push('\n');
        }
    }
    out
}
