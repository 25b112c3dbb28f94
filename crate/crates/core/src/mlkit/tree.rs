//! CART-style decision tree on sparse TF-IDF vectors: binary splits of the
//! form `weight > threshold`, Gini impurity, grown until purity or the
//! minimum split size. Supports per-node feature subsampling for forests.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::textprep::TfIdfVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        /// Positive fraction of the training rows that reached this leaf.
        score: f64,
    },
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy)]
pub struct TreeOptions {
    pub min_samples_split: usize,
    /// Number of candidate features per split; `None` means all.
    pub feature_subsample: Option<usize>,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            min_samples_split: 2,
            feature_subsample: None,
        }
    }
}

/// Sparse column view shared across one training run.
pub(crate) struct Columns {
    /// Per feature: (row, value) entries with value drawn from the vector.
    cols: Vec<Vec<(u32, f64)>>,
}

impl Columns {
    pub(crate) fn build(vectors: &[TfIdfVector], dim: usize) -> Columns {
        let mut cols = vec![Vec::new(); dim];
        for (row, v) in vectors.iter().enumerate() {
            for &(idx, val) in v.entries() {
                if (idx as usize) < dim {
                    cols[idx as usize].push((row as u32, val));
                }
            }
        }
        Columns { cols }
    }
}

struct Grower<'a> {
    columns: &'a Columns,
    vectors: &'a [TfIdfVector],
    labels: &'a [bool],
    /// Bootstrap weight per row; zero means the row is out of this sample.
    weights: &'a [u32],
    opts: TreeOptions,
    dim: usize,
    /// Node marker per row: which pending node the row currently sits in.
    node_of_row: Vec<u32>,
    nodes: Vec<Node>,
}

fn gini(pos: f64, total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let p = pos / total;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

struct BestSplit {
    feature: u32,
    threshold: f64,
    decrease: f64,
}

impl<'a> Grower<'a> {
    /// Weighted (count, positives) of a row set.
    fn totals(&self, rows: &[u32]) -> (f64, f64) {
        let mut w = 0.0;
        let mut pos = 0.0;
        for &r in rows {
            let weight = f64::from(self.weights[r as usize]);
            w += weight;
            if self.labels[r as usize] {
                pos += weight;
            }
        }
        (w, pos)
    }

    fn candidate_features(&self, rng: &mut Option<&mut ChaCha12Rng>) -> Vec<u32> {
        match (self.opts.feature_subsample, rng) {
            (Some(k), Some(rng)) if k < self.dim => {
                // Floyd's sampling without replacement, then sorted for a
                // deterministic scan order
                let mut chosen = std::collections::BTreeSet::new();
                for j in (self.dim - k)..self.dim {
                    let t = rng.random_range(0..=j as u64) as u32;
                    if !chosen.insert(t) {
                        chosen.insert(j as u32);
                    }
                }
                chosen.into_iter().collect()
            }
            _ => (0..self.dim as u32).collect(),
        }
    }

    fn best_split(
        &self,
        node_id: u32,
        node_w: f64,
        node_pos: f64,
        features: &[u32],
    ) -> Option<BestSplit> {
        let parent_gini = gini(node_pos, node_w);
        let mut best: Option<BestSplit> = None;
        let mut groups: Vec<(f64, f64, f64)> = Vec::new(); // value, weight, pos

        for &f in features {
            // nonzero entries of this node, sorted by value
            groups.clear();
            let mut nz_w = 0.0;
            let mut nz_pos = 0.0;
            let mut entries: Vec<(f64, u32)> = self.columns.cols[f as usize]
                .iter()
                .filter(|(row, _)| {
                    self.node_of_row[*row as usize] == node_id && self.weights[*row as usize] > 0
                })
                .map(|&(row, val)| (val, row))
                .collect();
            if entries.is_empty() {
                continue;
            }
            entries.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            for (val, row) in entries {
                let w = f64::from(self.weights[row as usize]);
                let p = if self.labels[row as usize] { w } else { 0.0 };
                nz_w += w;
                nz_pos += p;
                match groups.last_mut() {
                    Some(g) if g.0 == val => {
                        g.1 += w;
                        g.2 += p;
                    }
                    _ => groups.push((val, w, p)),
                }
            }
            // implicit zero group for rows without an entry in this column
            let zero_w = node_w - nz_w;
            let zero_pos = node_pos - nz_pos;
            let mut scan: Vec<(f64, f64, f64)> = Vec::with_capacity(groups.len() + 1);
            if zero_w > 0.0 {
                scan.push((0.0, zero_w, zero_pos));
            }
            for &g in &groups {
                match scan.last_mut() {
                    Some(prev) if prev.0 == g.0 => {
                        prev.1 += g.1;
                        prev.2 += g.2;
                    }
                    _ => scan.push(g),
                }
            }
            if scan.len() < 2 {
                continue;
            }
            let mut left_w = 0.0;
            let mut left_pos = 0.0;
            for window in scan.windows(2) {
                let (value, w, p) = window[0];
                let next_value = window[1].0;
                left_w += w;
                left_pos += p;
                let right_w = node_w - left_w;
                let right_pos = node_pos - left_pos;
                let weighted =
                    (left_w * gini(left_pos, left_w) + right_w * gini(right_pos, right_w)) / node_w;
                let decrease = parent_gini - weighted;
                let threshold = value + (next_value - value) / 2.0;
                if decrease > 1e-12 && best.as_ref().is_none_or(|b| decrease > b.decrease) {
                    best = Some(BestSplit {
                        feature: f,
                        threshold,
                        decrease,
                    });
                }
            }
        }
        best
    }

    fn grow_node(&mut self, rows: Vec<u32>, rng: &mut Option<&mut ChaCha12Rng>) -> u32 {
        let (node_w, node_pos) = self.totals(&rows);
        let node_id = self.nodes.len() as u32;
        self.nodes.push(Node::Leaf { score: 0.0 });
        for &r in &rows {
            self.node_of_row[r as usize] = node_id;
        }

        let score = if node_w > 0.0 { node_pos / node_w } else { 0.5 };
        let pure = node_pos == 0.0 || node_pos == node_w;
        if pure || (node_w as usize) < self.opts.min_samples_split {
            self.nodes[node_id as usize] = Node::Leaf { score };
            return node_id;
        }
        let features = self.candidate_features(rng);
        let Some(split) = self.best_split(node_id, node_w, node_pos, &features) else {
            self.nodes[node_id as usize] = Node::Leaf { score };
            return node_id;
        };

        let (mut left_rows, mut right_rows) = (Vec::new(), Vec::new());
        for &r in &rows {
            if self.vectors[r as usize].get(split.feature) > split.threshold {
                right_rows.push(r);
            } else {
                left_rows.push(r);
            }
        }
        debug_assert!(!left_rows.is_empty() && !right_rows.is_empty());
        let left = self.grow_node(left_rows, rng);
        let right = self.grow_node(right_rows, rng);
        self.nodes[node_id as usize] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        node_id
    }
}

/// Grows one tree over the weighted row set. `weights[r] == 0` excludes a
/// row; larger weights replicate it (bootstrap counts).
pub(crate) fn grow_weighted(
    columns: &Columns,
    vectors: &[TfIdfVector],
    labels: &[bool],
    weights: &[u32],
    dim: usize,
    opts: TreeOptions,
    mut rng: Option<&mut ChaCha12Rng>,
) -> Tree {
    let rows: Vec<u32> = (0..vectors.len() as u32)
        .filter(|&r| weights[r as usize] > 0)
        .collect();
    let mut grower = Grower {
        columns,
        vectors,
        labels,
        weights,
        opts,
        dim,
        node_of_row: vec![u32::MAX; vectors.len()],
        nodes: Vec::new(),
    };
    if rows.is_empty() {
        grower.nodes.push(Node::Leaf { score: 0.5 });
    } else {
        grower.grow_node(rows, &mut rng);
    }
    Tree {
        nodes: grower.nodes,
    }
}

/// Trains a plain decision tree (every row once, all features candidate).
pub fn train(vectors: &[TfIdfVector], labels: &[bool], dim: usize, opts: TreeOptions) -> Tree {
    let columns = Columns::build(vectors, dim);
    let weights = vec![1u32; vectors.len()];
    grow_weighted(&columns, vectors, labels, &weights, dim, opts, None)
}

impl Tree {
    pub fn score(&self, v: &TfIdfVector) -> f64 {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                Node::Leaf { score } => return *score,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if v.get(*feature) > *threshold {
                        *right as usize
                    } else {
                        *left as usize
                    };
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Leaf depth-first traversal of (node, gini-at-train-time) is not
    /// stored; expose nodes for invariant checks instead.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }
}
