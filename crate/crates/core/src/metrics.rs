//! String similarity metrics over normalized labels.
//!
//! Four metrics are selectable per run, each mapping a pair of strings to
//! `[0, 1]` with 1 meaning most similar, so the score matrix can be handed
//! straight to the maximum-weight assignment step. All metrics are
//! symmetric and score 1 on identical inputs.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

/// Default q-gram length.
pub const DEFAULT_QGRAM_SIZE: usize = 2;

/// The selectable similarity metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricId {
    Levenshtein,
    Qgrams,
    SmithWaterman,
    Jaccard,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [
        MetricId::Levenshtein,
        MetricId::Qgrams,
        MetricId::SmithWaterman,
        MetricId::Jaccard,
    ];

    /// Stable name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            MetricId::Levenshtein => "levenshtein",
            MetricId::Qgrams => "qgrams",
            MetricId::SmithWaterman => "smithwaterman",
            MetricId::Jaccard => "jaccard",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for MetricId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.cli_name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown metric {s:?}; expected one of levenshtein, qgrams, smithwaterman, jaccard"
                )
            })
    }
}

/// Minimum number of single-character insertions, deletions and
/// substitutions transforming `x` into `y`. Character-based, symmetric.
pub fn levenshtein_edits(x: &str, y: &str) -> usize {
    let xs: Vec<char> = x.chars().collect();
    let ys: Vec<char> = y.chars().collect();
    if xs.is_empty() {
        return ys.len();
    }
    if ys.is_empty() {
        return xs.len();
    }
    let mut prev: Vec<usize> = (0..=ys.len()).collect();
    let mut cur = vec![0usize; ys.len() + 1];
    for (i, &cx) in xs.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cy) in ys.iter().enumerate() {
            let sub = prev[j] + usize::from(cx != cy);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[ys.len()]
}

/// Edit similarity: `1 - edits / max(len)`, 1 when both strings are empty.
pub fn levenshtein_similarity(x: &str, y: &str) -> f64 {
    let max_len = x.chars().count().max(y.chars().count());
    if max_len == 0 {
        return 1.0;
    }
    1.0 - levenshtein_edits(x, y) as f64 / max_len as f64
}

/// Dice coefficient over the q-gram multisets of the two strings:
/// `2 * shared / (|G_q(x)| + |G_q(y)|)`. Strings shorter than `q`
/// contribute an empty multiset; 1 when both multisets are empty.
pub fn qgram_similarity(x: &str, y: &str, q: usize) -> f64 {
    assert!(q >= 1, "q-gram size must be at least 1");
    let gx = qgrams(x, q);
    let gy = qgrams(y, q);
    let nx: usize = gx.values().sum();
    let ny: usize = gy.values().sum();
    if nx + ny == 0 {
        return 1.0;
    }
    let shared: usize = gx
        .iter()
        .map(|(gram, &cx)| cx.min(gy.get(gram).copied().unwrap_or(0)))
        .sum();
    2.0 * shared as f64 / (nx + ny) as f64
}

fn qgrams(s: &str, q: usize) -> HashMap<Vec<char>, usize> {
    let cs: Vec<char> = s.chars().collect();
    let mut grams = HashMap::new();
    if cs.len() >= q {
        for w in cs.windows(q) {
            *grams.entry(w.to_vec()).or_insert(0) += 1;
        }
    }
    grams
}

/// Best local-alignment score under match +2, mismatch -1, gap -1,
/// normalized by the maximum achievable score `2 * min(len)`. The
/// normalization puts the result in `[0, 1]` with 1 exactly when the
/// shorter string matches contiguously inside the longer one.
pub fn smith_waterman_similarity(x: &str, y: &str) -> f64 {
    let xs: Vec<char> = x.chars().collect();
    let ys: Vec<char> = y.chars().collect();
    let min_len = xs.len().min(ys.len());
    if min_len == 0 {
        return if xs.len() == ys.len() { 1.0 } else { 0.0 };
    }
    const MATCH: i64 = 2;
    const MISMATCH: i64 = -1;
    const GAP: i64 = -1;

    let mut best: i64 = 0;
    let mut prev = vec![0i64; ys.len() + 1];
    let mut cur = vec![0i64; ys.len() + 1];
    for &cx in &xs {
        for (j, &cy) in ys.iter().enumerate() {
            let diag = prev[j] + if cx == cy { MATCH } else { MISMATCH };
            let up = prev[j + 1] + GAP;
            let left = cur[j] + GAP;
            cur[j + 1] = diag.max(up).max(left).max(0);
            best = best.max(cur[j + 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best as f64 / (MATCH * min_len as i64) as f64
}

/// Jaccard coefficient over whitespace-separated tokens:
/// `|T(x) ∩ T(y)| / |T(x) ∪ T(y)|`, 1 when both token sets are empty.
pub fn jaccard_similarity(x: &str, y: &str) -> f64 {
    let tx: HashSet<&str> = x.split_whitespace().collect();
    let ty: HashSet<&str> = y.split_whitespace().collect();
    if tx.is_empty() && ty.is_empty() {
        return 1.0;
    }
    let inter = tx.intersection(&ty).count();
    let union = tx.union(&ty).count();
    inter as f64 / union as f64
}

/// The similarity function for a metric id, with default parameters.
pub fn metric_by_id(id: MetricId) -> fn(&str, &str) -> f64 {
    match id {
        MetricId::Levenshtein => levenshtein_similarity,
        MetricId::Qgrams => |x, y| qgram_similarity(x, y, DEFAULT_QGRAM_SIZE),
        MetricId::SmithWaterman => smith_waterman_similarity,
        MetricId::Jaccard => jaccard_similarity,
    }
}

/// Similarity under `id` with an explicit q-gram size (ignored by the
/// other metrics).
pub fn similarity_with(id: MetricId, x: &str, y: &str, qgram_size: usize) -> f64 {
    match id {
        MetricId::Levenshtein => levenshtein_similarity(x, y),
        MetricId::Qgrams => qgram_similarity(x, y, qgram_size),
        MetricId::SmithWaterman => smith_waterman_similarity(x, y),
        MetricId::Jaccard => jaccard_similarity(x, y),
    }
}
