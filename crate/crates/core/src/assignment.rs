//! Maximum-weight bipartite assignment of a score matrix.
//!
//! `kuhn_munkres` runs the O(n^3) Hungarian algorithm (shortest augmenting
//! paths over dual potentials) on the negated weights, padding rectangular
//! inputs to square with zero-weight dummy cells. Among equal-weight optima
//! it prefers the lexicographically smallest pair set, found by a
//! refinement pass over the tight-edge subgraph, so results are stable
//! across runs and platforms.
//!
//! `brute_force_assignment` enumerates every maximal injection and is the
//! independent oracle the implementation is checked against.

use thiserror::Error;

/// Absolute tolerance for detecting equal-weight alternatives.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest `min(rows, cols)` accepted by the brute-force oracle.
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum AssignmentError {
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("matrix rows have differing lengths")]
    RaggedMatrix,
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("brute-force enumeration requires min(rows, cols) <= {limit}")]
    MatrixTooLarge { limit: usize },
}

/// A matching of rows to columns with its total weight.
///
/// Each row and each column appears at most once; the matching has
/// cardinality `min(m, n)` and pairs are sorted by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pairs: Vec<(usize, usize)>,
    total_weight: f64,
}

impl Assignment {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }
}

fn check_matrix(values: &[Vec<f64>]) -> Result<(usize, usize), AssignmentError> {
    let m = values.len();
    if m == 0 {
        return Err(AssignmentError::EmptyMatrix);
    }
    let n = values[0].len();
    if n == 0 {
        return Err(AssignmentError::EmptyMatrix);
    }
    for (i, row) in values.iter().enumerate() {
        if row.len() != n {
            return Err(AssignmentError::RaggedMatrix);
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(AssignmentError::NonFiniteValue { row: i, col: j });
            }
        }
    }
    Ok((m, n))
}

/// Maximum-weight matching of cardinality `min(m, n)`.
pub fn kuhn_munkres(values: &[Vec<f64>]) -> Result<Assignment, AssignmentError> {
    let (m, n) = check_matrix(values)?;
    let size = m.max(n);

    // Maximize by minimizing negated weights; dummy rows/columns cost 0,
    // the same as a weight-0 cell.
    let mut cost = vec![vec![0.0f64; size]; size];
    for (i, row) in values.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            cost[i][j] = -w;
        }
    }

    let (mut row_to_col, mut col_to_row, u, v) = hungarian_min(&cost);
    refine_ties(&cost, &u, &v, m, &mut row_to_col, &mut col_to_row);

    let mut pairs = Vec::with_capacity(m.min(n));
    for (i, &j) in row_to_col.iter().enumerate().take(m) {
        if j < n {
            pairs.push((i, j));
        }
    }
    let total_weight = pairs.iter().map(|&(i, j)| values[i][j]).sum();
    Ok(Assignment {
        pairs,
        total_weight,
    })
}

/// Minimum-cost perfect matching on a square matrix via shortest
/// augmenting paths. Returns the matching both ways plus the final dual
/// potentials, which satisfy `u[i] + v[j] <= cost[i][j]` with equality on
/// matched pairs.
fn hungarian_min(cost: &[Vec<f64>]) -> (Vec<usize>, Vec<usize>, Vec<f64>, Vec<f64>) {
    let n = cost.len();
    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![usize::MAX; n];
    let mut col_to_row = vec![usize::MAX; n];
    for j in 1..=n {
        let i = matched_row[j];
        row_to_col[i - 1] = j - 1;
        col_to_row[j - 1] = i - 1;
    }
    (row_to_col, col_to_row, u[1..].to_vec(), v[1..].to_vec())
}

/// Rewrite the optimal matching into the lexicographically smallest one.
///
/// By complementary slackness every optimal matching lives inside the
/// tight-edge subgraph (`cost - u - v` within tolerance of zero). Rows are
/// fixed in ascending order; each tries to trade down to its smallest
/// feasible tight column, re-seating the displaced row through an
/// alternating path.
fn refine_ties(
    cost: &[Vec<f64>],
    u: &[f64],
    v: &[f64],
    real_rows: usize,
    row_to_col: &mut [usize],
    col_to_row: &mut [usize],
) {
    let n = cost.len();
    let mut fixed = vec![false; n];
    for i in 0..real_rows.min(n) {
        let current = row_to_col[i];
        for j in 0..current {
            if fixed[j] || cost[i][j] - u[i] - v[j] > TIE_TOLERANCE {
                continue;
            }
            let displaced = col_to_row[j];
            let mut visited = vec![false; n];
            visited[j] = true;
            if reseat(cost, u, v, &fixed, &mut visited, row_to_col, col_to_row, displaced, current) {
                row_to_col[i] = j;
                col_to_row[j] = i;
                break;
            }
        }
        fixed[row_to_col[i]] = true;
    }
}

/// Augmenting-path search: move `row` onto some tight column, chasing
/// displaced rows until one lands on `target_col`. Mutates the matching
/// only on success.
#[allow(clippy::too_many_arguments)]
fn reseat(
    cost: &[Vec<f64>],
    u: &[f64],
    v: &[f64],
    fixed: &[bool],
    visited: &mut [bool],
    row_to_col: &mut [usize],
    col_to_row: &mut [usize],
    row: usize,
    target_col: usize,
) -> bool {
    let n = cost.len();
    for j in 0..n {
        if visited[j] || fixed[j] || cost[row][j] - u[row] - v[j] > TIE_TOLERANCE {
            continue;
        }
        visited[j] = true;
        if j == target_col {
            row_to_col[row] = j;
            col_to_row[j] = row;
            return true;
        }
        let next = col_to_row[j];
        if reseat(cost, u, v, fixed, visited, row_to_col, col_to_row, next, target_col) {
            row_to_col[row] = j;
            col_to_row[j] = row;
            return true;
        }
    }
    false
}

/// Exhaustive oracle: enumerate every matching of cardinality `min(m, n)`
/// in lexicographic pair order and keep the first maximum-weight one.
pub fn brute_force_assignment(values: &[Vec<f64>]) -> Result<Assignment, AssignmentError> {
    let (m, n) = check_matrix(values)?;
    if m.min(n) > BRUTE_FORCE_LIMIT {
        return Err(AssignmentError::MatrixTooLarge {
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut used = vec![false; n];
    let mut current: Vec<(usize, usize)> = Vec::new();
    let mut best: Option<(Vec<(usize, usize)>, f64)> = None;
    enumerate(
        values,
        0,
        m.saturating_sub(n),
        &mut used,
        &mut current,
        0.0,
        &mut best,
    );
    let (pairs, total_weight) = best.expect("at least one complete matching exists");
    Ok(Assignment {
        pairs,
        total_weight,
    })
}

fn enumerate(
    values: &[Vec<f64>],
    row: usize,
    skips_left: usize,
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    weight: f64,
    best: &mut Option<(Vec<(usize, usize)>, f64)>,
) {
    if row == values.len() {
        match best {
            None => *best = Some((current.clone(), weight)),
            Some((_, best_weight)) => {
                if weight > *best_weight + TIE_TOLERANCE {
                    *best = Some((current.clone(), weight));
                }
            }
        }
        return;
    }
    for j in 0..used.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        current.push((row, j));
        enumerate(
            values,
            row + 1,
            skips_left,
            used,
            current,
            weight + values[row][j],
            best,
        );
        current.pop();
        used[j] = false;
    }
    // Leaving a row unmatched is only possible when rows outnumber columns,
    // and is lexicographically worse than matching it anywhere.
    if skips_left > 0 {
        enumerate(values, row + 1, skips_left - 1, used, current, weight, best);
    }
}
