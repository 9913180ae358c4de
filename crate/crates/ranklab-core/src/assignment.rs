//! Exact solver for the square assignment problem (minimum-cost perfect
//! matching on a bipartite graph), used to turn expected-rank cost tables
//! into a single best ranking.

use crate::{Error, Result};

/// Finds the column assignment minimizing `Σ_i cost[i][assign[i]]` over all
/// permutations, in O(n³) by shortest augmenting paths with potentials.
/// `cost` must be square with finite entries. Deterministic: equal-cost
/// optima resolve to a fixed choice.
pub(crate) fn solve_assignment(cost: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = cost.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    for row in cost {
        if row.len() != n {
            return Err(Error::Domain("cost matrix must be square".into()));
        }
        if row.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("cost entries must be finite".into()));
        }
    }

    // row/column potentials with a virtual column 0; p[j] = row matched to
    // column j (1-based, 0 = unmatched), way[j] = previous column on the
    // alternating path
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        // augment along the recorded path
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    Ok(assign)
}

// ======================================================================
