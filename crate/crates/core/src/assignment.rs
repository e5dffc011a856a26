//! Linear assignment (Hungarian method with potentials, `O(n³)`).

use alloc::vec;
use alloc::vec::Vec;

/// Minimum-cost perfect matching on a square `n × n` cost matrix (row-major).
/// Returns `assign[row] = column`.
pub fn min_cost_assignment(n: usize, cost: &[f64]) -> Vec<usize> {
    assert_eq!(cost.len(), n * n, "cost matrix must be n × n");
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials formulation; index 0 is a sentinel column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[owner[j] - 1] = j - 1;
    }
    assign
}

/// Maximum-weight matching on a rectangular `rows × cols` weight matrix
/// (row-major), padded to square with zeros. Returns the matched total.
pub fn max_weight_matching(rows: usize, cols: usize, weight: &[f64]) -> f64 {
    assert_eq!(weight.len(), rows * cols, "weight matrix shape mismatch");
    let n = rows.max(cols);
    let mut cost = vec![0.0; n * n];
    for i in 0..rows {
        for j in 0..cols {
            cost[i * n + j] = -weight[i * cols + j];
        }
    }
    let assign = min_cost_assignment(n, &cost);
    assign
        .iter()
        .enumerate()
        .filter(|&(i, &j)| i < rows && j < cols)
        .map(|(i, &j)| weight[i * cols + j])
        .sum()
}
