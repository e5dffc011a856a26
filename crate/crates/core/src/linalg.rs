//! Thin wrappers over nalgebra for the few dense factorizations we need.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::matrix::{dot, norm2, Dictionary};

/// Solves `M x = rhs` for symmetric positive definite `M` (column-major,
/// `n × n`). `None` if the Cholesky factorization breaks down.
pub(crate) fn cholesky_solve(n: usize, m: Vec<f64>, rhs: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(m.len(), n * n);
    let mat = DMatrix::from_vec(n, n, m);
    let chol = mat.cholesky()?;
    let x = chol.solve(&DVector::from_column_slice(rhs));
    if x.iter().all(|v| v.is_finite()) {
        Some(x.as_slice().to_vec())
    } else {
        None
    }
}

/// Eigen-decomposition of a symmetric matrix, sorted by ascending
/// eigenvalue. Eigenvectors are returned column-major (`n × n`).
pub(crate) fn symmetric_eigen(n: usize, m: Vec<f64>) -> Option<(Vec<f64>, Vec<f64>)> {
    let mat = DMatrix::from_vec(n, n, m);
    let eig = SymmetricEigen::try_new(mat, f64::EPSILON, 0)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(eig.eigenvectors.column(i).as_slice());
    }
    Some((values, vectors))
}

/// Orthonormal basis (`rows × cols`, column-major) of the column span of a
/// full-rank tall matrix.
pub(crate) fn thin_q(rows: usize, cols: usize, data: Vec<f64>) -> Vec<f64> {
    let mat = DMatrix::from_vec(rows, cols, data);
    let q = mat.qr().q();
    q.as_slice().to_vec()
}

/// Largest eigenvalue of `AᵀA` (the squared spectral norm of `A`) by power
/// iteration. Converges from below; callers add a safety margin.
pub(crate) fn spectral_norm_sq(dict: &Dictionary) -> f64 {
    let n = dict.len();
    if n == 0 {
        return 0.0;
    }
    // deterministic, generic start vector
    let mut v: Vec<f64> = (0..n)
        .map(|j| 1.0 + 0.5 * libm::sin(1.0 + j as f64 * 0.754_877_666))
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut estimate = 0.0;
    for _ in 0..1000 {
        let av = dict.combine(&v);
        let w = dict.correlations(&av);
        let next = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / nw).collect();
        if (next - estimate).abs() <= 1e-7 * next {
            return next.max(nw);
        }
        estimate = next;
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{normalize_columns, DenseMatrix};
    use alloc::vec;

    #[test]
    fn cholesky_solves_spd_system() {
        let x = cholesky_solve(2, vec![4.0, 1.0, 1.0, 3.0], &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        assert!(cholesky_solve(2, vec![1.0, 2.0, 2.0, 1.0], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn eigenvalues_sorted() {
        let (vals, vecs) = symmetric_eigen(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        assert!((vecs[0].abs() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_on_known_matrix() {
        // columns e1, e1, e2 → AᵀA has eigenvalues {2, 1, 0}
        let m = DenseMatrix::from_row_major(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let d = normalize_columns(m).unwrap();
        assert!((spectral_norm_sq(&d) - 2.0).abs() < 1e-6);
    }
}
