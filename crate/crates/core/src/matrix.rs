//! Dense column-major storage, unit-norm dictionaries and index sets.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::tolerances;

/// Inner product with four independent accumulators so the compiler can
/// keep several lanes busy.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let tail_a = chunks_a.remainder();
    let tail_b = chunks_b.remainder();
    for (x, y) in chunks_a.zip(chunks_b) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in tail_a.iter().zip(tail_b) {
        s += x * y;
    }
    s
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Coherence `|⟨v, w⟩| / (‖v‖‖w‖)`.
pub fn coherence(v: &[f64], w: &[f64]) -> Result<f64> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: w.len(),
        });
    }
    let nv = norm2(v);
    let nw = norm2(w);
    if nv < tolerances::NORM || nw < tolerances::NORM {
        return Err(Error::ZeroVector);
    }
    Ok((dot(v, w).abs() / (nv * nw)).min(1.0))
}

/// Returns `v / ‖v‖₂`.
pub fn unit(v: &[f64]) -> Result<Vec<f64>> {
    let n = norm2(v);
    if n < tolerances::NORM {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / n).collect())
}

/// A dense `rows × cols` matrix of finite reals in column-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidParameter("matrix must have at least one row"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        let mut out = Vec::with_capacity(data.len());
        for j in 0..cols {
            for i in 0..rows {
                out.push(data[i * cols + j]);
            }
        }
        Self::from_column_major(rows, cols, out)
    }

    pub fn from_columns<'c, I>(rows: usize, columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'c [f64]>,
    {
        let mut data = Vec::new();
        let mut cols = 0;
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            data.extend_from_slice(c);
            cols += 1;
        }
        Self::from_column_major(rows, cols, data)
    }

    /// # Panics
    /// If `rows == 0`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0, "matrix must have at least one row");
        Self {
            rows,
            cols,
            data: alloc::vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.rows)
    }

    /// `Aᵀ v`.
    pub fn transpose_mul(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        self.columns().map(|c| dot(c, v)).collect()
    }

    /// `A c`. Zero entries of `c` are skipped, which makes this cheap for
    /// sparse coefficient vectors.
    pub fn mul(&self, c: &[f64]) -> Vec<f64> {
        assert_eq!(c.len(), self.cols);
        let mut out = alloc::vec![0.0; self.rows];
        for (j, &cj) in c.iter().enumerate() {
            if cj != 0.0 {
                axpy(cj, self.column(j), &mut out);
            }
        }
        out
    }

    pub fn select_columns(&self, indices: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.rows);
        for &j in indices {
            data.extend_from_slice(self.column(j));
        }
        DenseMatrix {
            rows: self.rows,
            cols: indices.len(),
            data,
        }
    }

    pub fn without_column(&self, skip: usize) -> DenseMatrix {
        assert!(skip < self.cols);
        let mut data = Vec::with_capacity((self.cols - 1) * self.rows);
        data.extend_from_slice(&self.data[..skip * self.rows]);
        data.extend_from_slice(&self.data[(skip + 1) * self.rows..]);
        DenseMatrix {
            rows: self.rows,
            cols: self.cols - 1,
            data,
        }
    }

    /// `A Aᵀ` as a `rows × rows` column-major buffer.
    pub fn outer_gram(&self) -> Vec<f64> {
        let d = self.rows;
        let mut g = alloc::vec![0.0; d * d];
        for c in self.columns() {
            for j in 0..d {
                let cj = c[j];
                if cj == 0.0 {
                    continue;
                }
                // lower triangle only, mirrored below
                for i in j..d {
                    g[j * d + i] += c[i] * cj;
                }
            }
        }
        for j in 0..d {
            for i in 0..j {
                g[j * d + i] = g[i * d + j];
            }
        }
        g
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.columns().map(norm2).collect()
    }
}

/// A matrix whose columns (atoms) all have unit ℓ2 norm.
#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary {
    matrix: DenseMatrix,
    normalized: bool,
}

/// Scales every column to unit ℓ2 norm.
pub fn normalize_columns(m: DenseMatrix) -> Result<Dictionary> {
    let DenseMatrix {
        rows,
        cols,
        mut data,
    } = m;
    for (j, c) in data.chunks_exact_mut(rows).enumerate() {
        let n = norm2(c);
        if n < tolerances::NORM {
            return Err(Error::ZeroColumn(j));
        }
        for x in c.iter_mut() {
            *x /= n;
        }
    }
    Ok(Dictionary {
        matrix: DenseMatrix { rows, cols, data },
        normalized: true,
    })
}

impl Dictionary {
    /// Wraps a matrix whose columns are already unit norm.
    pub fn from_unit_columns(m: DenseMatrix) -> Result<Self> {
        for (j, c) in m.columns().enumerate() {
            let n = norm2(c);
            if n < tolerances::NORM {
                return Err(Error::ZeroColumn(j));
            }
            if (n - 1.0).abs() > tolerances::NORM {
                return Err(Error::InvalidParameter("dictionary columns must have unit norm"));
            }
        }
        Ok(Self {
            matrix: m,
            normalized: false,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// Whether the columns were rescaled by [`normalize_columns`].
    pub fn was_normalized(&self) -> bool {
        self.normalized
    }

    /// Ambient dimension `D`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    /// Number of atoms `N`.
    #[inline]
    pub fn len(&self) -> usize {
        self.matrix.cols
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.matrix.cols == 0
    }

    #[inline]
    pub fn atom(&self, j: usize) -> &[f64] {
        self.matrix.column(j)
    }

    /// `Aᵀ v`, the correlation of every atom with `v`.
    pub fn correlations(&self, v: &[f64]) -> Vec<f64> {
        self.matrix.transpose_mul(v)
    }

    /// `A c`.
    pub fn combine(&self, c: &[f64]) -> Vec<f64> {
        self.matrix.mul(c)
    }

    pub fn subset(&self, indices: &IndexSet) -> Dictionary {
        Dictionary {
            matrix: self.matrix.select_columns(indices.as_slice()),
            normalized: self.normalized,
        }
    }

    pub fn select(&self, indices: &[usize]) -> Dictionary {
        Dictionary {
            matrix: self.matrix.select_columns(indices),
            normalized: self.normalized,
        }
    }

    /// The dictionary with atom `j` removed (the `X₋ⱼ` of self-expression).
    pub fn without_atom(&self, j: usize) -> Dictionary {
        Dictionary {
            matrix: self.matrix.without_column(j),
            normalized: self.normalized,
        }
    }

    /// Appends the atoms of `other` after the atoms of `self`.
    pub fn append(&self, other: &Dictionary) -> Result<Dictionary> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut data = self.matrix.data.clone();
        data.extend_from_slice(&other.matrix.data);
        Ok(Dictionary {
            matrix: DenseMatrix {
                rows: self.dim(),
                cols: self.len() + other.len(),
                data,
            },
            normalized: self.normalized || other.normalized,
        })
    }
}

impl Deref for Dictionary {
    type Target = DenseMatrix;

    fn deref(&self) -> &DenseMatrix {
        &self.matrix
    }
}

/// Sorted, deduplicated column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        let mut it = other.0.iter().peekable();
        'outer: for &x in &self.0 {
            while let Some(&&y) = it.peek() {
                if y < x {
                    it.next();
                } else if y == x {
                    it.next();
                    continue 'outer;
                } else {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        IndexSet(out)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn identity_is_already_normalized() {
        let d = normalize_columns(DenseMatrix::identity(3)).unwrap();
        assert_eq!(d.matrix(), &DenseMatrix::identity(3));
        assert!(d.was_normalized());
    }

    #[test]
    fn three_four_five() {
        let m = DenseMatrix::from_column_major(2, 1, vec![3.0, 4.0]).unwrap();
        let d = normalize_columns(m).unwrap();
        assert!((d.atom(0)[0] - 0.6).abs() < 1e-15);
        assert!((d.atom(0)[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_column_is_rejected() {
        let m = DenseMatrix::from_column_major(2, 3, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(normalize_columns(m), Err(Error::ZeroColumn(1))));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let m = DenseMatrix::from_column_major(1, 2, vec![1.0, f64::NAN]);
        assert!(matches!(m, Err(Error::NonFinite)));
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(coherence(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(coherence(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let c = coherence(&[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((c - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(matches!(coherence(&[0.0, 0.0], &[1.0, 1.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn row_major_round_trip() {
        let m = DenseMatrix::from_row_major(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.column(1), &[2.0, 5.0]);
        assert_eq!(m.get(1, 2), 6.0);
        assert_eq!(m.transpose_mul(&[1.0, 1.0]), vec![5.0, 7.0, 9.0]);
        assert_eq!(m.mul(&[1.0, 0.0, 1.0]), vec![4.0, 10.0]);
    }

    #[test]
    fn outer_gram_matches_definition() {
        let m = DenseMatrix::from_row_major(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let g = m.outer_gram();
        assert_eq!(g, vec![14.0, 32.0, 32.0, 77.0]);
    }

    #[test]
    fn index_set_operations() {
        let a = IndexSet::from_unsorted(vec![5, 1, 3, 3]);
        assert_eq!(a.as_slice(), &[1, 3, 5]);
        let b = IndexSet::from_unsorted(vec![0, 1, 2, 3, 4, 5]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(IndexSet::new().is_subset_of(&a));
        assert_eq!(a.union(&IndexSet::from_unsorted(vec![2, 5, 9])).as_slice(), &[1, 2, 3, 5, 9]);
    }

    fn matrix_strategy() -> impl Strategy<Value = DenseMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-10.0f64..10.0, r * c)
                .prop_filter("columns must be nonzero", move |v| {
                    v.chunks(r).all(|col| norm2(col) > 1e-3)
                })
                .prop_map(move |v| DenseMatrix::from_column_major(r, c, v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(m in matrix_strategy()) {
            let once = normalize_columns(m).unwrap();
            let twice = normalize_columns(once.matrix().clone()).unwrap();
            for (a, b) in once.as_slice().iter().zip(twice.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-15);
            }
            for c in once.columns() {
                prop_assert!((norm2(c) - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn coherence_is_symmetric_and_scale_invariant(
            v in proptest::collection::vec(-5.0f64..5.0, 4),
            w in proptest::collection::vec(-5.0f64..5.0, 4),
            alpha in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
            beta in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        ) {
            prop_assume!(norm2(&v) > 1e-3 && norm2(&w) > 1e-3);
            let base = coherence(&v, &w).unwrap();
            let swapped = coherence(&w, &v).unwrap();
            let sv: Vec<f64> = v.iter().map(|x| alpha * x).collect();
            let sw: Vec<f64> = w.iter().map(|x| beta * x).collect();
            let scaled = coherence(&sv, &sw).unwrap();
            prop_assert!((base - swapped).abs() <= 1e-12);
            prop_assert!((base - scaled).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&base));
        }
    }
}
