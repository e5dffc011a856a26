//! Self-expressive coefficients and the affinity graph.
//!
//! Every point `x_j` is written as an elastic net combination of the other
//! points, with `γ_j = α·γ₀(x_j)` where `γ₀` is the smallest `γ` giving a
//! nonzero solution. From the optimality conditions, `c* = 0` iff
//! `γ‖Aᵀb‖∞ ≤ λ`, so `γ₀ = λ / ‖Aᵀb‖∞`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{inf_norm, DenseMatrix, Dictionary};
use crate::orgen::{orgen_solve_with_gram, OrgenConfig};
use crate::problem::ElasticNetProblem;
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnscConfig {
    pub lambda: f64,
    /// `γ = α·γ₀`; must exceed one.
    pub alpha: f64,
    pub orgen: OrgenConfig,
    /// Advisory for drivers that can map columns in parallel; the result
    /// does not depend on it.
    pub parallel_columns: bool,
}

impl EnscConfig {
    /// Clustering preset for the given `λ` and `α`.
    pub fn new(lambda: f64, alpha: f64) -> Self {
        Self {
            lambda,
            alpha,
            orgen: OrgenConfig::clustering(),
            parallel_columns: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidParameter("lambda must lie in (0, 1]"));
        }
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter("alpha must exceed 1"));
        }
        self.orgen.validate()
    }
}

/// Smallest `γ` for which the solution is nonzero: `λ / ‖Aᵀb‖∞`.
pub fn gamma_zero(b: &[f64], dict: &Dictionary, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Err(Error::LambdaZero);
    }
    if dict.is_empty() {
        return Err(Error::InvalidParameter("dictionary is empty"));
    }
    if b.len() != dict.dim() {
        return Err(Error::DimensionMismatch {
            expected: dict.dim(),
            found: b.len(),
        });
    }
    let m = inf_norm(&dict.correlations(b));
    if m < tolerances::NORM {
        return Err(Error::OrthogonalPoint);
    }
    Ok(lambda / m)
}

/// Nonzero entries of one coefficient column, indices ascending.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseColumn {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseColumn {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        match self.indices.binary_search(&i) {
            Ok(k) => self.values[k],
            Err(_) => 0.0,
        }
    }
}

/// Solution for one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnResult {
    /// Coefficients indexed by position in the full data set.
    pub column: SparseColumn,
    pub gamma0: f64,
    pub gamma: f64,
    pub outer_iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnFailure {
    pub column: usize,
    pub code: &'static str,
}

/// The `N × N` coefficient matrix `C` with zero diagonal, stored by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfExpressiveModel {
    pub columns: Vec<SparseColumn>,
    /// `γ₀` per column; `NaN` where the column failed.
    pub gamma0: Vec<f64>,
    pub gammas: Vec<f64>,
    pub support_sizes: Vec<usize>,
    pub failures: Vec<ColumnFailure>,
    pub lambda: f64,
    pub alpha: f64,
}

impl SelfExpressiveModel {
    /// Collects per-column outcomes, in column order. Failed columns become
    /// empty columns and are listed in `failures`.
    pub fn assemble(cfg: &EnscConfig, results: Vec<Result<ColumnResult>>) -> Self {
        let n = results.len();
        let mut model = Self {
            columns: Vec::with_capacity(n),
            gamma0: Vec::with_capacity(n),
            gammas: Vec::with_capacity(n),
            support_sizes: Vec::with_capacity(n),
            failures: Vec::new(),
            lambda: cfg.lambda,
            alpha: cfg.alpha,
        };
        for (j, r) in results.into_iter().enumerate() {
            match r {
                Ok(c) => {
                    model.support_sizes.push(c.column.nnz());
                    model.gamma0.push(c.gamma0);
                    model.gammas.push(c.gamma);
                    model.columns.push(c.column);
                }
                Err(e) => {
                    model.failures.push(ColumnFailure {
                        column: j,
                        code: e.code(),
                    });
                    model.support_sizes.push(0);
                    model.gamma0.push(f64::NAN);
                    model.gammas.push(f64::NAN);
                    model.columns.push(SparseColumn::default());
                }
            }
        }
        model
    }

    pub fn n_points(&self) -> usize {
        self.columns.len()
    }

    /// `C[i, j]`: weight of point `i` in the representation of point `j`.
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.columns[j].get(i)
    }

    pub fn average_support_size(&self) -> f64 {
        if self.columns.is_empty() {
            return 0.0;
        }
        self.support_sizes.iter().sum::<usize>() as f64 / self.columns.len() as f64
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n_points();
        let mut data = alloc::vec![0.0; n * n];
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &v) in col.indices.iter().zip(&col.values) {
                data[j * n + i] = v;
            }
        }
        DenseMatrix::from_column_major(n.max(1), n, data).expect("finite coefficients")
    }
}

/// Solves for point `j` against all other points. `gram` is `XXᵀ` of the
/// full data; the contribution of `x_j` is removed here.
pub fn self_expressive_column(
    data: &Dictionary,
    gram: &[f64],
    j: usize,
    cfg: &EnscConfig,
) -> Result<ColumnResult> {
    let x = data.atom(j);
    let others = data.without_atom(j);
    let gamma0 = gamma_zero(x, &others, cfg.lambda)?;
    let gamma = cfg.alpha * gamma0;
    let d = data.dim();
    let mut local_gram = gram.to_vec();
    for a in 0..d {
        for b in 0..d {
            local_gram[a * d + b] -= x[a] * x[b];
        }
    }
    let p = ElasticNetProblem::new(x, &others, cfg.lambda, gamma)?;
    let (sol, trace) = orgen_solve_with_gram(&p, &cfg.orgen, Some(&local_gram))?;
    let mut column = SparseColumn::default();
    for k in sol.support.iter() {
        column.indices.push(if k < j { k } else { k + 1 });
        column.values.push(sol.coefficients[k]);
    }
    Ok(ColumnResult {
        column,
        gamma0,
        gamma,
        outer_iterations: trace.outer_iterations(),
    })
}

/// Self-expressive coefficients for every column, one after another.
pub fn self_expressive(data: &Dictionary, cfg: &EnscConfig) -> Result<SelfExpressiveModel> {
    cfg.validate()?;
    if data.len() < 2 {
        return Err(Error::InvalidParameter("self-expression needs at least two points"));
    }
    let gram = data.outer_gram();
    let results = (0..data.len())
        .map(|j| self_expressive_column(data, &gram, j, cfg))
        .collect();
    Ok(SelfExpressiveModel::assemble(cfg, results))
}

/// Symmetric nonnegative affinity as sorted `(i, j, w)` triplets with
/// `i ≠ j` and `w > 0`; both `(i, j)` and `(j, i)` are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Affinity {
    n: usize,
    triplets: Vec<(usize, usize, f64)>,
}

impl Affinity {
    /// Canonicalizes arbitrary triplets: sums duplicates, drops the
    /// diagonal and zeros, sorts. Rejects negative or non-finite weights
    /// and asymmetric input.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(i, j, w) in &triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter("affinity index out of range"));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter("affinity weights must be finite and nonnegative"));
            }
        }
        triplets.retain(|&(i, j, w)| i != j && w > 0.0);
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for t in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => last.2 += t.2,
                _ => merged.push(t),
            }
        }
        let a = Self { n, triplets: merged };
        if !a.is_symmetric() {
            return Err(Error::InvalidParameter("affinity must be symmetric"));
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triplets(&self) -> &[(usize, usize, f64)] {
        &self.triplets
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self
            .triplets
            .binary_search_by(|t| (t.0, t.1).cmp(&(i, j)))
        {
            Ok(k) => self.triplets[k].2,
            Err(_) => 0.0,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.triplets.iter().all(|&(i, j, w)| self.get(j, i) == w)
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = alloc::vec![0.0; self.n];
        for &(i, _, w) in &self.triplets {
            d[i] += w;
        }
        d
    }

    /// Row-major (equivalently column-major) dense `n × n` buffer.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut m = alloc::vec![0.0; self.n * self.n];
        for &(i, j, w) in &self.triplets {
            m[i * self.n + j] = w;
        }
        m
    }
}

/// `W = |C| + |C|ᵀ` with zero diagonal.
pub fn build_affinity(model: &SelfExpressiveModel) -> Affinity {
    let mut entries = Vec::new();
    for (j, col) in model.columns.iter().enumerate() {
        for (&i, &v) in col.indices.iter().zip(&col.values) {
            if i != j && v != 0.0 {
                entries.push((i, j, v.abs()));
                entries.push((j, i, v.abs()));
            }
        }
    }
    Affinity::from_triplets(model.n_points(), entries).expect("symmetric by construction")
}
