//! Checks of the geometric guarantees for self-expressive elastic net
//! representations.
//!
//! For a point `x_j` in subspace `ℓ`, let `δ_j` be the oracle point of the
//! problem restricted to the other points of `ℓ`, and
//! `κ_j = max μ(x_k, δ_j)` over those points. Then
//!
//! - `‖δ_j‖₂ ≤ (λκ_j + 1 − λ)/κ_j²`;
//! - the full representation is subspace preserving if every point `x_k`
//!   outside `ℓ` has `μ(x_k, δ_j) ≤ κ_j²/(κ_j + (1−λ)/λ)` (strictly, when
//!   `λ = 1`);
//! - `λ/‖δ_j‖₂ ≥ r²/(r + (1−λ)/λ)` where `r` is the inradius of the
//!   symmetrized convex hull of the in-subspace points.
//!
//! The inradius is not computed exactly. It equals `min_v max_k |⟨x_k, v⟩|`
//! over unit `v` in the subspace, and sampling `v` gives an upper bound.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::elastic_net::{solve_full, InnerSolverConfig};
use crate::ensc::{gamma_zero, SelfExpressiveModel, SparseColumn};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, DenseMatrix, Dictionary};
use crate::orgen::{orgen_solve, OrgenConfig};
use crate::problem::ElasticNetProblem;
use crate::seed::derive_seed;
use crate::synth::{random_subspaces, SubspaceConfig};

/// Three-dimensional example where the ratio `λ/‖δ‖` is not monotone in
/// `λ`: it is larger at `λ = 0.88` than at `λ = 0.95` with `γ = 10`. The
/// entries are given to two decimals; the point and the columns are
/// renormalized.
pub fn remark_example() -> (Vec<f64>, Dictionary) {
    let x = [0.22, 0.72, 0.66];
    let n = norm2(&x);
    let x = x.iter().map(|v| v / n).collect();
    #[rustfmt::skip]
    let rows = [
        -0.55, -0.82, -0.05, 0.22,
         0.22,  0.57,  0.84, 0.78,
        -0.80,  0.00,  0.55, 0.58,
    ];
    let m = DenseMatrix::from_row_major(3, 4, &rows).expect("finite data");
    let dict = crate::matrix::normalize_columns(m).expect("nonzero columns");
    (x, dict)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleDiagnostics {
    pub lambda: f64,
    pub gamma: f64,
    /// Oracle point of the in-subspace problem.
    pub delta: Vec<f64>,
    pub delta_norm: f64,
    /// `λ/‖δ‖₂`: the coherence threshold of the oracle region.
    pub ratio: f64,
    /// Largest coherence of `δ` with an in-subspace atom.
    pub kappa: f64,
    /// `κ²/(κ + (1−λ)/λ)`.
    pub bound_rhs: f64,
    /// `(λκ + 1 − λ)/κ²`.
    pub delta_bound: f64,
}

fn diagnostics_from_delta(delta: Vec<f64>, same: &Dictionary, lambda: f64, gamma: f64) -> Result<OracleDiagnostics> {
    let delta_norm = norm2(&delta);
    if delta_norm == 0.0 {
        return Err(Error::DegenerateOracle);
    }
    let kappa = same
        .correlations(&delta)
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()))
        / delta_norm;
    Ok(OracleDiagnostics {
        lambda,
        gamma,
        ratio: lambda / delta_norm,
        kappa,
        bound_rhs: kappa * kappa / (kappa + (1.0 - lambda) / lambda),
        delta_bound: (lambda * kappa + 1.0 - lambda) / (kappa * kappa),
        delta,
        delta_norm,
    })
}

/// Solves the in-subspace problem to full accuracy and evaluates the
/// quantities entering the bounds.
pub fn oracle_diagnostics(
    x: &[f64],
    same_subspace: &Dictionary,
    lambda: f64,
    gamma: f64,
) -> Result<OracleDiagnostics> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter("lambda must lie in (0, 1]"));
    }
    if same_subspace.is_empty() {
        return Err(Error::InvalidParameter("at least one in-subspace atom is required"));
    }
    let p = ElasticNetProblem::new(x, same_subspace, lambda, gamma)?;
    let sol = solve_full(&p, &InnerSolverConfig::default())?;
    diagnostics_from_delta(sol.oracle_point, same_subspace, lambda, gamma)
}

/// [`oracle_diagnostics`] with the in-subspace problem solved by the exact
/// active-set method instead of the full-dictionary solver. Both return a
/// certified optimum; this one is faster when the subspace holds many
/// points.
pub fn oracle_diagnostics_active_set(
    x: &[f64],
    same_subspace: &Dictionary,
    lambda: f64,
    gamma: f64,
) -> Result<OracleDiagnostics> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter("lambda must lie in (0, 1]"));
    }
    if same_subspace.is_empty() {
        return Err(Error::InvalidParameter("at least one in-subspace atom is required"));
    }
    let p = ElasticNetProblem::new(x, same_subspace, lambda, gamma)?;
    let (sol, _) = orgen_solve(&p, &exact_config(lambda))?;
    diagnostics_from_delta(sol.oracle_point, same_subspace, lambda, gamma)
}

fn exact_config(lambda: f64) -> OrgenConfig {
    OrgenConfig {
        lambda_one_mode: lambda == 1.0,
        ..OrgenConfig::exact()
    }
}

/// `r²/(r + (1−λ)/λ)`, defined as 0 at `λ = 0`.
pub fn theorem2_rhs(inradius: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    inradius * inradius / (inradius + (1.0 - lambda) / lambda)
}

/// Whether `λ/‖δ‖₂ ≥ r²/(r + (1−λ)/λ)` holds (up to `1e-10`) for the given
/// inradius.
pub fn check_theorem2(diag: &OracleDiagnostics, inradius: f64) -> bool {
    diag.ratio >= theorem2_rhs(inradius, diag.lambda) - 1e-10
}

/// `max μ(x_k, δ)` over the given (unit) atoms; 0 for none.
pub fn max_outside_coherence(diag: &OracleDiagnostics, outside: &Dictionary) -> f64 {
    if outside.is_empty() {
        return 0.0;
    }
    outside
        .correlations(&diag.delta)
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()))
        / diag.delta_norm
}

/// Sufficient condition for a subspace-preserving representation:
/// `max μ(x_k, δ) ≤ κ²/(κ + (1−λ)/λ)` over the out-of-subspace atoms, with
/// `<` when `strict`.
pub fn check_theorem4(diag: &OracleDiagnostics, outside: &Dictionary, strict: bool) -> bool {
    if outside.is_empty() {
        return true;
    }
    let lhs = max_outside_coherence(diag, outside);
    if strict {
        lhs < diag.bound_rhs
    } else {
        lhs <= diag.bound_rhs
    }
}

/// `‖δ‖₂ ≤ (λκ + 1 − λ)/κ² + tol`.
pub fn check_delta_bound(diag: &OracleDiagnostics, tol: f64) -> bool {
    diag.delta_norm <= diag.delta_bound + tol
}

/// Monte-Carlo upper bound on the inradius of the symmetrized convex hull
/// of `atoms`, which lie in the span of the orthonormal `basis`:
/// `min_v max_k |⟨a_k, v⟩|` over `samples` random unit `v` in the span.
pub fn inradius_upper_bound(atoms: &Dictionary, basis: &DenseMatrix, samples: usize, seed: u64) -> f64 {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = basis.cols();
    let mut best = f64::INFINITY;
    let mut coords = alloc::vec![0.0; d];
    for _ in 0..samples {
        coords.iter_mut().for_each(|c| *c = rng.sample(StandardNormal));
        let n = norm2(&coords);
        if n == 0.0 {
            continue;
        }
        coords.iter_mut().for_each(|c| *c /= n);
        let v = basis.mul(&coords);
        let m = atoms
            .columns()
            .fold(0.0f64, |m, a| m.max(dot(a, &v).abs()));
        best = best.min(m);
    }
    best
}

/// How columns with an empty support are counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmptySupport {
    /// Left out of the rate (reported separately).
    #[default]
    Exclude,
    AsPreserving,
    AsViolation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreservingRate {
    pub preserving: usize,
    /// Columns entering the rate.
    pub counted: usize,
    pub empty: usize,
    /// `100 · preserving / counted`; 100 when nothing is counted.
    pub percent: f64,
}

/// The support of column `j` lies within the points sharing `j`'s label.
pub fn is_subspace_preserving(column: &SparseColumn, j: usize, truth: &[usize]) -> bool {
    column.indices.iter().all(|&i| truth[i] == truth[j])
}

/// Share of columns whose support stays within their own subspace.
pub fn subspace_preserving_rate(
    model: &SelfExpressiveModel,
    truth: &[usize],
    empty: EmptySupport,
) -> Result<PreservingRate> {
    if truth.len() != model.n_points() {
        return Err(Error::LengthMismatch {
            left: model.n_points(),
            right: truth.len(),
        });
    }
    let mut rate = PreservingRate {
        preserving: 0,
        counted: 0,
        empty: 0,
        percent: 100.0,
    };
    for (j, col) in model.columns.iter().enumerate() {
        if col.indices.is_empty() {
            rate.empty += 1;
            match empty {
                EmptySupport::Exclude => continue,
                EmptySupport::AsPreserving => rate.preserving += 1,
                EmptySupport::AsViolation => {}
            }
        } else if is_subspace_preserving(col, j, truth) {
            rate.preserving += 1;
        }
        rate.counted += 1;
    }
    if rate.counted > 0 {
        rate.percent = 100.0 * rate.preserving as f64 / rate.counted as f64;
    }
    Ok(rate)
}

/// Data generation and parameters for a grid of subspace-preserving rates
/// over `(N, λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGridConfig {
    pub ambient_dim: usize,
    pub n_subspaces: usize,
    pub subspace_dim: usize,
    /// Total number of points per data set.
    pub n_values: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub seeds: usize,
    pub master_seed: u64,
    /// `γ_j = α·γ₀(x_j)`.
    pub alpha: f64,
}

impl PhaseGridConfig {
    /// Four random 8-dimensional subspaces of `R^20`.
    pub fn standard(n_values: Vec<usize>, lambdas: Vec<f64>, seeds: usize) -> Self {
        Self {
            ambient_dim: 20,
            n_subspaces: 4,
            subspace_dim: 8,
            n_values,
            lambdas,
            seeds,
            master_seed: 0,
            alpha: 5.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.lambdas.is_empty() || self.seeds == 0 {
            return Err(Error::InvalidParameter("phase grid needs N values, lambdas and seeds"));
        }
        if self.lambdas.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
            return Err(Error::InvalidParameter("lambda must lie in (0, 1]"));
        }
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter("alpha must exceed 1"));
        }
        if self.n_values.iter().any(|&n| n < 2 * self.n_subspaces) {
            return Err(Error::InvalidParameter("each subspace needs at least two points"));
        }
        Ok(())
    }

    /// Seed of the data set for `(N, trial)`. The same data serves every
    /// `λ`, so rows of the grid differ only in `λ`.
    pub fn dataset_seed(&self, n: usize, trial: usize) -> u64 {
        derive_seed(self.master_seed, &[n as u64, trial as u64])
    }

    pub fn subspace_config(&self, n: usize) -> SubspaceConfig {
        SubspaceConfig::uniform(self.ambient_dim, self.n_subspaces, self.subspace_dim, n)
    }
}

/// Outcome for one point at one `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnOutcome {
    /// The full representation is subspace preserving.
    pub experimental: bool,
    /// The sufficient condition holds.
    pub predicted: bool,
}

/// Solves the full problem for point `j` and evaluates the sufficient
/// condition from the in-subspace problem, both with `γ = α·γ₀`.
pub fn phase_column(
    data: &Dictionary,
    truth: &[usize],
    j: usize,
    lambda: f64,
    alpha: f64,
) -> Result<ColumnOutcome> {
    let x = data.atom(j);
    let others = data.without_atom(j);
    let gamma = alpha * gamma_zero(x, &others, lambda)?;
    let p = ElasticNetProblem::new(x, &others, lambda, gamma)?;
    let (sol, _) = orgen_solve(&p, &exact_config(lambda))?;
    let experimental = sol
        .support
        .iter()
        .all(|k| truth[if k < j { k } else { k + 1 }] == truth[j]);

    let (same, outside): (Vec<usize>, Vec<usize>) = (0..data.len())
        .filter(|&k| k != j)
        .partition(|&k| truth[k] == truth[j]);
    let same = data.select(&same);
    let outside = data.select(&outside);
    let diag = oracle_diagnostics_active_set(x, &same, lambda, gamma)?;
    let predicted = check_theorem4(&diag, &outside, lambda == 1.0);
    Ok(ColumnOutcome {
        experimental,
        predicted,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCell {
    pub n: usize,
    pub lambda: f64,
    pub experimental_pct: f64,
    pub predicted_pct: f64,
    /// Points where the condition held but the representation was not
    /// subspace preserving. Always zero if the condition is sufficient.
    pub violations: usize,
    pub failures: usize,
    pub seeds: usize,
}

impl PhaseCell {
    /// Aggregates per-point outcomes gathered over all seeds; failed points
    /// are left out of both percentages.
    pub fn from_outcomes(n: usize, lambda: f64, seeds: usize, outcomes: &[Result<ColumnOutcome>]) -> Self {
        let mut ok = 0usize;
        let (mut exp, mut pred, mut violations, mut failures) = (0usize, 0usize, 0usize, 0usize);
        for o in outcomes {
            match o {
                Ok(o) => {
                    ok += 1;
                    exp += usize::from(o.experimental);
                    pred += usize::from(o.predicted);
                    violations += usize::from(o.predicted && !o.experimental);
                }
                Err(_) => failures += 1,
            }
        }
        let pct = |k: usize| if ok == 0 { 0.0 } else { 100.0 * k as f64 / ok as f64 };
        Self {
            n,
            lambda,
            experimental_pct: pct(exp),
            predicted_pct: pct(pred),
            violations,
            failures,
            seeds,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGridResult {
    pub config: PhaseGridConfig,
    /// Row-major over `(n_values, lambdas)`.
    pub cells: Vec<PhaseCell>,
}

impl PhaseGridResult {
    pub fn cell(&self, n_index: usize, lambda_index: usize) -> &PhaseCell {
        &self.cells[n_index * self.config.lambdas.len() + lambda_index]
    }

    /// Experimental and predicted percentages averaged over `N` for each
    /// `λ`.
    pub fn lambda_averages(&self) -> Vec<(f64, f64, f64)> {
        let rows = self.config.n_values.len() as f64;
        self.config
            .lambdas
            .iter()
            .enumerate()
            .map(|(li, &l)| {
                let (e, p) = (0..self.config.n_values.len())
                    .map(|ni| self.cell(ni, li))
                    .fold((0.0, 0.0), |(e, p), c| (e + c.experimental_pct, p + c.predicted_pct));
                (l, e / rows, p / rows)
            })
            .collect()
    }
}

/// All outcomes for one `(N, λ)` cell, over every seed and point. The
/// iteration order is seed-major, point-minor.
pub fn phase_cell_outcomes(cfg: &PhaseGridConfig, n: usize, lambda: f64) -> Result<Vec<Result<ColumnOutcome>>> {
    let mut out = Vec::with_capacity(n * cfg.seeds);
    for trial in 0..cfg.seeds {
        let ds = random_subspaces(&cfg.subspace_config(n), cfg.dataset_seed(n, trial))?;
        for j in 0..n {
            out.push(phase_column(&ds.data, &ds.truth, j, lambda, cfg.alpha));
        }
    }
    Ok(out)
}

/// Sequential phase grid. Parallel drivers can map [`phase_column`] over
/// the same work items and aggregate with [`PhaseCell::from_outcomes`].
pub fn phase_grid(cfg: &PhaseGridConfig) -> Result<PhaseGridResult> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.n_values {
        for &lambda in &cfg.lambdas {
            let outcomes = phase_cell_outcomes(cfg, n, lambda)?;
            cells.push(PhaseCell::from_outcomes(n, lambda, cfg.seeds, &outcomes));
        }
    }
    Ok(PhaseGridResult {
        config: cfg.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::random_unit_sphere;
    use alloc::vec;

    #[test]
    fn remark_ratio_is_not_monotone() {
        let (x, dict) = remark_example();
        let low = oracle_diagnostics(&x, &dict, 0.88, 10.0).unwrap();
        let high = oracle_diagnostics(&x, &dict, 0.95, 10.0).unwrap();
        assert!(low.ratio > high.ratio, "{} vs {}", low.ratio, high.ratio);
        for c in dict.columns() {
            assert!((norm2(c) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_atom_closed_form() {
        // a = x: c = T_λ(γ)/(1 − λ + γ), δ = γ(1 − c)x, κ = 1
        let x = [0.6, 0.8];
        let dict = Dictionary::from_unit_columns(DenseMatrix::from_column_major(2, 1, x.to_vec()).unwrap()).unwrap();
        let (lambda, gamma) = (0.5, 4.0);
        let c = (gamma - lambda) / (1.0 - lambda + gamma);
        let delta_norm = gamma * (1.0 - c);
        let d = oracle_diagnostics(&x, &dict, lambda, gamma).unwrap();
        assert!((d.kappa - 1.0).abs() < 1e-12);
        assert!((d.delta_norm - delta_norm).abs() < 1e-9);
        assert!((d.bound_rhs - 1.0 / (1.0 + 1.0)).abs() < 1e-12);
        assert!((d.delta_bound - 1.0).abs() < 1e-12);
        assert!(check_delta_bound(&d, 1e-8));
    }

    #[test]
    fn delta_bound_on_random_in_subspace_solves() {
        for (t, &lambda) in [0.1, 0.5, 0.9, 1.0].iter().enumerate() {
            for s in 0..5u64 {
                let ds = random_subspaces(&SubspaceConfig::uniform(12, 1, 4, 30), 100 + s + 10 * t as u64).unwrap();
                let x = ds.data.atom(0);
                let same = ds.data.without_atom(0);
                let gamma = 5.0 * gamma_zero(x, &same, lambda).unwrap();
                let d = oracle_diagnostics(x, &same, lambda, gamma).unwrap();
                assert!(check_delta_bound(&d, 1e-8), "{} > {}", d.delta_norm, d.delta_bound);
            }
        }
    }

    #[test]
    fn theorem2_conventions() {
        let d = OracleDiagnostics {
            lambda: 0.0,
            gamma: 1.0,
            delta: vec![1.0],
            delta_norm: 1.0,
            ratio: 0.0,
            kappa: 1.0,
            bound_rhs: 0.0,
            delta_bound: 1.0,
        };
        assert_eq!(theorem2_rhs(0.5, 0.0), 0.0);
        assert!(check_theorem2(&d, 1.0));
        assert!((theorem2_rhs(0.5, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn theorem2_on_planted_cross_polytope() {
        // in-subspace atoms e_1..e_d of a d-dimensional coordinate subspace
        // of R^D; the symmetrized hull is the cross-polytope, inradius 1/√d
        let (dim, d) = (10, 4);
        let mut cols = vec![0.0; dim * d];
        for k in 0..d {
            cols[k * dim + k] = 1.0;
        }
        let atoms = Dictionary::from_unit_columns(DenseMatrix::from_column_major(dim, d, cols.clone()).unwrap()).unwrap();
        let r = 1.0 / libm::sqrt(d as f64);
        let basis = atoms.matrix().clone();
        let mc = inradius_upper_bound(&atoms, &basis, 10_000, 3);
        assert!(mc >= r - 1e-12 && mc < r + 0.15, "{mc}");
        for s in 0..20u64 {
            let coords = random_unit_sphere(d, 1, s);
            let x = basis.mul(coords.atom(0));
            for &lambda in &[0.2, 0.5, 0.9, 1.0] {
                let diag = oracle_diagnostics(&x, &atoms, lambda, 7.0).unwrap();
                assert!(check_theorem2(&diag, r), "λ={lambda} ratio {} rhs {}", diag.ratio, theorem2_rhs(r, lambda));
            }
        }
    }

    #[test]
    fn theorem4_trivial_cases() {
        let (x, dict) = remark_example();
        let diag = oracle_diagnostics(&x, &dict, 0.9, 10.0).unwrap();
        let empty = dict.select(&[]);
        assert!(check_theorem4(&diag, &empty, true));
        // atom orthogonal to δ
        let u = [diag.delta[1], -diag.delta[0], 0.0];
        let n = norm2(&u);
        let ortho = Dictionary::from_unit_columns(
            DenseMatrix::from_column_major(3, 1, u.iter().map(|v| v / n).collect()).unwrap(),
        )
        .unwrap();
        assert!(max_outside_coherence(&diag, &ortho) < 1e-12);
        assert!(check_theorem4(&diag, &ortho, false));
    }

    #[test]
    fn active_set_and_full_diagnostics_agree() {
        let ds = random_subspaces(&SubspaceConfig::uniform(15, 1, 5, 120), 8).unwrap();
        let x = ds.data.atom(3);
        let same = ds.data.without_atom(3);
        for &lambda in &[0.3, 0.9, 1.0] {
            let a = oracle_diagnostics(x, &same, lambda, 30.0).unwrap();
            let b = oracle_diagnostics_active_set(x, &same, lambda, 30.0).unwrap();
            assert!((a.delta_norm - b.delta_norm).abs() < 1e-7);
            assert!((a.kappa - b.kappa).abs() < 1e-7);
        }
    }

    #[test]
    fn preserving_rate_counting() {
        let truth = [0, 0, 1, 1];
        let col = |idx: Vec<usize>| SparseColumn {
            values: vec![0.5; idx.len()],
            indices: idx,
        };
        let mut model = SelfExpressiveModel {
            columns: vec![col(vec![1]), col(vec![0]), col(vec![3]), col(vec![2])],
            gamma0: vec![1.0; 4],
            gammas: vec![1.0; 4],
            support_sizes: vec![1; 4],
            failures: vec![],
            lambda: 0.5,
            alpha: 2.0,
        };
        assert_eq!(subspace_preserving_rate(&model, &truth, EmptySupport::Exclude).unwrap().percent, 100.0);
        model.columns[2] = col(vec![0, 3]);
        assert_eq!(subspace_preserving_rate(&model, &truth, EmptySupport::Exclude).unwrap().percent, 75.0);
        model.columns[1] = col(vec![]);
        let r = subspace_preserving_rate(&model, &truth, EmptySupport::Exclude).unwrap();
        assert_eq!((r.preserving, r.counted, r.empty), (2, 3, 1));
        assert_eq!(subspace_preserving_rate(&model, &truth, EmptySupport::AsViolation).unwrap().percent, 50.0);
        assert_eq!(subspace_preserving_rate(&model, &truth, EmptySupport::AsPreserving).unwrap().percent, 75.0);
        assert!(subspace_preserving_rate(&model, &truth[..3], EmptySupport::Exclude).is_err());
    }

    #[test]
    fn condition_is_sufficient_on_small_grids() {
        let cfg = PhaseGridConfig {
            ambient_dim: 10,
            n_subspaces: 3,
            subspace_dim: 4,
            ..PhaseGridConfig::standard(vec![36, 60], vec![0.3, 0.8, 1.0], 2)
        };
        let g = phase_grid(&cfg).unwrap();
        assert_eq!(g.cells.len(), 6);
        for c in &g.cells {
            assert_eq!(c.violations, 0, "{c:?}");
            assert_eq!(c.failures, 0);
            assert!(c.predicted_pct <= c.experimental_pct);
        }
    }

    #[test]
    fn single_cell_grid() {
        let cfg = PhaseGridConfig {
            seeds: 1,
            ..PhaseGridConfig::standard(vec![100], vec![0.99], 1)
        };
        let g = phase_grid(&cfg).unwrap();
        assert_eq!(g.cells.len(), 1);
        let c = &g.cells[0];
        assert!((0.0..=100.0).contains(&c.experimental_pct));
        assert!((0.0..=100.0).contains(&c.predicted_pct));
        assert_eq!(c.violations, 0);
        assert_eq!(c.failures, 0);
        assert!(c.predicted_pct <= c.experimental_pct + 2.0);
    }
}
