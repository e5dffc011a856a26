//! Oracle-guided active-set solver.
//!
//! Each outer iteration solves the elastic net on the columns in the
//! active set `T_k`, computes the oracle point `δ` of that reduced
//! problem, and replaces the active set with the atoms inside the oracle
//! region. It stops as soon as the new set adds nothing, at which point the
//! reduced solution is optimal for the full dictionary.
//!
//! Two variants of the update are supported: a capped update that admits
//! only the best-correlated new atoms so that `|T_k| ≤ N_max`, and the
//! `λ = 1` update that keeps the current support (which then lies on the
//! boundary of the region rather than inside it).

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::elastic_net::{
    fixed_point_defect, ridge_closed_form_with_gram, solve_full_from, Evaluation,
    InnerSolverConfig,
};
use crate::error::{Error, Result};
use crate::matrix::{norm2, Dictionary, IndexSet};
use crate::problem::{ElasticNetProblem, ElasticNetSolution};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrgenConfig {
    /// `l`: how many of the largest ridge coefficients seed `T₀`.
    pub init_size: usize,
    /// `N_max` for the capped update; `None` for the plain update.
    pub max_active: Option<usize>,
    pub max_outer_iterations: usize,
    pub inner: InnerSolverConfig,
    /// Keep the current support in the next active set. Always on when
    /// `λ = 1`.
    pub lambda_one_mode: bool,
    /// Return the last iterate instead of an error when the outer limit is
    /// reached. Used by the clustering preset, which stops early on purpose.
    pub truncate_at_limit: bool,
    pub region_band: f64,
}

impl Default for OrgenConfig {
    fn default() -> Self {
        Self {
            init_size: 100,
            max_active: None,
            max_outer_iterations: 100,
            inner: InnerSolverConfig::default(),
            lambda_one_mode: false,
            truncate_at_limit: false,
            region_band: tolerances::REGION_BAND,
        }
    }
}

impl OrgenConfig {
    /// Exact solving: plain update, run to termination.
    pub fn exact() -> Self {
        Self::default()
    }

    /// At most two outer iterations with the capped update (`N_max = 3000`).
    /// Enough for building affinities, not an exact solver.
    pub fn clustering() -> Self {
        Self {
            max_active: Some(3000),
            max_outer_iterations: 2,
            truncate_at_limit: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.init_size == 0 {
            return Err(Error::InvalidParameter("init_size must be at least 1"));
        }
        if let Some(cap) = self.max_active {
            if cap < self.init_size {
                return Err(Error::InvalidParameter("max_active must be at least init_size"));
            }
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::InvalidParameter("max_outer_iterations must be at least 1"));
        }
        self.inner.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrgenIteration {
    pub iteration: usize,
    pub active_size: usize,
    /// Objective of the reduced problem's solution.
    pub objective: f64,
    pub support_size: usize,
    /// Optimality residual of the reduced problem.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OrgenTrace {
    pub iterations: Vec<OrgenIteration>,
    /// The outer limit was hit and the last iterate returned as is.
    pub truncated: bool,
}

impl OrgenTrace {
    pub fn outer_iterations(&self) -> usize {
        self.iterations.len()
    }

    /// Each recorded objective is below its predecessor by more than
    /// `-slack`.
    pub fn is_strictly_decreasing(&self, slack: f64) -> bool {
        self.iterations
            .windows(2)
            .all(|w| w[1].objective < w[0].objective + slack)
    }
}

/// Orders by magnitude descending, then index ascending.
fn by_magnitude(values: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| {
        values[b]
            .abs()
            .total_cmp(&values[a].abs())
            .then(a.cmp(&b))
    }
}

fn top_by_magnitude(values: &[f64], mut candidates: Vec<usize>, count: usize) -> Vec<usize> {
    let cmp = by_magnitude(values);
    if count < candidates.len() {
        if count > 0 {
            candidates.select_nth_unstable_by(count - 1, &cmp);
        }
        candidates.truncate(count);
    }
    candidates
}

/// Indices of the `l` largest-magnitude ridge coefficients.
pub fn init_active_set(p: &ElasticNetProblem<'_>, cfg: &OrgenConfig) -> Result<IndexSet> {
    init_active_set_with_gram(p, cfg, None)
}

/// [`init_active_set`] with an optional precomputed `AAᵀ`.
pub fn init_active_set_with_gram(
    p: &ElasticNetProblem<'_>,
    cfg: &OrgenConfig,
    gram: Option<&[f64]>,
) -> Result<IndexSet> {
    let n = p.n_atoms();
    let l = cfg.init_size.min(n);
    if l == n {
        return Ok(IndexSet::full(n));
    }
    let ridge = match gram {
        Some(g) => ridge_closed_form_with_gram(p, g)?,
        None => ridge_closed_form_with_gram(p, &p.dict().outer_gram())?,
    };
    Ok(IndexSet::from_unsorted(top_by_magnitude(&ridge, (0..n).collect(), l)))
}

/// Next active set from the oracle point of the current reduced problem.
///
/// `current_support` holds dictionary indices of the reduced solution's
/// nonzeros; it only matters in `λ = 1` mode.
pub fn active_set_update(
    delta: &[f64],
    dict: &Dictionary,
    lambda: f64,
    current: &IndexSet,
    current_support: &IndexSet,
    cfg: &OrgenConfig,
) -> Result<IndexSet> {
    if norm2(delta) < tolerances::NORM {
        return Err(Error::DegenerateOracle);
    }
    let correlations = dict.correlations(delta);
    Ok(update_from_correlations(
        &correlations,
        lambda,
        current,
        current_support,
        cfg,
    ))
}

fn update_from_correlations(
    correlations: &[f64],
    lambda: f64,
    current: &IndexSet,
    current_support: &IndexSet,
    cfg: &OrgenConfig,
) -> IndexSet {
    let threshold = lambda + cfg.region_band;
    let in_region = |j: &usize| correlations[*j].abs() > threshold;
    let mut next = match cfg.max_active {
        None => IndexSet::from_unsorted((0..correlations.len()).filter(in_region).collect()),
        Some(cap) => {
            let (kept, fresh): (Vec<usize>, Vec<usize>) = (0..correlations.len())
                .filter(in_region)
                .partition(|&j| current.contains(j));
            // at least one new atom whenever one exists, or the method stalls
            let room = cap.saturating_sub(kept.len()).max(usize::from(!fresh.is_empty()));
            let mut chosen = top_by_magnitude(correlations, fresh, room);
            chosen.extend_from_slice(&kept);
            IndexSet::from_unsorted(chosen)
        }
    };
    if cfg.lambda_one_mode || lambda >= 1.0 {
        next = next.union(current_support);
    }
    next
}

/// Solves the problem with the active-set method, starting from the ridge
/// initialization.
pub fn orgen_solve(
    p: &ElasticNetProblem<'_>,
    cfg: &OrgenConfig,
) -> Result<(ElasticNetSolution, OrgenTrace)> {
    orgen_solve_with_gram(p, cfg, None)
}

/// [`orgen_solve`] with a precomputed `AAᵀ` for the initialization.
pub fn orgen_solve_with_gram(
    p: &ElasticNetProblem<'_>,
    cfg: &OrgenConfig,
    gram: Option<&[f64]>,
) -> Result<(ElasticNetSolution, OrgenTrace)> {
    cfg.validate()?;
    let initial = init_active_set_with_gram(p, cfg, gram)?;
    orgen_solve_from(p, cfg, initial)
}

/// Runs the outer loop from an explicit `T₀`.
pub fn orgen_solve_from(
    p: &ElasticNetProblem<'_>,
    cfg: &OrgenConfig,
    initial: IndexSet,
) -> Result<(ElasticNetSolution, OrgenTrace)> {
    cfg.validate()?;
    let n = p.n_atoms();
    if initial.iter().any(|j| j >= n) {
        return Err(Error::InvalidParameter("initial active set index out of range"));
    }
    let dict = p.dict();
    let lambda = p.lambda();
    let mut active = initial;
    let mut coefficients = vec![0.0; n];
    let mut trace = OrgenTrace::default();

    for k in 0.. {
        let sub = dict.subset(&active);
        let sp = p.with_dictionary(&sub);
        let start: Vec<f64> = active.iter().map(|j| coefficients[j]).collect();
        let sol = solve_full_from(&sp, &cfg.inner, &start)?;

        coefficients.iter_mut().for_each(|c| *c = 0.0);
        for (&j, &c) in active.as_slice().iter().zip(&sol.coefficients) {
            coefficients[j] = c;
        }
        trace.iterations.push(OrgenIteration {
            iteration: k,
            active_size: active.len(),
            objective: sol.objective,
            support_size: sol.support_size(),
            residual: sol.optimality_residual,
        });

        let delta = sol.oracle_point;
        if norm2(&delta) < tolerances::NORM {
            return Err(Error::DegenerateOracle);
        }
        let correlations = dict.correlations(&delta);
        let support: IndexSet = sol.support.iter().map(|s| active.as_slice()[s]).collect();
        let next = update_from_correlations(&correlations, lambda, &active, &support, cfg);

        let done = next.is_subset_of(&active);
        let limit = k + 1 >= cfg.max_outer_iterations;
        if done || limit {
            let residual = fixed_point_defect(&coefficients, &correlations, lambda);
            let eval = Evaluation {
                delta,
                objective: sol.objective,
                residual,
            };
            let full = ElasticNetSolution::from_evaluation(coefficients, eval, sol.iterations);
            if done {
                return Ok((full, trace));
            }
            if cfg.truncate_at_limit {
                trace.truncated = true;
                return Ok((full, trace));
            }
            return Err(Error::MaxOuterIterationsExceeded {
                best: Box::new(full),
                trace: Box::new(trace),
            });
        }
        active = next;
    }
    unreachable!("the outer loop only exits by returning")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic_net::solve_full;
    use crate::matrix::{dot, normalize_columns, DenseMatrix};
    use crate::synth::random_unit_sphere;
    use crate::theory::remark_example;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn init_size_n_gives_everything() {
        let a = random_unit_sphere(5, 12, 1);
        let b = random_unit_sphere(5, 1, 2);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.5, 10.0).unwrap();
        let cfg = OrgenConfig {
            init_size: 12,
            ..Default::default()
        };
        assert_eq!(init_active_set(&p, &cfg).unwrap(), IndexSet::full(12));
        let cfg = OrgenConfig {
            init_size: 500,
            ..Default::default()
        };
        assert_eq!(init_active_set(&p, &cfg).unwrap(), IndexSet::full(12));
    }

    #[test]
    fn init_picks_matching_orthonormal_atom() {
        let d = Dictionary::from_unit_columns(DenseMatrix::identity(5)).unwrap();
        let b = [0.0, 0.0, 0.0, 1.0, 0.0];
        let p = ElasticNetProblem::new(&b, &d, 0.5, 10.0).unwrap();
        let cfg = OrgenConfig {
            init_size: 1,
            ..Default::default()
        };
        assert_eq!(init_active_set(&p, &cfg).unwrap().as_slice(), &[3]);
    }

    #[test]
    fn init_on_remark_data_matches_enumeration() {
        let (x, dict) = remark_example();
        let p = ElasticNetProblem::new(&x, &dict, 0.9, 10.0).unwrap();
        let cfg = OrgenConfig {
            init_size: 1,
            ..Default::default()
        };
        let ridge = crate::elastic_net::ridge_closed_form(&p).unwrap();
        let mut best = 0;
        for j in 1..4 {
            if ridge[j].abs() > ridge[best].abs() {
                best = j;
            }
        }
        assert_eq!(init_active_set(&p, &cfg).unwrap().as_slice(), &[best]);
    }

    #[test]
    fn full_initial_set_is_one_iteration() {
        let a = random_unit_sphere(10, 30, 3);
        let b = random_unit_sphere(10, 1, 4);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.6, 20.0).unwrap();
        let (s, trace) = orgen_solve_from(&p, &OrgenConfig::default(), IndexSet::full(30)).unwrap();
        assert_eq!(trace.outer_iterations(), 1);
        let f = solve_full(&p, &InnerSolverConfig::default()).unwrap();
        assert!(max_diff(&s.coefficients, &f.coefficients) < 1e-12);
    }

    #[test]
    fn matches_full_solver_on_random_instance() {
        let a = random_unit_sphere(30, 600, 5);
        let b = random_unit_sphere(30, 1, 6);
        for &lambda in &[0.2, 0.9] {
            let p = ElasticNetProblem::new(b.atom(0), &a, lambda, 50.0).unwrap();
            let cfg = OrgenConfig {
                init_size: 10,
                ..Default::default()
            };
            let (s, trace) = orgen_solve(&p, &cfg).unwrap();
            let f = solve_full(&p, &InnerSolverConfig::default()).unwrap();
            assert!(max_diff(&s.coefficients, &f.coefficients) < 1e-6);
            assert!(s.optimality_residual <= 1e-9);
            assert!(s.support.is_subset_of(&IndexSet::full(600)));
            assert!(trace.is_strictly_decreasing(1e-12));
        }
    }

    #[test]
    fn no_atom_in_region_terminates_with_zero() {
        let a = random_unit_sphere(8, 40, 7);
        let b = random_unit_sphere(8, 1, 8);
        let max_corr = a.correlations(b.atom(0)).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let lambda = 0.5;
        let p = ElasticNetProblem::new(b.atom(0), &a, lambda, 0.8 * lambda / max_corr).unwrap();
        let (s, _) = orgen_solve(&p, &OrgenConfig { init_size: 3, ..Default::default() }).unwrap();
        assert!(s.support.is_empty());
        let next = active_set_update(
            &s.oracle_point,
            &a,
            lambda,
            &IndexSet::new(),
            &IndexSet::new(),
            &OrgenConfig::default(),
        )
        .unwrap();
        assert!(next.is_empty());
    }

    #[test]
    fn planted_region_membership() {
        // δ = (1, 0, 0); atoms at chosen angles so that exactly 2 and 7 have
        // |⟨a, δ⟩| > λ = 0.5
        let cosines = [0.1, -0.3, 0.9, 0.45, 0.0, 0.2, -0.49, -0.8, 0.3, 0.05];
        let mut cols = Vec::new();
        for (k, &c) in cosines.iter().enumerate() {
            let s = libm::sqrt(1.0 - c * c);
            let t = k as f64;
            cols.extend_from_slice(&[c, s * libm::cos(t), s * libm::sin(t)]);
        }
        let dict = normalize_columns(DenseMatrix::from_column_major(3, 10, cols).unwrap()).unwrap();
        let delta = [1.0, 0.0, 0.0];
        let next = active_set_update(
            &delta,
            &dict,
            0.5,
            &IndexSet::new(),
            &IndexSet::new(),
            &OrgenConfig::default(),
        )
        .unwrap();
        assert_eq!(next.as_slice(), &[2, 7]);
        assert!(matches!(
            active_set_update(&[0.0; 3], &dict, 0.5, &IndexSet::new(), &IndexSet::new(), &OrgenConfig::default()),
            Err(Error::DegenerateOracle)
        ));
    }

    #[test]
    fn capped_update_keeps_old_and_admits_best_new() {
        let corr = [0.9, 0.2, 0.95, 0.7, -0.99, 0.8, 0.6];
        let current = IndexSet::from_unsorted(vec![0, 1, 3]);
        let cfg = OrgenConfig {
            init_size: 3,
            max_active: Some(3),
            ..Default::default()
        };
        let next = update_from_correlations(&corr, 0.5, &current, &IndexSet::new(), &cfg);
        // old in-region {0, 3}; new in-region {2, 4, 5, 6}; room = 1 → best new is 4
        assert_eq!(next.as_slice(), &[0, 3, 4]);
        let cfg = OrgenConfig {
            max_active: Some(5),
            ..cfg
        };
        let next = update_from_correlations(&corr, 0.5, &current, &IndexSet::new(), &cfg);
        assert_eq!(next.as_slice(), &[0, 2, 3, 4, 5]);
    }

    #[test]
    fn ties_break_toward_lower_index() {
        let corr = [0.7, -0.7, 0.7, 0.1];
        let cfg = OrgenConfig {
            init_size: 1,
            max_active: Some(2),
            ..Default::default()
        };
        let next = update_from_correlations(&corr, 0.5, &IndexSet::new(), &IndexSet::new(), &cfg);
        assert_eq!(next.as_slice(), &[0, 1]);
    }

    #[test]
    fn capped_mode_converges_to_exact_solution() {
        let a = random_unit_sphere(20, 800, 9);
        let b = random_unit_sphere(20, 1, 10);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.4, 40.0).unwrap();
        let cfg = OrgenConfig {
            init_size: 5,
            max_active: Some(20),
            ..Default::default()
        };
        let (s, trace) = orgen_solve(&p, &cfg).unwrap();
        let f = solve_full(&p, &InnerSolverConfig::default()).unwrap();
        assert!(max_diff(&s.coefficients, &f.coefficients) < 1e-6);
        assert!(trace.is_strictly_decreasing(1e-12));
    }

    #[test]
    fn lambda_one_keeps_support() {
        let a = random_unit_sphere(10, 200, 11);
        let b = random_unit_sphere(10, 1, 12);
        let p = ElasticNetProblem::new(b.atom(0), &a, 1.0, 30.0).unwrap();
        let (s, _) = orgen_solve(&p, &OrgenConfig { init_size: 4, ..Default::default() }).unwrap();
        assert!(s.optimality_residual <= 1e-8);
        for j in s.support.iter() {
            assert!((dot(a.atom(j), &s.oracle_point).abs() - 1.0).abs() <= 1e-7);
        }
    }

    #[test]
    fn outer_limit_is_an_error_unless_truncating() {
        let a = random_unit_sphere(20, 500, 13);
        let b = random_unit_sphere(20, 1, 14);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.3, 50.0).unwrap();
        let cfg = OrgenConfig {
            init_size: 1,
            max_outer_iterations: 1,
            ..Default::default()
        };
        assert!(matches!(orgen_solve(&p, &cfg), Err(Error::MaxOuterIterationsExceeded { .. })));
        let (_, trace) = orgen_solve(&p, &OrgenConfig { truncate_at_limit: true, ..cfg }).unwrap();
        assert!(trace.truncated);
        assert_eq!(trace.outer_iterations(), 1);
    }

    #[test]
    fn invalid_configs() {
        assert!(OrgenConfig { init_size: 0, ..Default::default() }.validate().is_err());
        assert!(OrgenConfig { max_active: Some(10), ..Default::default() }.validate().is_err());
        assert!(OrgenConfig::clustering().validate().is_ok());
    }
}
