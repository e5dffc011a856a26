//! Check suites run by `ensc verify`.

use ensc_core::elastic_net::{solve_full, InnerSolverConfig};
use ensc_core::seed::derive_seed;
use ensc_core::theory::{
    check_delta_bound, check_theorem2, inradius_upper_bound, oracle_diagnostics, remark_example,
    theorem2_rhs, PhaseGridConfig, PhaseGridResult,
};
use ensc_core::{
    dual_feasibility_lambda1, gamma_zero, orgen_solve, random_subspaces, random_unit_sphere, DenseMatrix,
    Dictionary, ElasticNetProblem, OrgenConfig, Result, SubspaceConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::parallel::par_phase_grid;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub details: Value,
}

impl SuiteReport {
    fn new(suite: &str, checks: usize, failures: usize, details: Value) -> Self {
        Self {
            suite: suite.to_string(),
            passed: failures == 0,
            checks,
            failures,
            details,
        }
    }
}

/// `λ/‖δ‖` on the three-dimensional example at `λ = 0.88` and `0.95`.
pub fn remark_suite() -> Result<SuiteReport> {
    let (x, dict) = remark_example();
    let low = oracle_diagnostics(&x, &dict, 0.88, 10.0)?;
    let high = oracle_diagnostics(&x, &dict, 0.95, 10.0)?;
    let ok = low.ratio > high.ratio;
    Ok(SuiteReport::new(
        "remark",
        1,
        usize::from(!ok),
        json!({ "ratio_lambda_0.88": low.ratio, "ratio_lambda_0.95": high.ratio, "gamma": 10.0 }),
    ))
}

pub const LEMMA_LAMBDAS: [f64; 4] = [0.1, 0.5, 0.9, 1.0];

/// `‖δ‖₂ ≤ (λκ + 1 − λ)/κ²` on random in-subspace problems. Trial `t` uses
/// `λ = LEMMA_LAMBDAS[t % 4]`.
pub fn lemma_c2_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut failures = 0;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let lambda = LEMMA_LAMBDAS[t % LEMMA_LAMBDAS.len()];
        let cfg = SubspaceConfig::uniform(20, 1, 6, 40);
        let ds = random_subspaces(&cfg, derive_seed(seed, &[t as u64]))?;
        let x = ds.data.atom(0);
        let same = ds.data.without_atom(0);
        let gamma = 5.0 * gamma_zero(x, &same, lambda)?;
        let d = oracle_diagnostics(x, &same, lambda, gamma)?;
        if !check_delta_bound(&d, 1e-8) {
            failures += 1;
        }
        worst = worst.max(d.delta_norm / d.delta_bound);
    }
    Ok(SuiteReport::new(
        "lemma-c2",
        trials,
        failures,
        json!({ "max_norm_to_bound_ratio": worst }),
    ))
}

/// Coordinate axes `e_1..e_d` of `R^dim`.
pub fn cross_polytope(dim: usize, d: usize) -> Dictionary {
    let mut cols = vec![0.0; dim * d];
    for k in 0..d {
        cols[k * dim + k] = 1.0;
    }
    Dictionary::from_unit_columns(DenseMatrix::from_column_major(dim, d, cols).expect("finite"))
        .expect("unit axes")
}

/// The inradius lower bound on planted cross-polytopes (inradius `1/√d`),
/// plus Monte-Carlo inradius upper bounds on random point sets, where the
/// margin is reported but not judged.
pub fn theorem2_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let dim = 12;
    let mut checks = 0;
    let mut failures = 0;
    for t in 0..trials {
        let d = 2 + t % 5;
        let atoms = cross_polytope(dim, d);
        let r = 1.0 / (d as f64).sqrt();
        let coords = random_unit_sphere(d, 1, derive_seed(seed, &[t as u64]));
        let x = atoms.matrix().mul(coords.atom(0));
        for &lambda in &[0.2, 0.5, 0.9, 1.0] {
            let diag = oracle_diagnostics(&x, &atoms, lambda, 7.0)?;
            checks += 1;
            if !check_theorem2(&diag, r) {
                failures += 1;
            }
        }
    }

    let mut margins = Vec::new();
    for t in 0..trials.min(10) {
        let ds = random_subspaces(&SubspaceConfig::uniform(dim, 1, 4, 30), derive_seed(seed, &[1, t as u64]))?;
        let x = ds.data.atom(0);
        let same = ds.data.without_atom(0);
        let r_upper = inradius_upper_bound(&same, &ds.bases[0], 10_000, derive_seed(seed, &[2, t as u64]));
        let diag = oracle_diagnostics(x, &same, 0.9, 5.0 * gamma_zero(x, &same, 0.9)?)?;
        margins.push(diag.ratio - theorem2_rhs(r_upper, 0.9));
    }
    Ok(SuiteReport::new(
        "theorem2",
        checks,
        failures,
        json!({ "monte_carlo_margins": margins }),
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct LambdaOneCheck {
    /// `max | |a_jᵀδ| − 1 |` over the support.
    pub support_defect: f64,
    /// `‖Aᵀδ‖∞`.
    pub dual_norm: f64,
    /// `‖δ₁ − δ₂‖∞` between two different solves.
    pub start_gap: f64,
}

impl LambdaOneCheck {
    pub fn passes(&self) -> bool {
        self.support_defect <= 1e-7 && self.dual_norm <= 1.0 + 1e-8 && self.start_gap <= 1e-7
    }
}

/// Structure of the `λ = 1` solution: the active-set solution against the
/// full-dictionary one.
pub fn lambda_one_instance(dim: usize, n: usize, gamma: f64, seed: u64) -> Result<LambdaOneCheck> {
    let dict = random_unit_sphere(dim, n, derive_seed(seed, &[0]));
    let b = random_unit_sphere(dim, 1, derive_seed(seed, &[1]));
    let p = ElasticNetProblem::new(b.atom(0), &dict, 1.0, gamma)?;
    let cfg = OrgenConfig {
        lambda_one_mode: true,
        ..OrgenConfig::exact()
    };
    let (a, _) = orgen_solve(&p, &cfg)?;
    let full = solve_full(&p, &InnerSolverConfig::default())?;
    let corr = dict.correlations(&a.oracle_point);
    let support_defect = a
        .support
        .iter()
        .fold(0.0f64, |m, j| m.max((corr[j].abs() - 1.0).abs()));
    let start_gap = a
        .oracle_point
        .iter()
        .zip(&full.oracle_point)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(LambdaOneCheck {
        support_defect,
        dual_norm: dual_feasibility_lambda1(&a.oracle_point, &dict),
        start_gap,
    })
}

pub fn lambda_one_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut failures = 0;
    let mut worst = LambdaOneCheck::default();
    for t in 0..trials {
        let c = lambda_one_instance(30, 300, 50.0, derive_seed(seed, &[t as u64]))?;
        failures += usize::from(!c.passes());
        worst.support_defect = worst.support_defect.max(c.support_defect);
        worst.dual_norm = worst.dual_norm.max(c.dual_norm);
        worst.start_gap = worst.start_gap.max(c.start_gap);
    }
    Ok(SuiteReport::new("lambda-one", trials, failures, json!(worst)))
}

/// Cells where the sufficient condition predicts more than observed
/// (beyond 2 points), or any point where it held without a subspace
/// preserving representation.
pub fn phase_grid_failures(grid: &PhaseGridResult) -> usize {
    grid.cells
        .iter()
        .filter(|c| c.violations > 0 || c.failures > 0 || c.predicted_pct > c.experimental_pct + 2.0)
        .count()
}

pub fn phase_grid_suite(cfg: &PhaseGridConfig) -> Result<(SuiteReport, PhaseGridResult)> {
    let grid = par_phase_grid(cfg)?;
    let failures = phase_grid_failures(&grid);
    let cells: Vec<Value> = grid
        .cells
        .iter()
        .map(|c| {
            json!({
                "N": c.n, "lambda": c.lambda, "experimental_pct": c.experimental_pct,
                "predicted_pct": c.predicted_pct, "violations": c.violations, "failures": c.failures,
            })
        })
        .collect();
    let report = SuiteReport::new("phase-grid", grid.cells.len(), failures, json!({ "cells": cells }));
    Ok((report, grid))
}
