//! The elastic net objective, its optimality characterization and the
//! full-dictionary solver.
//!
//! At the optimum `c*` the oracle point `δ = γ(b − Ac*)` determines the
//! solution through soft thresholding, `(1−λ)c* = T_λ(Aᵀδ)`. Every
//! residual and region test in this crate is phrased in terms of that
//! fixed point.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{dot, inf_norm, norm2, Dictionary};
use crate::problem::{ElasticNetProblem, ElasticNetSolution};
use crate::tolerances;

/// `sgn(v)(|v| − t)` if `|v| > t`, else 0.
#[inline]
pub fn soft_threshold_scalar(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Componentwise soft thresholding `T_λ`.
pub fn soft_threshold(v: &[f64], lambda: f64) -> Vec<f64> {
    v.iter().map(|&x| soft_threshold_scalar(x, lambda)).collect()
}

fn objective_from_fit(p: &ElasticNetProblem<'_>, c: &[f64], ac: &[f64]) -> f64 {
    let lambda = p.lambda();
    let (mut l1, mut l2) = (0.0, 0.0);
    for &x in c {
        l1 += x.abs();
        l2 += x * x;
    }
    let mut fit = 0.0;
    for (bi, ai) in p.b().iter().zip(ac) {
        let r = bi - ai;
        fit += r * r;
    }
    lambda * l1 + 0.5 * (1.0 - lambda) * l2 + 0.5 * p.gamma() * fit
}

/// `λ‖c‖₁ + (1−λ)/2 ‖c‖₂² + γ/2 ‖b − Ac‖₂²`.
pub fn objective(c: &[f64], p: &ElasticNetProblem<'_>) -> Result<f64> {
    p.check_len(c)?;
    Ok(objective_from_fit(p, c, &p.dict().combine(c)))
}

/// `γ(b − Ac)`.
pub fn oracle_point(c: &[f64], p: &ElasticNetProblem<'_>) -> Result<Vec<f64>> {
    p.check_len(c)?;
    let ac = p.dict().combine(c);
    Ok(p.b().iter().zip(&ac).map(|(b, a)| p.gamma() * (b - a)).collect())
}

/// Largest componentwise defect of the optimality conditions given `c` and
/// the correlations `Aᵀδ`.
///
/// For `λ < 1` this is `‖(1−λ)c − T_λ(Aᵀδ)‖∞`. At `λ = 1` that expression
/// only checks dual feasibility, so the support condition
/// `a_jᵀδ = sgn(c_j)` is checked as well.
pub(crate) fn fixed_point_defect(c: &[f64], correlations: &[f64], lambda: f64) -> f64 {
    let mut worst = 0.0f64;
    if lambda < 1.0 {
        for (cj, gj) in c.iter().zip(correlations) {
            let d = ((1.0 - lambda) * cj - soft_threshold_scalar(*gj, lambda)).abs();
            worst = worst.max(d);
        }
    } else {
        for (cj, gj) in c.iter().zip(correlations) {
            let d = if *cj == 0.0 {
                (gj.abs() - 1.0).max(0.0)
            } else {
                (gj - cj.signum()).abs()
            };
            worst = worst.max(d);
        }
    }
    worst
}

/// Residual of the optimality conditions at `c`; zero exactly at the
/// solution.
pub fn check_optimality(c: &[f64], p: &ElasticNetProblem<'_>) -> Result<f64> {
    p.check_len(c)?;
    Ok(Evaluation::new(p, c).residual)
}

/// `‖Aᵀδ‖∞`; at `λ = 1` the oracle point is dual feasible iff this is at
/// most one.
pub fn dual_feasibility_lambda1(delta: &[f64], dict: &Dictionary) -> f64 {
    inf_norm(&dict.correlations(delta))
}

/// Everything derived from one coefficient vector.
pub(crate) struct Evaluation {
    pub delta: Vec<f64>,
    pub objective: f64,
    pub residual: f64,
}

impl Evaluation {
    pub fn new(p: &ElasticNetProblem<'_>, c: &[f64]) -> Self {
        let ac = p.dict().combine(c);
        Self::with_fit(p, c, &ac)
    }

    pub fn with_fit(p: &ElasticNetProblem<'_>, c: &[f64], ac: &[f64]) -> Self {
        let delta: Vec<f64> = p
            .b()
            .iter()
            .zip(ac)
            .map(|(b, a)| p.gamma() * (b - a))
            .collect();
        let correlations = p.dict().correlations(&delta);
        let residual = fixed_point_defect(c, &correlations, p.lambda());
        Self {
            objective: objective_from_fit(p, c, ac),
            delta,
            residual,
        }
    }
}

/// The pair of antipodal caps `{v : ‖v‖ = 1, μ(v, δ) > λ/‖δ‖}`.
///
/// For unit atoms membership reduces to `|⟨a, δ⟩| > λ`. The open boundary
/// is realised with a band: values within `band` of `λ` are on the
/// boundary and excluded from the region.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRegionQuery {
    delta: Vec<f64>,
    lambda: f64,
    delta_norm: f64,
    threshold: f64,
    band: f64,
}

impl OracleRegionQuery {
    pub fn new(delta: Vec<f64>, lambda: f64) -> Result<Self> {
        Self::with_band(delta, lambda, tolerances::REGION_BAND)
    }

    pub fn with_band(delta: Vec<f64>, lambda: f64, band: f64) -> Result<Self> {
        let delta_norm = norm2(&delta);
        if delta_norm < tolerances::NORM {
            return Err(Error::DegenerateOracle);
        }
        Ok(Self {
            threshold: lambda / delta_norm,
            delta,
            lambda,
            delta_norm,
            band,
        })
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn delta_norm(&self) -> f64 {
        self.delta_norm
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Coherence threshold `λ/‖δ‖₂`.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    #[inline]
    pub fn contains(&self, atom: &[f64]) -> bool {
        self.contains_correlation(dot(atom, &self.delta))
    }

    /// Membership from a precomputed `⟨a, δ⟩`.
    #[inline]
    pub fn contains_correlation(&self, corr: f64) -> bool {
        corr.abs() > self.lambda + self.band
    }

    #[inline]
    pub fn on_boundary(&self, atom: &[f64]) -> bool {
        (dot(atom, &self.delta).abs() - self.lambda).abs() <= self.band
    }
}

/// Whether the unit vector `atom` lies strictly inside the oracle region.
pub fn in_oracle_region(atom: &[f64], q: &OracleRegionQuery) -> bool {
    q.contains(atom)
}

/// Whether `atom` lies on the boundary of the oracle region (within the
/// query's band).
pub fn on_boundary(atom: &[f64], q: &OracleRegionQuery) -> bool {
    q.on_boundary(atom)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerSolverConfig {
    pub max_iterations: usize,
    /// Stop once the fixed-point residual drops to this value.
    pub tolerance: f64,
    /// Nesterov momentum with restart on objective increase.
    pub acceleration: bool,
    /// Once the support is stable, try solving the linear optimality
    /// system on it directly.
    pub polish: bool,
    pub zero_threshold: f64,
}

impl Default for InnerSolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            tolerance: tolerances::SOLVER,
            acceleration: true,
            polish: true,
            zero_threshold: tolerances::ZERO_COEFFICIENT,
        }
    }
}

impl InnerSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParameter("solver tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1"));
        }
        if self.zero_threshold.is_nan() || self.zero_threshold < 0.0 {
            return Err(Error::InvalidParameter("zero threshold must be nonnegative"));
        }
        Ok(())
    }
}

const CHECK_EVERY: usize = 10;
// Beyond this the dense solve costs more than the iterations it saves.
const POLISH_MAX_SUPPORT: usize = 1000;

/// Solves the problem over the full dictionary with accelerated proximal
/// gradient.
pub fn solve_full(p: &ElasticNetProblem<'_>, cfg: &InnerSolverConfig) -> Result<ElasticNetSolution> {
    run(p, cfg, None, None)
}

/// [`solve_full`] started from `start` instead of zero.
pub fn solve_full_from(
    p: &ElasticNetProblem<'_>,
    cfg: &InnerSolverConfig,
    start: &[f64],
) -> Result<ElasticNetSolution> {
    run(p, cfg, Some(start), None)
}

/// [`solve_full`] that also returns the objective value of every accepted
/// iterate, starting with the initial point.
pub fn solve_full_traced(
    p: &ElasticNetProblem<'_>,
    cfg: &InnerSolverConfig,
    start: Option<&[f64]>,
) -> Result<(ElasticNetSolution, Vec<f64>)> {
    let mut trace = Vec::new();
    let s = run(p, cfg, start, Some(&mut trace))?;
    Ok((s, trace))
}

fn finish(p: &ElasticNetProblem<'_>, x: Vec<f64>, cfg: &InnerSolverConfig, it: usize) -> Result<ElasticNetSolution> {
    ElasticNetSolution::from_coefficients(p, x, cfg.zero_threshold, it)
}

/// Rounding allowance when comparing objective values.
#[inline]
fn slack(f: f64) -> f64 {
    1e-12 * f.abs().max(1.0)
}

fn run(
    p: &ElasticNetProblem<'_>,
    cfg: &InnerSolverConfig,
    start: Option<&[f64]>,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<ElasticNetSolution> {
    cfg.validate()?;
    let dict = p.dict();
    let (n, d) = (dict.len(), dict.dim());
    let (lambda, gamma) = (p.lambda(), p.gamma());
    let b = p.b();

    let mut x = match start {
        Some(s) => {
            p.check_len(s)?;
            s.to_vec()
        }
        None => vec![0.0; n],
    };
    if n == 0 {
        return finish(p, x, cfg, 0);
    }
    let mut ax = dict.combine(&x);
    let initial = Evaluation::with_fit(p, &x, &ax);
    if initial.residual <= cfg.tolerance {
        return finish(p, x, cfg, 0);
    }
    let mut fx = initial.objective;
    if let Some(t) = trace.as_deref_mut() {
        t.push(fx);
    }

    let mut step = 1.0 / (gamma * linalg::spectral_norm_sq(dict) * 1.02);
    let mut y = x.clone();
    let mut ay = ax.clone();
    let mut theta = 1.0f64;
    let mut at_restart = true;
    let mut residual = initial.residual;

    let mut since_check = 0;
    let mut last_support: Option<Vec<usize>> = None;
    let mut polish_failures = 0u32;
    let mut polish_cooldown = 0u32;
    let mut ry = vec![0.0; d];
    let mut x_new = vec![0.0; n];

    for iter in 1..=cfg.max_iterations {
        for i in 0..d {
            ry[i] = b[i] - ay[i];
        }
        let corr = dict.correlations(&ry);
        let gs = step * gamma;
        let shrink = 1.0 / (1.0 + step * (1.0 - lambda));
        let thr = step * lambda;
        for j in 0..n {
            x_new[j] = soft_threshold_scalar(y[j] + gs * corr[j], thr) * shrink;
        }
        let ax_new = dict.combine(&x_new);
        let f_new = objective_from_fit(p, &x_new, &ax_new);

        if f_new > fx + slack(fx) {
            if at_restart {
                // A plain proximal step cannot increase the objective with
                // a valid step size; the Lipschitz estimate was too small.
                step *= 0.5;
            } else {
                y.copy_from_slice(&x);
                ay.copy_from_slice(&ax);
                theta = 1.0;
                at_restart = true;
            }
            continue;
        }

        if cfg.acceleration {
            let theta_next = 0.5 * (1.0 + libm::sqrt(1.0 + 4.0 * theta * theta));
            let beta = (theta - 1.0) / theta_next;
            for j in 0..n {
                y[j] = x_new[j] + beta * (x_new[j] - x[j]);
            }
            for i in 0..d {
                ay[i] = ax_new[i] + beta * (ax_new[i] - ax[i]);
            }
            theta = theta_next;
            at_restart = beta == 0.0;
        } else {
            y.copy_from_slice(&x_new);
            ay.copy_from_slice(&ax_new);
        }
        core::mem::swap(&mut x, &mut x_new);
        ax = ax_new;
        fx = f_new;
        if let Some(t) = trace.as_deref_mut() {
            t.push(fx);
        }

        since_check += 1;
        if since_check < CHECK_EVERY {
            continue;
        }
        since_check = 0;
        let eval = Evaluation::with_fit(p, &x, &ax);
        residual = eval.residual;
        if residual <= cfg.tolerance {
            return finish(p, x, cfg, iter);
        }
        if !cfg.polish {
            continue;
        }
        let support: Vec<usize> = (0..n).filter(|&j| x[j] != 0.0).collect();
        let stable = last_support.as_ref() == Some(&support);
        if stable && !support.is_empty() && support.len() <= POLISH_MAX_SUPPORT {
            if polish_cooldown > 0 {
                polish_cooldown -= 1;
            } else {
                let mut improved = false;
                if let Some(c) = polish(p, &support, &x) {
                    let ac = dict.combine(&c);
                    let pe = Evaluation::with_fit(p, &c, &ac);
                    if pe.residual <= cfg.tolerance {
                        return finish(p, c, cfg, iter);
                    }
                    if pe.objective <= fx && pe.residual < residual {
                        improved = true;
                        x = c;
                        ax = ac;
                        fx = pe.objective;
                        residual = pe.residual;
                        y.copy_from_slice(&x);
                        ay.copy_from_slice(&ax);
                        theta = 1.0;
                        at_restart = true;
                        if let Some(t) = trace.as_deref_mut() {
                            t.push(fx);
                        }
                    }
                }
                if !improved {
                    polish_failures = (polish_failures + 1).min(6);
                    polish_cooldown = 1 << polish_failures;
                }
            }
        }
        last_support = Some(support);
    }

    let best = finish(p, x, cfg, cfg.max_iterations)?;
    Err(Error::MaxIterationsExceeded {
        residual,
        best: alloc::boxed::Box::new(best),
    })
}

/// Solves the optimality conditions restricted to `support` with the signs
/// of `x`: `(γA_SᵀA_S + (1−λ)I) c_S = γA_Sᵀb − λ sgn(x_S)`. Returns `None`
/// if the system is singular or the signs do not reproduce.
fn polish(p: &ElasticNetProblem<'_>, support: &[usize], x: &[f64]) -> Option<Vec<f64>> {
    let dict = p.dict();
    let (lambda, gamma) = (p.lambda(), p.gamma());
    let k = support.len();
    let mut m = vec![0.0; k * k];
    for (a, &ja) in support.iter().enumerate() {
        let col_a = dict.atom(ja);
        for (bidx, &jb) in support.iter().enumerate().skip(a) {
            let v = gamma * dot(col_a, dict.atom(jb));
            m[a * k + bidx] = v;
            m[bidx * k + a] = v;
        }
        m[a * k + a] += 1.0 - lambda;
    }
    let rhs: Vec<f64> = support
        .iter()
        .map(|&j| gamma * dot(dict.atom(j), p.b()) - lambda * x[j].signum())
        .collect();
    let cs = linalg::cholesky_solve(k, m, &rhs)?;
    let mut out = vec![0.0; x.len()];
    for (&j, &v) in support.iter().zip(&cs) {
        if v == 0.0 || v.signum() != x[j].signum() {
            return None;
        }
        out[j] = v;
    }
    Some(out)
}

/// The `λ = 0` solution `c = γAᵀ(I + γAAᵀ)⁻¹b`, whatever `λ` the problem
/// carries.
pub fn ridge_closed_form(p: &ElasticNetProblem<'_>) -> Result<Vec<f64>> {
    ridge_closed_form_with_gram(p, &p.dict().outer_gram())
}

/// [`ridge_closed_form`] with a precomputed `AAᵀ` (`D × D`, column-major).
pub fn ridge_closed_form_with_gram(p: &ElasticNetProblem<'_>, gram: &[f64]) -> Result<Vec<f64>> {
    let d = p.dict().dim();
    if gram.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: gram.len(),
        });
    }
    let gamma = p.gamma();
    let mut m: Vec<f64> = gram.iter().map(|g| gamma * g).collect();
    for i in 0..d {
        m[i * d + i] += 1.0;
    }
    let z = linalg::cholesky_solve(d, m, p.b()).ok_or(Error::SingularSystem)?;
    Ok(p.dict().correlations(&z).into_iter().map(|v| gamma * v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{normalize_columns, DenseMatrix};
    use crate::synth::random_unit_sphere;

    fn single_atom() -> Dictionary {
        normalize_columns(DenseMatrix::from_column_major(2, 1, vec![0.6, 0.8]).unwrap()).unwrap()
    }

    #[test]
    fn soft_threshold_examples() {
        assert!((soft_threshold_scalar(0.8, 0.5) - 0.3).abs() < 1e-15);
        assert!((soft_threshold_scalar(-0.8, 0.5) + 0.3).abs() < 1e-15);
        assert_eq!(soft_threshold_scalar(0.5, 0.5), 0.0);
        let v = [1.5, -0.2, 0.0, 3.0];
        assert_eq!(soft_threshold(&v, 0.0), v.to_vec());
    }

    #[test]
    fn objective_examples() {
        let d = single_atom();
        let b = [0.6, 0.8];
        let p = ElasticNetProblem::new(&b, &d, 0.5, 10.0).unwrap();
        assert!((objective(&[0.0], &p).unwrap() - 5.0).abs() < 1e-12);
        let p0 = ElasticNetProblem::new(&b, &d, 0.0, 10.0).unwrap();
        assert!((objective(&[1.0], &p0).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(objective(&[1.0, 2.0], &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn objective_matches_direct_three_term_sum() {
        let a = random_unit_sphere(6, 9, 3);
        let b = random_unit_sphere(6, 1, 4);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.5, 10.0).unwrap();
        let c: Vec<f64> = (0..9).map(|j| libm::sin(j as f64) * 0.3).collect();
        // independent evaluation: explicit row-by-row product
        let mut fit = 0.0;
        for i in 0..6 {
            let mut s = 0.0;
            for j in 0..9 {
                s += a.get(i, j) * c[j];
            }
            fit += (b.atom(0)[i] - s).powi(2);
        }
        let l1: f64 = c.iter().map(|x| x.abs()).sum();
        let l2: f64 = c.iter().map(|x| x * x).sum();
        let expected = 0.5 * l1 + 0.25 * l2 + 5.0 * fit;
        assert!((objective(&c, &p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_target_gives_zero_oracle_point() {
        let d = single_atom();
        let b = [0.0, 0.0];
        let p = ElasticNetProblem::with_unnormalized_target(&b, &d, 0.5, 10.0).unwrap();
        assert_eq!(oracle_point(&[0.0], &p).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn single_atom_closed_form() {
        // a = b: c* = T_λ(γ)/(1 − λ + γ) = 9.5 / 10.5
        let d = single_atom();
        let b = [0.6, 0.8];
        let p = ElasticNetProblem::new(&b, &d, 0.5, 10.0).unwrap();
        let s = solve_full(&p, &InnerSolverConfig::default()).unwrap();
        let expected = 9.5 / 10.5;
        assert!((s.coefficients[0] - expected).abs() < 1e-10);
        assert!((norm2(&s.oracle_point) - 10.0 / 10.5).abs() < 1e-9);
        assert!(s.optimality_residual <= 1e-10);
    }

    #[test]
    fn orthogonal_target_has_zero_solution() {
        let d = normalize_columns(DenseMatrix::from_row_major(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap()).unwrap();
        let b = [0.0, 0.0, 1.0];
        let p = ElasticNetProblem::new(&b, &d, 0.3, 5.0).unwrap();
        let s = solve_full(&p, &InnerSolverConfig::default()).unwrap();
        assert_eq!(s.coefficients, vec![0.0, 0.0]);
        assert!(s.support.is_empty());
    }

    #[test]
    fn zero_is_optimal_iff_correlations_below_lambda() {
        let a = random_unit_sphere(5, 8, 11);
        let b = random_unit_sphere(5, 1, 12);
        let max_corr = inf_norm(&a.correlations(b.atom(0)));
        let lambda = 0.5;
        let small = ElasticNetProblem::new(b.atom(0), &a, lambda, 0.9 * lambda / max_corr).unwrap();
        assert_eq!(check_optimality(&[0.0; 8], &small).unwrap(), 0.0);
        let large = ElasticNetProblem::new(b.atom(0), &a, lambda, 1.1 * lambda / max_corr).unwrap();
        assert!(check_optimality(&[0.0; 8], &large).unwrap() > 0.0);
    }

    #[test]
    fn random_instance_self_consistency() {
        let a = random_unit_sphere(20, 50, 1);
        let b = random_unit_sphere(20, 1, 2);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.5, 10.0).unwrap();
        let base = InnerSolverConfig {
            polish: false,
            ..Default::default()
        };
        let s = solve_full(&p, &base).unwrap();
        assert!(s.optimality_residual <= 1e-10);
        let tight = InnerSolverConfig {
            tolerance: 1e-13,
            max_iterations: 10 * base.max_iterations,
            ..base
        };
        let t = solve_full(&p, &tight).unwrap();
        let diff = s
            .coefficients
            .iter()
            .zip(&t.coefficients)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff <= 1e-8, "diff {diff}");
        // recompute δ from the fields and check the fixed point
        let delta = oracle_point(&s.coefficients, &p).unwrap();
        for (x, y) in delta.iter().zip(&s.oracle_point) {
            assert!((x - y).abs() <= 1e-10);
        }
        let fp = soft_threshold(&a.correlations(&delta), 0.5);
        for (c, t) in s.coefficients.iter().zip(&fp) {
            assert!((0.5 * c - t).abs() <= 1e-8);
        }
    }

    #[test]
    fn objective_trace_is_non_increasing() {
        for seed in 0..5 {
            let a = random_unit_sphere(15, 60, 100 + seed);
            let b = random_unit_sphere(15, 1, 200 + seed);
            let p = ElasticNetProblem::new(b.atom(0), &a, 0.7, 30.0).unwrap();
            let (_, trace) = solve_full_traced(&p, &InnerSolverConfig::default(), None).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] + slack(w[0]), "{} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn ridge_single_atom_and_orthonormal() {
        let d = single_atom();
        let b = [0.6, 0.8];
        let p = ElasticNetProblem::new(&b, &d, 0.7, 10.0).unwrap();
        let c = ridge_closed_form(&p).unwrap();
        assert!((c[0] - 10.0 / 11.0).abs() < 1e-14);

        let q = DenseMatrix::from_row_major(2, 2, &[0.6, -0.8, 0.8, 0.6]).unwrap();
        let d = Dictionary::from_unit_columns(q).unwrap();
        let b = [1.0, 0.0];
        let p = ElasticNetProblem::new(&b, &d, 0.2, 4.0).unwrap();
        let c = ridge_closed_form(&p).unwrap();
        for j in 0..2 {
            let expected = 4.0 * dot(d.atom(j), &b) / 5.0;
            assert!((c[j] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn ridge_is_optimal_at_lambda_zero() {
        let a = random_unit_sphere(10, 40, 5);
        let b = random_unit_sphere(10, 1, 6);
        let p = ElasticNetProblem::new(b.atom(0), &a, 0.0, 25.0).unwrap();
        let c = ridge_closed_form(&p).unwrap();
        assert!(check_optimality(&c, &p).unwrap() <= 1e-10);
    }

    #[test]
    fn region_examples() {
        let delta = vec![1.2, 0.0];
        let q = OracleRegionQuery::new(delta, 0.5).unwrap();
        assert!((q.threshold() - 0.5 / 1.2).abs() < 1e-15);
        assert!(in_oracle_region(&[1.0, 0.0], &q));
        assert!(!in_oracle_region(&[0.0, 1.0], &q));
        assert!(matches!(OracleRegionQuery::new(vec![0.0, 0.0], 0.5), Err(Error::DegenerateOracle)));
    }

    #[test]
    fn region_matches_angle_comparison_on_circle() {
        let delta = [0.9, 1.1];
        let dn = norm2(&delta);
        let lambda = 0.8;
        let q = OracleRegionQuery::new(delta.to_vec(), lambda).unwrap();
        let cap = libm::acos(lambda / dn);
        for k in 0..720 {
            let t = (k as f64 + 0.37) * core::f64::consts::PI / 360.0;
            let atom = [libm::cos(t), libm::sin(t)];
            let mu = dot(&atom, &delta).abs() / dn;
            let angle = libm::acos(mu.min(1.0));
            // skip angles numerically on the boundary
            if (angle - cap).abs() < 1e-6 {
                continue;
            }
            assert_eq!(q.contains(&atom), angle < cap, "t = {t}");
        }
    }

    #[test]
    fn boundary_band() {
        let q = OracleRegionQuery::new(vec![1.0, 0.0], 0.5).unwrap();
        let t = libm::acos(0.5);
        let atom = [libm::cos(t), libm::sin(t)];
        assert!(q.on_boundary(&atom));
        assert!(!q.contains(&atom));
    }

    #[test]
    fn dual_feasibility_scales_linearly() {
        let a = random_unit_sphere(4, 6, 9);
        assert_eq!(dual_feasibility_lambda1(&[0.0; 4], &a), 0.0);
        let delta = [0.3, -0.1, 0.2, 0.05];
        let once = dual_feasibility_lambda1(&delta, &a);
        let twice: Vec<f64> = delta.iter().map(|x| 2.0 * x).collect();
        assert!((dual_feasibility_lambda1(&twice, &a) - 2.0 * once).abs() < 1e-15);
    }

    #[test]
    fn lambda_one_solution_is_dual_feasible() {
        let a = random_unit_sphere(12, 30, 21);
        let b = random_unit_sphere(12, 1, 22);
        let p = ElasticNetProblem::new(b.atom(0), &a, 1.0, 20.0).unwrap();
        let s = solve_full(&p, &InnerSolverConfig::default()).unwrap();
        assert!(dual_feasibility_lambda1(&s.oracle_point, &a) <= 1.0 + 1e-8);
        for j in s.support.iter() {
            assert!((dot(a.atom(j), &s.oracle_point).abs() - 1.0).abs() <= 1e-7);
        }
    }
}
