//! The elastic net problem instance and its solution record.
//!
//! The objective is
//!
//! ```text
//! f(c; b, A) = λ‖c‖₁ + (1−λ)/2 ‖c‖₂² + γ/2 ‖b − Ac‖₂²
//! ```
//!
//! with unit-norm `b` and unit-norm atoms in `A`.

use alloc::vec::Vec;

use crate::elastic_net::Evaluation;
use crate::error::{Error, Result};
use crate::matrix::{norm2, Dictionary, IndexSet};
use crate::tolerances;

#[derive(Clone, Copy, Debug)]
pub struct ElasticNetProblem<'a> {
    b: &'a [f64],
    dict: &'a Dictionary,
    lambda: f64,
    gamma: f64,
}

impl<'a> ElasticNetProblem<'a> {
    pub fn new(b: &'a [f64], dict: &'a Dictionary, lambda: f64, gamma: f64) -> Result<Self> {
        let p = Self::with_unnormalized_target(b, dict, lambda, gamma)?;
        if (norm2(b) - 1.0).abs() > tolerances::NORM {
            return Err(Error::InvalidParameter("target vector must have unit norm"));
        }
        Ok(p)
    }

    /// Skips the unit-norm check on `b`. Only the solver-agnostic
    /// evaluations (objective, oracle point) are meaningful for such targets.
    pub fn with_unnormalized_target(
        b: &'a [f64],
        dict: &'a Dictionary,
        lambda: f64,
        gamma: f64,
    ) -> Result<Self> {
        if b.len() != dict.dim() {
            return Err(Error::DimensionMismatch {
                expected: dict.dim(),
                found: b.len(),
            });
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter("lambda must lie in [0, 1]"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter("gamma must be positive and finite"));
        }
        Ok(Self {
            b,
            dict,
            lambda,
            gamma,
        })
    }

    /// The same target and parameters over another dictionary.
    pub fn with_dictionary<'b>(&self, dict: &'b Dictionary) -> ElasticNetProblem<'b>
    where
        'a: 'b,
    {
        ElasticNetProblem {
            b: self.b,
            dict,
            lambda: self.lambda,
            gamma: self.gamma,
        }
    }

    /// The same target and dictionary with a different `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::with_unnormalized_target(self.b, self.dict, lambda, self.gamma)
    }

    #[inline]
    pub fn b(&self) -> &'a [f64] {
        self.b
    }

    #[inline]
    pub fn dict(&self) -> &'a Dictionary {
        self.dict
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn n_atoms(&self) -> usize {
        self.dict.len()
    }

    pub(crate) fn check_len(&self, c: &[f64]) -> Result<()> {
        if c.len() != self.dict.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dict.len(),
                found: c.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElasticNetSolution {
    pub coefficients: Vec<f64>,
    /// Exactly the indices of nonzero coefficients.
    pub support: IndexSet,
    /// `δ = γ(b − Ac)`.
    pub oracle_point: Vec<f64>,
    pub objective: f64,
    /// ∞-norm of the fixed-point defect, see [`crate::check_optimality`].
    pub optimality_residual: f64,
    pub iterations: usize,
}

impl ElasticNetSolution {
    /// Zeroes every coefficient with `|c_j| ≤ zero_threshold`, then fills in
    /// the derived fields from the cleaned vector.
    pub fn from_coefficients(
        p: &ElasticNetProblem<'_>,
        mut coefficients: Vec<f64>,
        zero_threshold: f64,
        iterations: usize,
    ) -> Result<Self> {
        p.check_len(&coefficients)?;
        for c in coefficients.iter_mut() {
            if c.abs() <= zero_threshold {
                *c = 0.0;
            }
        }
        let eval = Evaluation::new(p, &coefficients);
        Ok(Self::from_evaluation(coefficients, eval, iterations))
    }

    pub(crate) fn from_evaluation(coefficients: Vec<f64>, eval: Evaluation, iterations: usize) -> Self {
        let support = coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, _)| j)
            .collect();
        Self {
            coefficients,
            support,
            oracle_point: eval.delta,
            objective: eval.objective,
            optimality_residual: eval.residual,
            iterations,
        }
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }
}
