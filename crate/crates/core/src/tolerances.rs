//! Numerical tolerances shared by every module.
//!
//! Each config record that needs one of these copies the default from here,
//! so a run can override any of them without touching global state.

/// Columns and target vectors must have unit ℓ2 norm within this distance.
pub const NORM: f64 = 1e-12;

/// Default acceptance threshold for the optimality residual of a solution.
pub const OPTIMALITY: f64 = 1e-8;

/// Default stopping tolerance of the inner solver (fixed-point residual).
pub const SOLVER: f64 = 1e-10;

/// Coefficients with magnitude at or below this value are set to exactly zero.
pub const ZERO_COEFFICIENT: f64 = 1e-9;

/// Width of the band around the oracle region boundary that counts as
/// "on the boundary" rather than strictly inside.
pub const REGION_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub norm: f64,
    pub optimality: f64,
    pub solver: f64,
    pub zero_coefficient: f64,
    pub region_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: NORM,
            optimality: OPTIMALITY,
            solver: SOLVER,
            zero_coefficient: ZERO_COEFFICIENT,
            region_band: REGION_BAND,
        }
    }
}
