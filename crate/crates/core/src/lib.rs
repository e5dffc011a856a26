//! Elastic net regression via oracle-guided active sets, and elastic net
//! subspace clustering built on top of it.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, parallel drivers
//! and the command line live in the `ensc-cli` companion crate.
//!
//! Module map:
//!
//! - [`matrix`] and [`problem`]: column-major dense storage, unit-norm
//!   dictionaries, index sets, and the problem/solution records.
//! - [`elastic_net`]: objective, optimality residual, oracle point and
//!   region, the full-dictionary accelerated proximal gradient solver.
//! - [`orgen`]: the active-set driver that only ever solves reduced problems.
//! - [`ensc`]: self-expressive coefficients with the `γ = α·γ₀` rule, and the
//!   affinity graph.
//! - [`spectral`]: normalized spectral clustering and clustering accuracy.
//! - [`theory`]: checks of the geometric guarantees (oracle-point bounds,
//!   subspace-preserving conditions, phase grids).
//! - [`synth`]: union-of-subspaces and unit-sphere data generators.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod assignment;
pub mod elastic_net;
pub mod ensc;
pub mod error;
mod linalg;
pub mod matrix;
pub mod orgen;
pub mod problem;
pub mod seed;
pub mod spectral;
pub mod synth;
pub mod theory;
pub mod tolerances;

pub use elastic_net::{
    check_optimality, dual_feasibility_lambda1, objective, oracle_point, ridge_closed_form,
    soft_threshold, solve_full, InnerSolverConfig, OracleRegionQuery,
};
pub use ensc::{build_affinity, gamma_zero, self_expressive, Affinity, EnscConfig, SelfExpressiveModel};
pub use error::{Error, Result};
pub use matrix::{coherence, normalize_columns, DenseMatrix, Dictionary, IndexSet};
pub use orgen::{orgen_solve, OrgenConfig, OrgenTrace};
pub use problem::{ElasticNetProblem, ElasticNetSolution};
pub use spectral::{clustering_accuracy, spectral_cluster, ClusteringResult};
pub use synth::{random_subspaces, random_unit_sphere, SubspaceConfig, SubspaceDataset};
pub use tolerances::Tolerances;
