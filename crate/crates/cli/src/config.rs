//! Run configuration: a JSON document with one optional section per
//! command. Command-line flags override the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default)]
    pub solve: SolveConfig,
    #[serde(default)]
    pub cluster: ClusterConfig,
    #[serde(default)]
    pub synth: SynthConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub bench: BenchConfig,
}

/// Settings of the active-set solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub init_size: usize,
    pub max_active: Option<usize>,
    pub max_outer_iterations: usize,
    pub inner_tolerance: f64,
    pub inner_max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let d = ensc_core::OrgenConfig::exact();
        Self {
            init_size: d.init_size,
            max_active: d.max_active,
            max_outer_iterations: d.max_outer_iterations,
            inner_tolerance: d.inner.tolerance,
            inner_max_iterations: d.inner.max_iterations,
        }
    }
}

impl SolverSettings {
    pub fn clustering() -> Self {
        let d = ensc_core::OrgenConfig::clustering();
        Self {
            init_size: d.init_size,
            max_active: d.max_active,
            max_outer_iterations: d.max_outer_iterations,
            ..Self::default()
        }
    }

    pub fn apply(&self, base: ensc_core::OrgenConfig) -> ensc_core::OrgenConfig {
        let mut c = base;
        c.init_size = self.init_size;
        c.max_active = self.max_active;
        c.max_outer_iterations = self.max_outer_iterations;
        c.inner.tolerance = self.inner_tolerance;
        c.inner.max_iterations = self.inner_max_iterations;
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveConfig {
    /// Dictionary `A` (columns are atoms).
    pub dictionary: Option<PathBuf>,
    /// Target vector `b`.
    pub target: Option<PathBuf>,
    pub lambda: f64,
    pub gamma: f64,
    /// Also run the full-dictionary solver and report the difference.
    pub full_solver: bool,
    pub solver: SolverSettings,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            dictionary: None,
            target: None,
            lambda: 0.9,
            gamma: 50.0,
            full_solver: false,
            solver: SolverSettings::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClusterConfig {
    /// Data matrix, one point per column.
    pub data: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub n_clusters: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub solver: SolverSettings,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            data: None,
            truth: None,
            n_clusters: 2,
            lambda: 0.95,
            alpha: 3.0,
            solver: SolverSettings::clustering(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    Subspaces,
    UnitSphere,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub kind: SynthKind,
    pub ambient_dim: usize,
    pub n_subspaces: usize,
    pub subspace_dim: usize,
    pub points_per_subspace: usize,
    /// Number of points for `unit_sphere`.
    pub n_points: usize,
    pub noise_sigma: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            kind: SynthKind::Subspaces,
            ambient_dim: 20,
            n_subspaces: 4,
            subspace_dim: 4,
            points_per_subspace: 200,
            n_points: 1000,
            noise_sigma: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Any of `remark`, `lemma-c2`, `theorem2`, `lambda-one`, `phase-grid`.
    pub suites: Vec<String>,
    pub trials: usize,
    pub phase_grid: PhaseGridSettings,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suites: ["remark", "lemma-c2", "theorem2", "lambda-one", "phase-grid"]
                .map(String::from)
                .to_vec(),
            trials: 100,
            phase_grid: PhaseGridSettings::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseGridSettings {
    pub n_values: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub seeds: usize,
    pub alpha: f64,
    pub ambient_dim: usize,
    pub n_subspaces: usize,
    pub subspace_dim: usize,
}

impl Default for PhaseGridSettings {
    /// Small 2 × 2 grid.
    fn default() -> Self {
        let s = ensc_core::theory::PhaseGridConfig::standard(vec![100, 200], vec![0.6, 0.99], 3);
        Self {
            n_values: s.n_values,
            lambdas: s.lambdas,
            seeds: s.seeds,
            alpha: s.alpha,
            ambient_dim: s.ambient_dim,
            n_subspaces: s.n_subspaces,
            subspace_dim: s.subspace_dim,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Orgen,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchConfig {
    pub ambient_dim: usize,
    pub n_values: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub gamma: f64,
    pub solvers: Vec<SolverKind>,
    pub solver: SolverSettings,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ambient_dim: 100,
            n_values: vec![5000],
            lambdas: vec![0.9],
            gamma: 50.0,
            solvers: vec![SolverKind::Orgen, SolverKind::Full],
            solver: SolverSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str, path: &Path) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::parse(path, e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("serializable config");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
