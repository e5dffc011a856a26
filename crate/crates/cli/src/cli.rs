use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::commands::{self, RunContext};
use crate::config::{RunConfig, SolverKind, SynthKind};
use crate::error::CliResult;
use crate::parallel::{resolve_threads, with_threads};

#[derive(Debug, Parser)]
#[command(name = "ensc", version, about = "Elastic net active-set solver and subspace clustering")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default: ./ensc-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; falls back to ENSC_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Do not print the summary.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one elastic net problem.
    Solve(SolveArgs),
    /// Cluster the columns of a data matrix.
    Cluster(ClusterArgs),
    /// Generate synthetic data.
    Synth(SynthArgs),
    /// Run the theory check suites.
    Verify(VerifyArgs),
    /// Time the active-set solver against the full solver.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub dictionary: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Also run the full-dictionary solver and report the difference.
    #[arg(long)]
    pub full_solver: bool,
    #[arg(long)]
    pub init_size: Option<usize>,
    #[arg(long)]
    pub max_active: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long = "clusters")]
    pub n_clusters: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<SynthKind>,
    #[arg(long)]
    pub ambient_dim: Option<usize>,
    #[arg(long = "subspaces")]
    pub n_subspaces: Option<usize>,
    #[arg(long)]
    pub subspace_dim: Option<usize>,
    #[arg(long)]
    pub points_per_subspace: Option<usize>,
    #[arg(long = "points")]
    pub n_points: Option<usize>,
    #[arg(long = "noise")]
    pub noise_sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run; repeatable. Default: all.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub grid_sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub grid_lambdas: Option<Vec<f64>>,
    #[arg(long)]
    pub grid_seeds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub ambient_dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_solver)]
    pub solvers: Option<Vec<SolverKind>>,
}

fn parse_kind(s: &str) -> Result<SynthKind, String> {
    match s {
        "subspaces" => Ok(SynthKind::Subspaces),
        "unit_sphere" | "unit-sphere" => Ok(SynthKind::UnitSphere),
        _ => Err(format!("unknown kind '{s}' (subspaces, unit_sphere)")),
    }
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    match s {
        "orgen" => Ok(SolverKind::Orgen),
        "full" => Ok(SolverKind::Full),
        _ => Err(format!("unknown solver '{s}' (orgen, full)")),
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Cli {
    /// Merges the configuration file and the flags into the effective
    /// configuration.
    pub fn effective_config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        match &self.command {
            Command::Solve(a) => {
                let s = &mut cfg.solve;
                if a.dictionary.is_some() {
                    s.dictionary = a.dictionary.clone();
                }
                if a.target.is_some() {
                    s.target = a.target.clone();
                }
                set(&mut s.lambda, a.lambda);
                set(&mut s.gamma, a.gamma);
                s.full_solver |= a.full_solver;
                set(&mut s.solver.init_size, a.init_size);
                if a.max_active.is_some() {
                    s.solver.max_active = a.max_active;
                }
            }
            Command::Cluster(a) => {
                let c = &mut cfg.cluster;
                if a.data.is_some() {
                    c.data = a.data.clone();
                }
                if a.truth.is_some() {
                    c.truth = a.truth.clone();
                }
                set(&mut c.n_clusters, a.n_clusters);
                set(&mut c.lambda, a.lambda);
                set(&mut c.alpha, a.alpha);
            }
            Command::Synth(a) => {
                let s = &mut cfg.synth;
                set(&mut s.kind, a.kind);
                set(&mut s.ambient_dim, a.ambient_dim);
                set(&mut s.n_subspaces, a.n_subspaces);
                set(&mut s.subspace_dim, a.subspace_dim);
                set(&mut s.points_per_subspace, a.points_per_subspace);
                set(&mut s.n_points, a.n_points);
                set(&mut s.noise_sigma, a.noise_sigma);
            }
            Command::Verify(a) => {
                let v = &mut cfg.verify;
                if !a.suites.is_empty() {
                    v.suites = a.suites.clone();
                }
                set(&mut v.trials, a.trials);
                set(&mut v.phase_grid.n_values, a.grid_sizes.clone());
                set(&mut v.phase_grid.lambdas, a.grid_lambdas.clone());
                set(&mut v.phase_grid.seeds, a.grid_seeds);
            }
            Command::Bench(a) => {
                let b = &mut cfg.bench;
                set(&mut b.ambient_dim, a.ambient_dim);
                set(&mut b.n_values, a.sizes.clone());
                set(&mut b.lambdas, a.lambdas.clone());
                set(&mut b.gamma, a.gamma);
                set(&mut b.solvers, a.solvers.clone());
            }
        }
        Ok(cfg)
    }

    pub fn run(&self) -> CliResult<Value> {
        let config = self.effective_config()?;
        let command = match self.command {
            Command::Solve(_) => "solve",
            Command::Cluster(_) => "cluster",
            Command::Synth(_) => "synth",
            Command::Verify(_) => "verify",
            Command::Bench(_) => "bench",
        };
        let threads = resolve_threads(config.threads);
        let ctx = RunContext {
            command,
            out: config.out.clone().unwrap_or_else(|| PathBuf::from("ensc-out")),
            seed: config.seed(),
            threads,
            config,
        };
        ctx.write_manifest()?;
        let cfg = &ctx.config;
        with_threads(threads, || match self.command {
            Command::Solve(_) => commands::solve(&ctx, &cfg.solve),
            Command::Cluster(_) => commands::cluster(&ctx, &cfg.cluster),
            Command::Synth(_) => commands::synth(&ctx, &cfg.synth),
            Command::Verify(_) => commands::verify(&ctx, &cfg.verify),
            Command::Bench(_) => commands::bench(&ctx, &cfg.bench),
        })
    }
}
