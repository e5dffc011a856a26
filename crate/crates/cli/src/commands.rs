//! The five subcommands. Each writes its artifacts into the output
//! directory and returns a JSON summary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ensc_core::elastic_net::{solve_full, InnerSolverConfig};
use ensc_core::seed::derive_seed;
use ensc_core::theory::PhaseGridConfig;
use ensc_core::tolerances;
use ensc_core::{
    build_affinity, clustering_accuracy, normalize_columns, orgen_solve, random_subspaces, random_unit_sphere,
    spectral_cluster, ElasticNetProblem, EnscConfig, OrgenConfig, SubspaceConfig,
};
use serde_json::{json, Value};

use crate::config::{
    BenchConfig, ClusterConfig, RunConfig, SolveConfig, SolverKind, SynthConfig, SynthKind, VerifyConfig,
};
use crate::error::{CliError, CliResult};
use crate::io;
use crate::parallel::par_self_expressive;
use crate::verify;

/// Output directory, seed and effective configuration of one run.
pub struct RunContext {
    pub command: &'static str,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub config: RunConfig,
}

impl RunContext {
    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// `manifest.json`: command, library version, seed and config hash.
    pub fn write_manifest(&self) -> CliResult<()> {
        io::write_json(
            &self.path("manifest.json"),
            &json!({
                "command": self.command,
                "version": env!("CARGO_PKG_VERSION"),
                "seed": self.seed,
                "threads": self.threads,
                "config_sha256": self.config.hash(),
                "config": self.config,
            }),
        )
    }
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str) -> CliResult<&'a Path> {
    p.as_deref()
        .ok_or_else(|| CliError::Config(format!("{what} is required")))
}

fn orgen_config(settings: &crate::config::SolverSettings, base: OrgenConfig, lambda: f64) -> OrgenConfig {
    let mut c = settings.apply(base);
    c.lambda_one_mode = lambda == 1.0;
    c
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

pub fn solve(ctx: &RunContext, cfg: &SolveConfig) -> CliResult<Value> {
    let dict = normalize_columns(io::read_matrix(required(&cfg.dictionary, "solve.dictionary")?)?)?;
    let target_path = required(&cfg.target, "solve.target")?;
    let raw = io::read_vector(target_path)?;
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(ensc_core::Error::ZeroVector.into());
    }
    let b: Vec<f64> = if (norm - 1.0).abs() > tolerances::NORM {
        raw.iter().map(|x| x / norm).collect()
    } else {
        raw
    };
    let p = ElasticNetProblem::new(&b, &dict, cfg.lambda, cfg.gamma)?;
    let ocfg = orgen_config(&cfg.solver, OrgenConfig::exact(), cfg.lambda);

    let start = Instant::now();
    let (sol, trace) = orgen_solve(&p, &ocfg)?;
    let seconds = start.elapsed().as_secs_f64();

    io::write_vector_csv(&ctx.path("coefficients.csv"), "coefficient", &sol.coefficients)?;
    io::write_trace(&ctx.path("trace.csv"), &trace)?;
    let mut summary = json!({
        "solver": "orgen",
        "lambda": cfg.lambda,
        "gamma": cfg.gamma,
        "N": dict.len(),
        "D": dict.dim(),
        "objective": sol.objective,
        "residual": sol.optimality_residual,
        "support_size": sol.support_size(),
        "outer_iterations": trace.outer_iterations(),
        "seconds": seconds,
        "dictionary_normalized": dict.was_normalized(),
        "target_normalized": (norm - 1.0).abs() > tolerances::NORM,
    });
    if cfg.full_solver {
        let inner = InnerSolverConfig {
            tolerance: cfg.solver.inner_tolerance,
            max_iterations: cfg.solver.inner_max_iterations,
            ..InnerSolverConfig::default()
        };
        let t = Instant::now();
        let full = solve_full(&p, &inner)?;
        let diff = max_abs_diff(&sol.coefficients, &full.coefficients);
        summary["full_solver"] = json!({
            "seconds": t.elapsed().as_secs_f64(),
            "objective": full.objective,
            "residual": full.optimality_residual,
            "support_size": full.support_size(),
            "max_abs_diff": diff,
            "within_1e-6": diff <= 1e-6,
        });
    }
    io::write_json(&ctx.path("summary.json"), &summary)?;
    if sol.optimality_residual > tolerances::OPTIMALITY {
        return Err(CliError::NotConverged {
            residual: sol.optimality_residual,
            tolerance: tolerances::OPTIMALITY,
        });
    }
    Ok(summary)
}

pub fn cluster(ctx: &RunContext, cfg: &ClusterConfig) -> CliResult<Value> {
    let data = normalize_columns(io::read_matrix(required(&cfg.data, "cluster.data")?)?)?;
    let n_points = data.len();
    let truth = match &cfg.truth {
        Some(p) => {
            let t = io::read_labels(p)?;
            if t.len() != n_points {
                return Err(CliError::parse(p, format!("{} labels for {n_points} points", t.len())));
            }
            Some(t)
        }
        None => None,
    };
    if cfg.n_clusters == 0 {
        return Err(CliError::Config("cluster.n_clusters must be at least 1".into()));
    }

    let ecfg = EnscConfig {
        orgen: orgen_config(&cfg.solver, OrgenConfig::clustering(), cfg.lambda),
        ..EnscConfig::new(cfg.lambda, cfg.alpha)
    };
    let start = Instant::now();
    let model = par_self_expressive(&data, &ecfg)?;
    let affinity = build_affinity(&model);
    let affinity_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let (labels, degenerate, eigengap) = if cfg.n_clusters == 1 {
        (vec![0; n_points], true, 0.0)
    } else {
        let r = spectral_cluster(&affinity, cfg.n_clusters, ctx.seed)?;
        (r.labels, r.degenerate, r.eigengap)
    };
    let spectral_seconds = start.elapsed().as_secs_f64();

    io::write_labels(&ctx.path("labels.csv"), &labels)?;
    io::write_affinity(&ctx.path("affinity.csv"), &affinity)?;
    let mut summary = json!({
        "n": cfg.n_clusters,
        "N": n_points,
        "seed": ctx.seed,
        "lambda": cfg.lambda,
        "alpha": cfg.alpha,
        "degenerate": degenerate,
        "eigengap": eigengap,
        "average_support_size": model.average_support_size(),
        "failed_columns": model.failures.iter().map(|f| json!({"column": f.column, "code": f.code})).collect::<Vec<_>>(),
        "timing": { "affinity_seconds": affinity_seconds, "spectral_seconds": spectral_seconds },
    });
    if let Some(t) = truth {
        let accuracy = clustering_accuracy(&labels, &t)?;
        summary["accuracy"] = json!(accuracy);
        io::write_json(
            &ctx.path("accuracy.json"),
            &json!({ "accuracy": accuracy, "n": cfg.n_clusters, "N": n_points, "seed": ctx.seed }),
        )?;
    }
    io::write_json(&ctx.path("summary.json"), &summary)?;
    Ok(summary)
}

pub fn synth(ctx: &RunContext, cfg: &SynthConfig) -> CliResult<Value> {
    let (matrix, sidecar) = match cfg.kind {
        SynthKind::Subspaces => {
            let sc = SubspaceConfig {
                noise_sigma: cfg.noise_sigma,
                ..SubspaceConfig::uniform(
                    cfg.ambient_dim,
                    cfg.n_subspaces,
                    cfg.subspace_dim,
                    cfg.n_subspaces * cfg.points_per_subspace,
                )
            };
            let ds = random_subspaces(&sc, ctx.seed)?;
            let sidecar = json!({
                "kind": "subspaces",
                "seed": ctx.seed,
                "config": cfg,
                "independent": ds.independent,
                "labels": ds.truth,
            });
            (ds.data.into_matrix(), sidecar)
        }
        SynthKind::UnitSphere => {
            if cfg.ambient_dim == 0 {
                return Err(CliError::Config("synth.ambient_dim must be positive".into()));
            }
            let d = random_unit_sphere(cfg.ambient_dim, cfg.n_points, ctx.seed);
            (d.into_matrix(), json!({ "kind": "unit_sphere", "seed": ctx.seed, "config": cfg }))
        }
    };
    io::write_matrix_binary(&ctx.path("data.bin"), &matrix)?;
    io::write_json(&ctx.path("data.json"), &sidecar)?;
    if let Some(labels) = sidecar.get("labels") {
        let labels: Vec<usize> = serde_json::from_value(labels.clone()).expect("labels");
        io::write_labels(&ctx.path("labels.csv"), &labels)?;
    }
    Ok(json!({ "D": matrix.rows(), "N": matrix.cols(), "seed": ctx.seed, "kind": sidecar["kind"] }))
}

pub fn verify(ctx: &RunContext, cfg: &VerifyConfig) -> CliResult<Value> {
    let mut reports = Vec::new();
    for suite in &cfg.suites {
        let report = match suite.as_str() {
            "remark" => verify::remark_suite()?,
            "lemma-c2" => verify::lemma_c2_suite(cfg.trials, derive_seed(ctx.seed, &[1]))?,
            "theorem2" => verify::theorem2_suite(cfg.trials.min(20), derive_seed(ctx.seed, &[2]))?,
            "lambda-one" => verify::lambda_one_suite(cfg.trials.min(20), derive_seed(ctx.seed, &[3]))?,
            "phase-grid" => {
                let s = &cfg.phase_grid;
                let pg = PhaseGridConfig {
                    ambient_dim: s.ambient_dim,
                    n_subspaces: s.n_subspaces,
                    subspace_dim: s.subspace_dim,
                    n_values: s.n_values.clone(),
                    lambdas: s.lambdas.clone(),
                    seeds: s.seeds,
                    master_seed: ctx.seed,
                    alpha: s.alpha,
                };
                let (report, grid) = verify::phase_grid_suite(&pg)?;
                io::write_atomic(&ctx.path("phase_grid.csv"), io::phase_grid_csv(&grid).as_bytes())?;
                report
            }
            other => return Err(CliError::Config(format!("unknown verify suite '{other}'"))),
        };
        reports.push(report);
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.clone()).collect();
    let report = json!({ "seed": ctx.seed, "passed": failed.is_empty(), "suites": reports });
    io::write_json(&ctx.path("theory_report.json"), &report)?;
    if !failed.is_empty() {
        return Err(CliError::Verification(failed));
    }
    Ok(report)
}

pub fn bench(ctx: &RunContext, cfg: &BenchConfig) -> CliResult<Value> {
    let mut rows = Vec::new();
    for &n in &cfg.n_values {
        let dict = random_unit_sphere(cfg.ambient_dim, n, derive_seed(ctx.seed, &[n as u64, 0]));
        let b = random_unit_sphere(cfg.ambient_dim, 1, derive_seed(ctx.seed, &[n as u64, 1]));
        for &lambda in &cfg.lambdas {
            let p = ElasticNetProblem::new(b.atom(0), &dict, lambda, cfg.gamma)?;
            for solver in &cfg.solvers {
                let ocfg = orgen_config(&cfg.solver, OrgenConfig::exact(), lambda);
                let start = Instant::now();
                let (support, outer) = match solver {
                    SolverKind::Orgen => {
                        let (s, t) = orgen_solve(&p, &ocfg)?;
                        (s.support_size(), t.outer_iterations())
                    }
                    SolverKind::Full => (solve_full(&p, &ocfg.inner)?.support_size(), 0),
                };
                rows.push(io::BenchRow {
                    n,
                    lambda,
                    solver: match solver {
                        SolverKind::Orgen => "orgen".into(),
                        SolverKind::Full => "full".into(),
                    },
                    seconds: start.elapsed().as_secs_f64(),
                    support,
                    outer_iters: outer,
                });
            }
        }
    }
    io::write_atomic(&ctx.path("bench.csv"), io::bench_csv(&rows).as_bytes())?;
    Ok(json!({ "rows": rows }))
}
