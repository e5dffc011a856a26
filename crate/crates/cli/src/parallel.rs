//! Parallel drivers. Work items are independent and collected in index
//! order, so results do not depend on the number of workers.

use ensc_core::ensc::{self_expressive_column, SelfExpressiveModel};
use ensc_core::theory::{phase_column, PhaseCell, PhaseGridConfig, PhaseGridResult};
use ensc_core::{random_subspaces, Dictionary, EnscConfig, Error, Result};
use rayon::prelude::*;

/// Worker count: explicit value, else `ENSC_THREADS`, else all cores.
pub fn resolve_threads(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var("ENSC_THREADS").ok()?.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` on a dedicated pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Self-expressive coefficients for every column, columns in parallel.
pub fn par_self_expressive(data: &Dictionary, cfg: &EnscConfig) -> Result<SelfExpressiveModel> {
    cfg.validate()?;
    if data.len() < 2 {
        return Err(Error::InvalidParameter("self-expression needs at least two points"));
    }
    let gram = data.outer_gram();
    let results = (0..data.len())
        .into_par_iter()
        .map(|j| self_expressive_column(data, &gram, j, cfg))
        .collect();
    Ok(SelfExpressiveModel::assemble(cfg, results))
}

/// Phase grid with every `(point, λ)` pair of a data set solved in
/// parallel. Each data set is generated once and shared by all `λ`.
pub fn par_phase_grid(cfg: &PhaseGridConfig) -> Result<PhaseGridResult> {
    cfg.validate()?;
    let n_lambda = cfg.lambdas.len();
    let mut cells = Vec::with_capacity(cfg.n_values.len() * n_lambda);
    for &n in &cfg.n_values {
        let mut per_lambda: Vec<Vec<_>> = (0..n_lambda).map(|_| Vec::with_capacity(n * cfg.seeds)).collect();
        for trial in 0..cfg.seeds {
            let ds = random_subspaces(&cfg.subspace_config(n), cfg.dataset_seed(n, trial))?;
            let outcomes: Vec<_> = (0..n_lambda * n)
                .into_par_iter()
                .map(|k| phase_column(&ds.data, &ds.truth, k % n, cfg.lambdas[k / n], cfg.alpha))
                .collect();
            for (k, o) in outcomes.into_iter().enumerate() {
                per_lambda[k / n].push(o);
            }
        }
        for (li, outcomes) in per_lambda.iter().enumerate() {
            cells.push(PhaseCell::from_outcomes(n, cfg.lambdas[li], cfg.seeds, outcomes));
        }
    }
    Ok(PhaseGridResult {
        config: cfg.clone(),
        cells,
    })
}
