//! Normalized spectral clustering and clustering accuracy.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::max_weight_matching;
use crate::ensc::Affinity;
use crate::error::{Error, Result};
use crate::linalg;
use crate::seed::derive_seed;

pub const KMEANS_RESTARTS: usize = 20;
pub const KMEANS_MAX_ITERATIONS: usize = 300;
pub const KMEANS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringResult {
    /// One label in `0..n_clusters` per point.
    pub labels: Vec<usize>,
    pub n_clusters: usize,
    pub kmeans_inertia: f64,
    /// `μ_{n+1} − μ_n` of the normalized Laplacian; 0 when `n = N`.
    pub eigengap: f64,
    /// Bottom `n` Laplacian eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Largest `‖Lv − μv‖₂` over the bottom eigenpairs.
    pub eigen_residual: f64,
    /// Set when the affinity is empty or some cluster ended up empty.
    pub degenerate: bool,
}

/// Symmetric normalized Laplacian `I − D^{-1/2} W D^{-1/2}` as a dense
/// column-major buffer. Zero-degree vertices get unit degree.
pub fn normalized_laplacian(w: &Affinity) -> Vec<f64> {
    let n = w.n();
    let scale: Vec<f64> = w
        .degrees()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / libm::sqrt(d) } else { 1.0 })
        .collect();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        l[i * n + i] = 1.0;
    }
    for &(i, j, v) in w.triplets() {
        l[j * n + i] -= scale[i] * v * scale[j];
    }
    l
}

/// Spectral clustering into `n_clusters` groups. Deterministic in `seed`.
pub fn spectral_cluster(w: &Affinity, n_clusters: usize, seed: u64) -> Result<ClusteringResult> {
    let n_points = w.n();
    if n_clusters < 2 {
        return Err(Error::InvalidParameter("at least two clusters are required"));
    }
    if n_clusters > n_points {
        return Err(Error::InvalidParameter("more clusters than points"));
    }
    if w.triplets().is_empty() {
        return Ok(ClusteringResult {
            labels: vec![0; n_points],
            n_clusters,
            kmeans_inertia: 0.0,
            eigengap: 0.0,
            eigenvalues: vec![1.0; n_clusters],
            eigen_residual: 0.0,
            degenerate: true,
        });
    }

    let lap = normalized_laplacian(w);
    let (values, vectors) =
        linalg::symmetric_eigen(n_points, lap.clone()).ok_or(Error::EigenSolverFailure)?;
    let eigen_residual = (0..n_clusters)
        .map(|k| eigen_residual(n_points, &lap, values[k], &vectors[k * n_points..(k + 1) * n_points]))
        .fold(0.0, f64::max);
    let eigengap = if n_clusters < n_points {
        values[n_clusters] - values[n_clusters - 1]
    } else {
        0.0
    };

    // row-major embedding, one row per point
    let mut embedding = vec![0.0; n_points * n_clusters];
    for k in 0..n_clusters {
        for i in 0..n_points {
            embedding[i * n_clusters + k] = vectors[k * n_points + i];
        }
    }
    for row in embedding.chunks_mut(n_clusters) {
        let norm = libm::sqrt(row.iter().map(|x| x * x).sum::<f64>());
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        }
    }

    let km = kmeans(&embedding, n_clusters, n_clusters, seed);
    let mut counts = vec![0usize; n_clusters];
    km.labels.iter().for_each(|&l| counts[l] += 1);
    Ok(ClusteringResult {
        labels: km.labels,
        n_clusters,
        kmeans_inertia: km.inertia,
        eigengap,
        eigenvalues: values[..n_clusters].to_vec(),
        eigen_residual,
        degenerate: counts.contains(&0),
    })
}

fn eigen_residual(n: usize, m: &[f64], mu: f64, v: &[f64]) -> f64 {
    let mut r = vec![0.0; n];
    for (j, &vj) in v.iter().enumerate() {
        if vj != 0.0 {
            for (ri, &mij) in r.iter_mut().zip(&m[j * n..(j + 1) * n]) {
                *ri += mij * vj;
            }
        }
    }
    libm::sqrt(r.iter().zip(v).map(|(a, b)| (a - mu * b) * (a - mu * b)).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    /// Row-major `k × dim`.
    pub centers: Vec<f64>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// k-means with k-means++ seeding; the best of [`KMEANS_RESTARTS`] runs by
/// inertia. `points` is row-major with `dim` columns.
pub fn kmeans(points: &[f64], dim: usize, k: usize, seed: u64) -> KMeansResult {
    let mut best: Option<KMeansResult> = None;
    for r in 0..KMEANS_RESTARTS {
        let run = kmeans_single(points, dim, k, derive_seed(seed, &[r as u64]));
        if best.as_ref().map_or(true, |b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    best.expect("at least one restart")
}

fn kmeans_single(points: &[f64], dim: usize, k: usize, seed: u64) -> KMeansResult {
    let n = points.len() / dim;
    let row = |i: usize| &points[i * dim..(i + 1) * dim];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // k-means++ seeding
    let mut centers = Vec::with_capacity(k * dim);
    let first = rng.random_range(0..n);
    centers.extend_from_slice(row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(row(i), row(first))).collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.extend_from_slice(row(pick));
        for i in 0..n {
            d2[i] = d2[i].min(sq_dist(row(i), row(pick)));
        }
    }

    let mut labels = vec![0usize; n];
    let mut inertia = f64::INFINITY;
    for _ in 0..KMEANS_MAX_ITERATIONS {
        let mut next_inertia = 0.0;
        let mut dists = vec![0.0; n];
        for i in 0..n {
            let (mut bl, mut bd) = (0, f64::INFINITY);
            for c in 0..k {
                let d = sq_dist(row(i), &centers[c * dim..(c + 1) * dim]);
                if d < bd {
                    bl = c;
                    bd = d;
                }
            }
            labels[i] = bl;
            dists[i] = bd;
            next_inertia += bd;
        }

        let mut sums = vec![0.0; k * dim];
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for (s, x) in sums[labels[i] * dim..(labels[i] + 1) * dim].iter_mut().zip(row(i)) {
                *s += x;
            }
        }
        let mut shift = 0.0;
        for c in 0..k {
            let new_center: Vec<f64> = if counts[c] > 0 {
                sums[c * dim..(c + 1) * dim].iter().map(|s| s / counts[c] as f64).collect()
            } else {
                // empty cluster: move to the point farthest from its center
                let far = (0..n)
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)))
                    .unwrap_or(0);
                dists[far] = 0.0;
                row(far).to_vec()
            };
            shift += sq_dist(&centers[c * dim..(c + 1) * dim], &new_center);
            centers[c * dim..(c + 1) * dim].copy_from_slice(&new_center);
        }
        let converged = shift <= KMEANS_TOLERANCE || (inertia - next_inertia).abs() <= KMEANS_TOLERANCE;
        inertia = next_inertia;
        if converged {
            break;
        }
    }
    // final assignment against the final centers
    inertia = 0.0;
    for i in 0..n {
        let (mut bl, mut bd) = (0, f64::INFINITY);
        for c in 0..k {
            let d = sq_dist(row(i), &centers[c * dim..(c + 1) * dim]);
            if d < bd {
                bl = c;
                bd = d;
            }
        }
        labels[i] = bl;
        inertia += bd;
    }
    KMeansResult {
        labels,
        centers,
        inertia,
    }
}

/// Best match rate between predicted labels and ground truth over all
/// one-to-one relabelings.
pub fn clustering_accuracy(labels: &[usize], truth: &[usize]) -> Result<f64> {
    if labels.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: truth.len(),
        });
    }
    if labels.is_empty() {
        return Ok(1.0);
    }
    let compact = |v: &[usize]| {
        let mut map = BTreeMap::new();
        for &x in v {
            let next = map.len();
            map.entry(x).or_insert(next);
        }
        let ids: Vec<usize> = v.iter().map(|x| map[x]).collect();
        (ids, map.len())
    };
    let (l, nl) = compact(labels);
    let (t, nt) = compact(truth);
    let mut confusion = vec![0.0; nl * nt];
    for (&a, &b) in l.iter().zip(&t) {
        confusion[a * nt + b] += 1.0;
    }
    Ok(max_weight_matching(nl, nt, &confusion) / labels.len() as f64)
}
