//! Synthetic data: random unit vectors and unions of random subspaces.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{norm2, DenseMatrix, Dictionary};

fn gaussian_unit(rng: &mut ChaCha8Rng, dim: usize, out: &mut Vec<f64>) {
    loop {
        let start = out.len();
        for _ in 0..dim {
            out.push(rng.sample::<f64, _>(StandardNormal));
        }
        let n = norm2(&out[start..]);
        if n > 1e-8 {
            out[start..].iter_mut().for_each(|x| *x /= n);
            return;
        }
        out.truncate(start);
    }
}

/// `n` vectors drawn uniformly from the unit sphere of `R^dim` (normalized
/// Gaussians).
///
/// # Panics
/// If `dim == 0`.
pub fn random_unit_sphere(dim: usize, n: usize, seed: u64) -> Dictionary {
    assert!(dim > 0, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(dim * n);
    for _ in 0..n {
        gaussian_unit(&mut rng, dim, &mut data);
    }
    let m = DenseMatrix::from_column_major(dim, n, data).expect("finite by construction");
    Dictionary::from_unit_columns(m).expect("unit by construction")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceConfig {
    pub ambient_dim: usize,
    /// Dimension of each subspace.
    pub dims: Vec<usize>,
    /// Number of points drawn from each subspace.
    pub points_per: Vec<usize>,
    /// Standard deviation of ambient Gaussian noise added before
    /// renormalization; 0 for noiseless data.
    pub noise_sigma: f64,
}

impl SubspaceConfig {
    /// `n_subspaces` subspaces of equal dimension sharing `total_points`
    /// as evenly as possible.
    pub fn uniform(ambient_dim: usize, n_subspaces: usize, dim: usize, total_points: usize) -> Self {
        let base = total_points / n_subspaces.max(1);
        let extra = total_points % n_subspaces.max(1);
        Self {
            ambient_dim,
            dims: alloc::vec![dim; n_subspaces],
            points_per: (0..n_subspaces).map(|l| base + usize::from(l < extra)).collect(),
            noise_sigma: 0.0,
        }
    }

    pub fn total_points(&self) -> usize {
        self.points_per.iter().sum()
    }

    fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::InvalidDims("at least one subspace is required"));
        }
        if self.dims.len() != self.points_per.len() {
            return Err(Error::InvalidDims("dims and points_per differ in length"));
        }
        if self.dims.iter().any(|&d| d == 0 || d >= self.ambient_dim) {
            return Err(Error::InvalidDims("each subspace dimension must satisfy 1 <= d < D"));
        }
        if self.points_per.contains(&0) {
            return Err(Error::InvalidDims("each subspace needs at least one point"));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidParameter("noise_sigma must be finite and nonnegative"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SubspaceDataset {
    /// Unit-norm points, grouped by subspace.
    pub data: Dictionary,
    pub truth: Vec<usize>,
    /// Orthonormal bases, `D × d_ℓ` each.
    pub bases: Vec<DenseMatrix>,
    pub config: SubspaceConfig,
    pub seed: u64,
    /// `Σ d_ℓ ≤ D`: generic random subspaces are then independent.
    pub independent: bool,
}

impl SubspaceDataset {
    pub fn n_subspaces(&self) -> usize {
        self.bases.len()
    }

    /// `‖(I − UUᵀ)x‖₂` for point `j` and its own basis.
    pub fn containment_residual(&self, j: usize) -> f64 {
        projection_residual(&self.bases[self.truth[j]], self.data.atom(j))
    }
}

/// `‖(I − UUᵀ)x‖₂` for orthonormal `U`.
pub fn projection_residual(basis: &DenseMatrix, x: &[f64]) -> f64 {
    let coords = basis.transpose_mul(x);
    let proj = basis.mul(&coords);
    let r: Vec<f64> = x.iter().zip(&proj).map(|(a, b)| a - b).collect();
    norm2(&r)
}

/// Random union of subspaces: orthonormal bases from QR of Gaussian
/// matrices, points as basis times a uniform unit vector of the subspace.
pub fn random_subspaces(config: &SubspaceConfig, seed: u64) -> Result<SubspaceDataset> {
    config.validate()?;
    let dim = config.ambient_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut bases = Vec::with_capacity(config.dims.len());
    for &d in &config.dims {
        let g: Vec<f64> = (0..dim * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let q = linalg::thin_q(dim, d, g);
        bases.push(DenseMatrix::from_column_major(dim, d, q)?);
    }

    let total = config.total_points();
    let mut data = Vec::with_capacity(total * dim);
    let mut truth = Vec::with_capacity(total);
    let mut coords = Vec::new();
    for (label, (basis, &count)) in bases.iter().zip(&config.points_per).enumerate() {
        for _ in 0..count {
            coords.clear();
            gaussian_unit(&mut rng, basis.cols(), &mut coords);
            let mut x = basis.mul(&coords);
            if config.noise_sigma > 0.0 {
                for xi in x.iter_mut() {
                    *xi += config.noise_sigma * rng.sample::<f64, _>(StandardNormal);
                }
                let n = norm2(&x);
                x.iter_mut().for_each(|v| *v /= n);
            }
            data.extend_from_slice(&x);
            truth.push(label);
        }
    }
    let m = DenseMatrix::from_column_major(dim, total, data)?;
    // QR output is orthonormal to ~1e-16, so points are unit within tolerance
    let data = crate::matrix::normalize_columns(m)?;
    Ok(SubspaceDataset {
        data,
        truth,
        bases,
        independent: config.dims.iter().sum::<usize>() <= dim,
        config: config.clone(),
        seed,
    })
}
