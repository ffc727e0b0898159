//! Seeded random states, density matrices and operators.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{self, C64};
use crate::qmetric::{dim_of, DensityMatrix, StateVector};

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard-normal amplitudes; complex ones have independent real and imaginary parts.
pub fn gaussian_amplitudes<R: Rng + ?Sized>(rng: &mut R, dim: usize, real: bool) -> Vec<C64> {
    (0..dim)
        .map(|_| {
            let re = normal(rng);
            let im = if real { 0.0 } else { normal(rng) };
            C64::new(re, im)
        })
        .collect()
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, num_sites: usize) -> Result<StateVector> {
    let dim = dim_of(num_sites)?;
    StateVector::normalized(gaussian_amplitudes(rng, dim, false), num_sites)
}

/// G G† / tr(G G†) for a Ginibre matrix G with `rank` columns (full rank by default).
pub fn random_density_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    num_sites: usize,
    rank: Option<usize>,
) -> Result<DensityMatrix> {
    let dim = dim_of(num_sites)?;
    let cols = rank.unwrap_or(dim).max(1);
    let g = Mat::from_fn(dim, cols, |_, _| C64::new(normal(rng), normal(rng)));
    let mut rho = &g * g.adjoint();
    let tr = linalg::trace(rho.as_ref()).re;
    for j in 0..dim {
        for i in 0..dim {
            rho[(i, j)] /= tr;
        }
    }
    Ok(DensityMatrix::trusted(linalg::hermitize(rho.as_ref()), num_sites))
}

/// GUE-like Hermitian matrix with unit-variance entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Mat<C64> {
    let g = Mat::from_fn(dim, dim, |_, _| C64::new(normal(rng), normal(rng)));
    linalg::hermitize(g.as_ref())
}

/// GOE-like real symmetric matrix.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Mat<f64> {
    let g = Mat::from_fn(dim, dim, |_, _| normal(rng));
    linalg::symmetrize(g.as_ref())
}
