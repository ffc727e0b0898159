//! Thin wrappers over `faer` for the Hermitian/symmetric kernels used everywhere else.
//!
//! Every routine that feeds a matrix function Hermitizes its input as `(M + M†)/2`
//! first, so roundoff asymmetry never leaks into eigenvalues.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, MatRef, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub fn hermitize(m: MatRef<'_, C64>) -> Mat<C64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

pub fn symmetrize(m: MatRef<'_, f64>) -> Mat<f64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Largest elementwise |M - M†|.
pub fn hermitian_defect(m: MatRef<'_, C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn symmetric_defect(m: MatRef<'_, f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    let h = hermitize(m);
    h.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Eigen)
}

/// Ascending eigenvalues and unitary eigenvectors (columns) of the Hermitian part of `m`.
pub fn hermitian_eigen(m: MatRef<'_, C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let h = hermitize(m);
    let evd = h.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
    let vals = (0..h.nrows()).map(|i| evd.S()[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

pub fn symmetric_eigen(m: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let s = symmetrize(m);
    let evd = s.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
    let vals = (0..s.nrows()).map(|i| evd.S()[i]).collect();
    Ok((vals, evd.U().to_owned()))
}

pub fn symmetric_eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    symmetrize(m)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::Eigen)
}

pub fn singular_values(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    m.singular_values().map_err(|_| Error::Eigen)
}

/// Trace norm of a Hermitian matrix (sum of absolute eigenvalues).
pub fn hermitian_trace_norm(m: MatRef<'_, C64>) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|v| v.abs()).sum())
}

/// Applies `f` to the spectrum of a Hermitian matrix: `U f(Λ) U†`.
pub fn hermitian_function(m: MatRef<'_, C64>, f: impl Fn(f64) -> f64) -> Result<Mat<C64>> {
    let (vals, u) = hermitian_eigen(m)?;
    Ok(reassemble(&vals.iter().map(|&v| f(v)).collect::<Vec<_>>(), u.as_ref()))
}

/// `U diag(w) U†`.
pub fn reassemble(weights: &[f64], u: MatRef<'_, C64>) -> Mat<C64> {
    let n = u.nrows();
    let scaled = Mat::from_fn(n, weights.len(), |i, k| u[(i, k)] * weights[k]);
    &scaled * u.adjoint()
}

pub fn frobenius_sq(m: MatRef<'_, C64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc
}

pub fn trace(m: MatRef<'_, C64>) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub fn inverse_real(m: MatRef<'_, f64>) -> Mat<f64> {
    m.partial_piv_lu().inverse()
}

pub fn inverse_complex(m: MatRef<'_, C64>) -> Mat<C64> {
    m.partial_piv_lu().inverse()
}

/// `ln |det m|` from the LU factors.
pub fn log_abs_det(m: MatRef<'_, f64>) -> f64 {
    let lu = m.partial_piv_lu();
    let u = lu.U();
    (0..u.nrows()).map(|i| u[(i, i)].abs().ln()).sum()
}

/// Largest singular value of a Hermitian matrix.
pub fn spectral_norm_hermitian(m: MatRef<'_, C64>) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs())))
}

pub fn to_complex(m: MatRef<'_, f64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)], 0.0))
}

/// Real matrix times complex matrix, done as two real products.
pub fn real_times_complex(a: MatRef<'_, f64>, b: MatRef<'_, C64>) -> Mat<C64> {
    let re = Mat::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)].re);
    let im = Mat::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)].im);
    let pr = a * &re;
    let pi = a * &im;
    Mat::from_fn(pr.nrows(), pr.ncols(), |i, j| C64::new(pr[(i, j)], pi[(i, j)]))
}

/// Transposed real matrix times complex vector.
pub fn real_transpose_times_vec(a: MatRef<'_, f64>, v: &[C64]) -> Vec<C64> {
    let b = Mat::from_fn(v.len(), 1, |i, _| v[i]);
    let out = real_times_complex(a.transpose(), b.as_ref());
    (0..out.nrows()).map(|i| out[(i, 0)]).collect()
}
