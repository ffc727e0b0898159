//! State containers and distance functionals between quantum states.
//!
//! Basis convention: site 0 is the most significant bit of a basis index and
//! spin-up is bit value 0. A subsystem is a contiguous block of sites on a ring,
//! listed cyclically from its first site; the first block site is the most
//! significant bit of the reduced basis.

use std::fmt;

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, C64};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues above this (but negative) are roundoff and get clipped to zero.
pub const PSD_CLIP: f64 = -1e-10;
/// Eigenvalues below this mean the input is not a state.
pub const PSD_FAIL: f64 = -1e-8;

/// Pure state of `num_sites` spin-1/2 sites.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    num_sites: usize,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<C64>, num_sites: usize) -> Result<Self> {
        check_length(amplitudes.len(), num_sites)?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::StateValidity(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self {
            amplitudes,
            num_sites,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<C64>, num_sites: usize) -> Result<Self> {
        check_length(amplitudes.len(), num_sites)?;
        let norm = norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::StateValidity("cannot normalize a zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            amplitudes,
            num_sites,
        })
    }

    pub fn basis_state(index: usize, num_sites: usize) -> Result<Self> {
        let dim = dim_of(num_sites)?;
        if index >= dim {
            return domain(format!("basis index {index} out of range for {num_sites} sites"));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            num_sites,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return domain("state dimensions differ");
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn projector(&self) -> DensityMatrix {
        let n = self.dim();
        let a = &self.amplitudes;
        DensityMatrix::trusted(Mat::from_fn(n, n, |i, j| a[i] * a[j].conj()), self.num_sites)
    }
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn dim_of(num_sites: usize) -> Result<usize> {
    if num_sites == 0 || num_sites > 30 {
        return domain(format!("unsupported number of sites {num_sites}"));
    }
    Ok(1usize << num_sites)
}

fn check_length(len: usize, num_sites: usize) -> Result<()> {
    let dim = dim_of(num_sites)?;
    if len != dim {
        return domain(format!(
            "amplitude vector has length {len}, expected 2^{num_sites} = {dim}"
        ));
    }
    Ok(())
}

/// Hermitian, unit-trace, positive-semidefinite operator on `num_sites` sites.
#[derive(Clone)]
pub struct DensityMatrix {
    matrix: Mat<C64>,
    num_sites: usize,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMatrix")
            .field("num_sites", &self.num_sites)
            .field("dim", &self.dim())
            .finish()
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and numerical positivity.
    pub fn new(matrix: Mat<C64>, num_sites: usize) -> Result<Self> {
        let dim = dim_of(num_sites)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return domain(format!(
                "density matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        let rho = Self { matrix, num_sites };
        rho.validate()?;
        Ok(rho)
    }

    /// Internal constructor for matrices that are states by construction.
    pub(crate) fn trusted(matrix: Mat<C64>, num_sites: usize) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << num_sites);
        Self { matrix, num_sites }
    }

    pub fn validate(&self) -> Result<()> {
        let defect = linalg::hermitian_defect(self.matrix.as_ref());
        if defect > HERMITIAN_TOL {
            return Err(Error::StateValidity(format!(
                "Hermiticity defect {defect:e}"
            )));
        }
        let tr = linalg::trace(self.matrix.as_ref());
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::StateValidity(format!("trace {tr} differs from 1")));
        }
        let min = linalg::hermitian_eigenvalues(self.matrix.as_ref())?[0];
        if min < PSD_CLIP {
            return Err(Error::StateValidity(format!(
                "smallest eigenvalue {min:e} is negative"
            )));
        }
        Ok(())
    }

    pub fn maximally_mixed(num_sites: usize) -> Result<Self> {
        let dim = dim_of(num_sites)?;
        let w = 1.0 / dim as f64;
        Ok(Self::trusted(
            Mat::from_fn(dim, dim, |i, j| C64::new(if i == j { w } else { 0.0 }, 0.0)),
            num_sites,
        ))
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        let num_sites = probabilities.len().trailing_zeros() as usize;
        check_length(probabilities.len(), num_sites)?;
        let n = probabilities.len();
        Self::new(
            Mat::from_fn(n, n, |i, j| {
                C64::new(if i == j { probabilities[i] } else { 0.0 }, 0.0)
            }),
            num_sites,
        )
    }

    pub fn matrix(&self) -> MatRef<'_, C64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<C64> {
        self.matrix
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(self.matrix.as_ref())
    }

    pub fn purity(&self) -> f64 {
        linalg::frobenius_sq(self.matrix.as_ref())
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(self.matrix.as_ref())
    }

    /// tr(ρ O) for a Hermitian operator O on the same space.
    pub fn expectation(&self, op: MatRef<'_, C64>) -> Result<f64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return domain("operator dimension mismatch");
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        Ok(acc.re)
    }
}

/// Distance functional selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    TraceDistance,
    Bures,
    Schatten2,
    NormalizedSchatten2,
    RelativeDistance,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::TraceDistance,
        MetricKind::Bures,
        MetricKind::Schatten2,
        MetricKind::NormalizedSchatten2,
        MetricKind::RelativeDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::TraceDistance => "trace_distance",
            MetricKind::Bures => "bures",
            MetricKind::Schatten2 => "schatten2",
            MetricKind::NormalizedSchatten2 => "normalized_schatten2",
            MetricKind::RelativeDistance => "relative_distance",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Contiguous block of sites on a ring of `num_sites`, wrapping past the last site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub first: usize,
    pub len: usize,
}

impl Block {
    pub fn new(first: usize, len: usize, num_sites: usize) -> Result<Self> {
        if len < 1 || len > num_sites {
            return domain(format!(
                "block length {len} outside [1, {num_sites}]"
            ));
        }
        if first >= num_sites {
            return domain(format!("first site {first} outside [0, {num_sites})"));
        }
        Ok(Self { first, len })
    }

    pub fn full(num_sites: usize) -> Self {
        Self {
            first: 0,
            len: num_sites,
        }
    }

    pub fn sites(&self, num_sites: usize) -> impl Iterator<Item = usize> + '_ {
        let first = self.first;
        (0..self.len).map(move |k| (first + k) % num_sites)
    }

    /// Whether the block runs past site `num_sites - 1` back to site 0.
    pub fn wraps(&self, num_sites: usize) -> bool {
        self.first + self.len > num_sites
    }
}

/// Precomputed index split of the full basis into (block, complement) indices.
#[derive(Clone, Debug)]
pub struct BlockLayout {
    num_sites: usize,
    block: Block,
    block_index: Vec<u32>,
    rest_index: Vec<u32>,
}

impl BlockLayout {
    pub fn new(block: Block, num_sites: usize) -> Result<Self> {
        let block = Block::new(block.first, block.len, num_sites)?;
        let dim = dim_of(num_sites)?;
        let in_block: Vec<usize> = block.sites(num_sites).collect();
        let mut mask = vec![false; num_sites];
        for &s in &in_block {
            mask[s] = true;
        }
        let rest: Vec<usize> = (0..num_sites).filter(|s| !mask[*s]).collect();
        let bit = |i: usize, site: usize| (i >> (num_sites - 1 - site)) & 1;
        let mut block_index = Vec::with_capacity(dim);
        let mut rest_index = Vec::with_capacity(dim);
        for i in 0..dim {
            let a = in_block.iter().fold(0usize, |acc, &s| (acc << 1) | bit(i, s));
            let b = rest.iter().fold(0usize, |acc, &s| (acc << 1) | bit(i, s));
            block_index.push(a as u32);
            rest_index.push(b as u32);
        }
        Ok(Self {
            num_sites,
            block,
            block_index,
            rest_index,
        })
    }

    pub fn block(&self) -> Block {
        self.block
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn block_dim(&self) -> usize {
        1 << self.block.len
    }

    pub fn rest_dim(&self) -> usize {
        1 << (self.num_sites - self.block.len)
    }

    /// Reshapes a full amplitude vector into the `block_dim × rest_dim` matrix M with
    /// |ψ⟩⟨ψ| reduced to the block equal to M M†.
    pub fn reshape(&self, amplitudes: &[C64]) -> Mat<C64> {
        let mut m = Mat::<C64>::zeros(self.block_dim(), self.rest_dim());
        for (i, amp) in amplitudes.iter().enumerate() {
            m[(self.block_index[i] as usize, self.rest_index[i] as usize)] = *amp;
        }
        m
    }

    /// tr_Ā |ψ⟩⟨ψ|.
    pub fn reduce(&self, psi: &StateVector) -> Result<DensityMatrix> {
        if psi.num_sites() != self.num_sites {
            return domain("state and layout disagree on the number of sites");
        }
        let m = self.reshape(psi.amplitudes());
        let rho = &m * m.adjoint();
        Ok(DensityMatrix::trusted(rho, self.block.len))
    }

    /// tr_Ā |φ⟩⟨ψ| for two arbitrary vectors.
    pub fn reduce_cross(&self, phi: &[C64], psi: &[C64]) -> Mat<C64> {
        let mp = self.reshape(phi);
        let ms = self.reshape(psi);
        &mp * ms.adjoint()
    }

    /// tr_Ā of an operator given entrywise in the coordinates `states`
    /// (the full product basis when `None`).
    pub fn reduce_operator(
        &self,
        states: Option<&[usize]>,
        entry: impl Fn(usize, usize) -> C64,
    ) -> Mat<C64> {
        let n = states.map_or(self.block_index.len(), |s| s.len());
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.rest_dim()];
        for k in 0..n {
            let i = states.map_or(k, |s| s[k]);
            groups[self.rest_index[i] as usize].push((k, self.block_index[i] as usize));
        }
        let da = self.block_dim();
        let mut rho = Mat::<C64>::zeros(da, da);
        for g in &groups {
            for &(k, a) in g {
                for &(k2, a2) in g {
                    rho[(a, a2)] += entry(k, k2);
                }
            }
        }
        rho
    }

    /// Nonzero-capable spectrum of the reduced state computed on the smaller side.
    /// Returns `block_dim` eigenvalues (padded with zeros) in ascending order.
    pub fn reduced_spectrum(&self, psi: &[C64]) -> Result<Vec<f64>> {
        let m = self.reshape(psi);
        let (da, db) = (self.block_dim(), self.rest_dim());
        let mut vals = if da <= db {
            linalg::hermitian_eigenvalues((&m * m.adjoint()).as_ref())?
        } else {
            let mut v = linalg::hermitian_eigenvalues((m.adjoint() * &m).as_ref())?;
            v.extend(std::iter::repeat_n(0.0, da - db));
            v
        };
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }
}

/// tr_Ā |ψ⟩⟨ψ| for the cyclic block starting at `first_site` of `length` sites.
pub fn partial_trace(psi: &StateVector, first_site: usize, length: usize) -> Result<DensityMatrix> {
    let block = Block::new(first_site, length, psi.num_sites())?;
    BlockLayout::new(block, psi.num_sites())?.reduce(psi)
}

fn check_same(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return domain(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        ));
    }
    Ok(())
}

fn difference(rho: &DensityMatrix, sigma: &DensityMatrix) -> Mat<C64> {
    let (a, b) = (rho.matrix(), sigma.matrix());
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)])
}

/// ½‖ρ − σ‖₁.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same(rho, sigma)?;
    let d = difference(rho, sigma);
    Ok((0.5 * linalg::hermitian_trace_norm(d.as_ref())?).min(1.0))
}

/// √(1 − |⟨ψ|φ⟩|²).
pub fn pure_trace_distance(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    let overlap = psi.inner(phi)?.norm_sqr();
    Ok((1.0 - overlap).max(0.0).sqrt())
}

/// Clipped spectral decomposition used by every matrix function of a state.
fn psd_eigen(rho: &DensityMatrix) -> Result<(Vec<f64>, Mat<C64>)> {
    let (mut vals, vecs) = linalg::hermitian_eigen(rho.matrix())?;
    if let Some(&min) = vals.first() {
        if min < PSD_FAIL {
            return Err(Error::StateValidity(format!(
                "eigenvalue {min:e} below {PSD_FAIL:e}"
            )));
        }
        if min < PSD_CLIP {
            log::warn!("clipping eigenvalue {min:e} of a density matrix to zero");
        }
    }
    for v in &mut vals {
        *v = v.max(0.0);
    }
    Ok((vals, vecs))
}

fn psd_sqrt(rho: &DensityMatrix) -> Result<Mat<C64>> {
    let (vals, vecs) = psd_eigen(rho)?;
    let roots: Vec<f64> = vals.iter().map(|v| v.sqrt()).collect();
    Ok(linalg::reassemble(&roots, vecs.as_ref()))
}

/// tr √(√ρ σ √ρ), evaluated as the trace norm of √ρ √σ.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same(rho, sigma)?;
    let a = psd_sqrt(rho)?;
    let b = psd_sqrt(sigma)?;
    let prod = &a * &b;
    let f: f64 = linalg::singular_values(prod.as_ref())?.iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// √(2[1 − F(ρ, σ)]).
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((2.0 * (1.0 - f)).max(0.0).sqrt())
}

/// √(½ tr (ρ − σ)²).
pub fn schatten2_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same(rho, sigma)?;
    let d = difference(rho, sigma);
    Ok((0.5 * linalg::frobenius_sq(d.as_ref())).sqrt())
}

/// √(tr (ρ − σ)² / (tr ρ² + tr σ²)).
pub fn normalized_schatten2_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same(rho, sigma)?;
    let d = difference(rho, sigma);
    let denom = rho.purity() + sigma.purity();
    Ok((linalg::frobenius_sq(d.as_ref()) / denom).sqrt().min(1.0))
}

/// Thresholds deciding when the relative entropy is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportCutoffs {
    /// Eigenvalues of σ at or below this are outside its support.
    pub support: f64,
    /// Eigenvalues of ρ at or below this are ignored.
    pub state: f64,
    /// Weight of a ρ eigenvector outside supp σ that makes the entropy infinite.
    pub leakage: f64,
}

impl Default for SupportCutoffs {
    fn default() -> Self {
        Self {
            support: 1e-12,
            state: 1e-10,
            leakage: 1e-10,
        }
    }
}

/// S(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ in nats; `f64::INFINITY` when supp ρ ⊄ supp σ.
pub fn relative_entropy_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    cutoffs: SupportCutoffs,
) -> Result<f64> {
    check_same(rho, sigma)?;
    let (p, u) = psd_eigen(rho)?;
    let (q, v) = psd_eigen(sigma)?;
    // overlaps[i][j] = |⟨u_i|v_j⟩|²
    let ov = u.adjoint() * &v;
    let n = p.len();
    let mut entropy_term = 0.0;
    let mut cross = 0.0;
    for i in 0..n {
        if p[i] <= cutoffs.state {
            continue;
        }
        entropy_term += p[i] * p[i].ln();
        let mut leak = 0.0;
        let mut acc = 0.0;
        for j in 0..n {
            let w = ov[(i, j)].norm_sqr();
            if q[j] <= cutoffs.support {
                leak += w;
            } else {
                acc += w * q[j].ln();
            }
        }
        if leak > cutoffs.leakage {
            return Ok(f64::INFINITY);
        }
        cross += p[i] * acc;
    }
    Ok((entropy_term - cross).max(0.0))
}

pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    relative_entropy_with(rho, sigma, SupportCutoffs::default())
}

/// √(S(ρ‖σ)/2); infinite when the support condition fails.
pub fn relative_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((0.5 * relative_entropy(rho, sigma)?).sqrt())
}

pub fn relative_distance_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    cutoffs: SupportCutoffs,
) -> Result<f64> {
    Ok((0.5 * relative_entropy_with(rho, sigma, cutoffs)?).sqrt())
}

/// Dispatches on `kind`. The relative distance is not symmetric: this computes R(ρ‖σ).
pub fn distance(kind: MetricKind, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    match kind {
        MetricKind::TraceDistance => trace_distance(rho, sigma),
        MetricKind::Bures => bures_distance(rho, sigma),
        MetricKind::Schatten2 => schatten2_distance(rho, sigma),
        MetricKind::NormalizedSchatten2 => normalized_schatten2_distance(rho, sigma),
        MetricKind::RelativeDistance => relative_distance(rho, sigma),
    }
}
