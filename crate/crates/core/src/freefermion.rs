//! Transverse-field Ising quenches as fermionic Gaussian states.
//!
//! With Jordan–Wigner Majoranas c₂ⱼ = (∏_{l<j} σᶻ_l) σˣ_j and c₂ⱼ₊₁ = (∏_{l<j} σᶻ_l) σʸ_j,
//! a quadratic Hamiltonian reads Ĥ = (i/4) Σ h_ab c_a c_b with h real antisymmetric, and a
//! Gaussian state is fixed by Γ_ab = (i/2)⟨[c_a, c_b]⟩. The chain
//! H = −½ Σ (σˣσˣ + h σᶻ) is represented in its even-parity sector, where the ring bond
//! becomes antiperiodic.

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, C64};
use crate::qmetric::{Block, DensityMatrix, MetricKind, SupportCutoffs};

/// Largest eigenvalue magnitude of iΓ allowed above one.
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Clearance from ±1 applied to covariance eigenvalues that would make a logarithm diverge.
pub const REGULARIZATION: f64 = 1e-12;
/// Equality threshold for post-quench single-particle energies when dephasing.
pub const GGE_DEGENERACY: f64 = 1e-10;
/// Finite-difference step for Gaussian speeds.
pub const GAUSSIAN_FD_STEP: f64 = 1e-4;
/// Normal-form values this close to 1 are treated as a pure mode by the fidelity.
pub const PURITY_TOL: f64 = 1e-14;
/// Largest mode count turned into a dense matrix.
pub const MAX_RECONSTRUCTION_MODES: usize = 12;

#[derive(Clone, Debug)]
pub struct MajoranaCovariance {
    gamma: Mat<f64>,
}

impl MajoranaCovariance {
    pub fn new(gamma: Mat<f64>) -> Result<Self> {
        let n = gamma.nrows();
        if n == 0 || n % 2 != 0 || gamma.ncols() != n {
            return domain("covariance must be a nonempty 2n × 2n matrix");
        }
        let mut defect = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                defect = defect.max((gamma[(i, j)] + gamma[(j, i)]).abs());
            }
        }
        if defect > 1e-10 {
            return Err(Error::StateValidity(format!(
                "covariance antisymmetry defect {defect:e}"
            )));
        }
        let top = linalg::spectral_norm_hermitian(i_times(gamma.as_ref()).as_ref())?;
        if top > 1.0 + PHYSICAL_TOL {
            return Err(Error::StateValidity(format!(
                "covariance singular value {top} exceeds 1"
            )));
        }
        Ok(Self::trusted(gamma))
    }

    pub(crate) fn trusted(gamma: Mat<f64>) -> Self {
        let n = gamma.nrows();
        Self {
            gamma: Mat::from_fn(n, n, |i, j| 0.5 * (gamma[(i, j)] - gamma[(j, i)])),
        }
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.gamma.as_ref()
    }

    pub fn num_modes(&self) -> usize {
        self.gamma.nrows() / 2
    }

    /// Eigenvalues ν_k ∈ [0, 1] of the normal form, one per mode, ascending.
    pub fn normal_form(&self) -> Result<Vec<f64>> {
        mode_values(self.gamma.as_ref())
    }

    /// Γ² = −1 within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        let sq = &self.gamma * &self.gamma;
        let n = sq.nrows();
        (0..n).all(|i| (0..n).all(|j| (sq[(i, j)] + if i == j { 1.0 } else { 0.0 }).abs() <= tol))
    }
}

fn i_times(g: MatRef<'_, f64>) -> Mat<C64> {
    Mat::from_fn(g.nrows(), g.ncols(), |i, j| C64::new(0.0, g[(i, j)]))
}

fn mode_values(g: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let vals = linalg::hermitian_eigenvalues(i_times(g).as_ref())?;
    let n = vals.len() / 2;
    Ok(vals[n..].iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Antisymmetric h with Ĥ = (i/4) Σ h_ab c_a c_b equal to −½ Σ (σˣσˣ + h σᶻ) on even parity.
pub fn tfim_majorana_hamiltonian(h: f64, num_sites: usize) -> Result<Mat<f64>> {
    check_even(num_sites)?;
    let n = 2 * num_sites;
    let mut m = Mat::<f64>::zeros(n, n);
    let mut set = |a: usize, b: usize, v: f64| {
        m[(a, b)] = v;
        m[(b, a)] = -v;
    };
    for j in 0..num_sites {
        set(2 * j, 2 * j + 1, h);
    }
    for j in 0..num_sites - 1 {
        set(2 * j + 1, 2 * j + 2, 1.0);
    }
    set(n - 1, 0, -1.0);
    Ok(m)
}

fn check_even(num_sites: usize) -> Result<()> {
    if num_sites < 2 || num_sites % 2 != 0 {
        return domain(format!("free-fermion chain needs an even L ≥ 2, got {num_sites}"));
    }
    Ok(())
}

/// Ground-state covariance of the even-parity sector.
pub fn ground_covariance(h: f64, num_sites: usize) -> Result<MajoranaCovariance> {
    let hm = tfim_majorana_hamiltonian(h, num_sites)?;
    let (w, u) = linalg::hermitian_eigen(i_times(hm.as_ref()).as_ref())?;
    let signs: Vec<f64> = w.iter().map(|&x| x.signum()).collect();
    let s = linalg::reassemble(&signs, u.as_ref());
    // Γ = Re(i U sign(w) U†)
    let n = s.nrows();
    Ok(MajoranaCovariance::trusted(Mat::from_fn(n, n, |i, j| -s[(i, j)].im)))
}

/// ⟨Ĥ⟩ = ¼ Σ h_ab Γ_ab.
pub fn energy(h: MatRef<'_, f64>, gamma: &MajoranaCovariance) -> f64 {
    let g = gamma.matrix();
    let mut acc = 0.0;
    for j in 0..h.ncols() {
        for i in 0..h.nrows() {
            acc += h[(i, j)] * g[(i, j)];
        }
    }
    0.25 * acc
}

/// ⟨Ĥ²⟩ − ⟨Ĥ⟩² = −⅛ [tr h² + tr (hΓ)²].
pub fn energy_variance(h: MatRef<'_, f64>, gamma: &MajoranaCovariance) -> f64 {
    let hg = h * gamma.matrix();
    let hh = h * h;
    let tr_hh: f64 = (0..hh.nrows()).map(|i| hh[(i, i)]).sum();
    let hghg = &hg * &hg;
    let tr_hghg: f64 = (0..hghg.nrows()).map(|i| hghg[(i, i)]).sum();
    (-(tr_hh + tr_hghg) / 8.0).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuenchSpec {
    pub h0: f64,
    pub h1: f64,
    pub num_sites: usize,
}

impl QuenchSpec {
    pub fn new(h0: f64, h1: f64, num_sites: usize) -> Result<Self> {
        check_even(num_sites)?;
        if !h0.is_finite() || !h1.is_finite() {
            return domain("quench fields must be finite");
        }
        Ok(Self { h0, h1, num_sites })
    }
}

/// Ground state of h0 evolving under h1, with the h1 normal modes precomputed.
#[derive(Clone, Debug)]
pub struct QuenchDynamics {
    spec: QuenchSpec,
    initial: MajoranaCovariance,
    post_hamiltonian: Mat<f64>,
    frequencies: Vec<f64>,
    modes: Mat<C64>,
    initial_in_modes: Mat<C64>,
}

impl QuenchDynamics {
    pub fn new(spec: QuenchSpec) -> Result<Self> {
        let spec = QuenchSpec::new(spec.h0, spec.h1, spec.num_sites)?;
        let initial = ground_covariance(spec.h0, spec.num_sites)?;
        let post_hamiltonian = tfim_majorana_hamiltonian(spec.h1, spec.num_sites)?;
        let (frequencies, modes) = linalg::hermitian_eigen(i_times(post_hamiltonian.as_ref()).as_ref())?;
        let g0 = linalg::to_complex(initial.matrix());
        let initial_in_modes = modes.adjoint() * &g0 * &modes;
        Ok(Self {
            spec,
            initial,
            post_hamiltonian,
            frequencies,
            modes,
            initial_in_modes,
        })
    }

    pub fn spec(&self) -> QuenchSpec {
        self.spec
    }

    pub fn initial(&self) -> &MajoranaCovariance {
        &self.initial
    }

    pub fn post_quench_hamiltonian(&self) -> MatRef<'_, f64> {
        self.post_hamiltonian.as_ref()
    }

    fn from_modes(&self, m: &Mat<C64>) -> MajoranaCovariance {
        let full = &self.modes * m * self.modes.adjoint();
        let n = full.nrows();
        MajoranaCovariance::trusted(Mat::from_fn(n, n, |i, j| full[(i, j)].re))
    }

    /// Γ(t) = R Γ₀ Rᵀ with R = e^{h₁t}.
    pub fn covariance_at(&self, t: f64) -> MajoranaCovariance {
        let w = &self.frequencies;
        let m = &self.initial_in_modes;
        let phased = Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, j)] * C64::from_polar(1.0, -(w[i] - w[j]) * t)
        });
        self.from_modes(&phased)
    }

    /// dΓ/dt at time t.
    pub fn covariance_rate_at(&self, t: f64) -> Mat<f64> {
        let w = &self.frequencies;
        let m = &self.initial_in_modes;
        let phased = Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, j)] * C64::from_polar(1.0, -(w[i] - w[j]) * t) * C64::new(0.0, -(w[i] - w[j]))
        });
        let full = &self.modes * &phased * self.modes.adjoint();
        let n = full.nrows();
        Mat::from_fn(n, n, |i, j| 0.5 * (full[(i, j)].re - full[(j, i)].re))
    }

    /// Infinite-time average: coherences between distinct post-quench energies removed.
    pub fn gge(&self) -> MajoranaCovariance {
        let w = &self.frequencies;
        let m = &self.initial_in_modes;
        let kept = Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
            if (w[i] - w[j]).abs() < GGE_DEGENERACY {
                m[(i, j)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        self.from_modes(&kept)
    }

    /// Post-quench energy fluctuation ΔH, conserved in time.
    pub fn energy_fluctuation(&self) -> f64 {
        energy_variance(self.post_hamiltonian.as_ref(), &self.initial).sqrt()
    }
}

pub fn quench_covariance(spec: QuenchSpec, t: f64) -> Result<MajoranaCovariance> {
    Ok(QuenchDynamics::new(spec)?.covariance_at(t))
}

pub fn gge_covariance(spec: QuenchSpec) -> Result<MajoranaCovariance> {
    Ok(QuenchDynamics::new(spec)?.gge())
}

/// Principal 2L_A × 2L_A submatrix of a non-wrapping block.
pub fn block_covariance(gamma: &MajoranaCovariance, block: Block) -> Result<MajoranaCovariance> {
    let l = gamma.num_modes();
    let block = Block::new(block.first, block.len, l)?;
    if block.wraps(l) {
        return domain(format!(
            "block starting at {} with {} sites wraps around the ring; its string operators do not cancel",
            block.first, block.len
        ));
    }
    let off = 2 * block.first;
    let n = 2 * block.len;
    let g = gamma.matrix();
    Ok(MajoranaCovariance::trusted(Mat::from_fn(n, n, |i, j| g[(off + i, off + j)])))
}

/// Dense Jordan–Wigner Majorana operators on `n` sites (site 0 is the most significant bit).
pub fn majorana_operators(n: usize) -> Result<Vec<Mat<C64>>> {
    if n == 0 || n > MAX_RECONSTRUCTION_MODES {
        return Err(Error::Resource(format!(
            "dense Majorana operators limited to {MAX_RECONSTRUCTION_MODES} modes, got {n}"
        )));
    }
    let dim = 1usize << n;
    let bit = |i: usize, site: usize| (i >> (n - 1 - site)) & 1;
    let mut ops = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mask = 1usize << (n - 1 - j);
        let mut x = Mat::<C64>::zeros(dim, dim);
        let mut y = Mat::<C64>::zeros(dim, dim);
        for i in 0..dim {
            let string: f64 = (0..j).map(|l| 1.0 - 2.0 * bit(i, l) as f64).product();
            let target = i ^ mask;
            x[(target, i)] = C64::new(string, 0.0);
            let phase = if bit(i, j) == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
            y[(target, i)] = phase * string;
        }
        ops.push(x);
        ops.push(y);
    }
    Ok(ops)
}

/// Γ_ab = (i/2) tr(ρ [c_a, c_b]) of a dense state.
pub fn covariance_of(rho: &DensityMatrix) -> Result<MajoranaCovariance> {
    let ops = majorana_operators(rho.num_sites())?;
    let m = ops.len();
    let r = rho.matrix();
    let mut g = Mat::<f64>::zeros(m, m);
    for a in 0..m {
        for b in (a + 1)..m {
            let comm = &ops[a] * &ops[b] - &ops[b] * &ops[a];
            let v = (C64::new(0.0, 0.5) * linalg::trace((r * &comm).as_ref())).re;
            g[(a, b)] = v;
            g[(b, a)] = -v;
        }
    }
    Ok(MajoranaCovariance::trusted(g))
}

/// Dense density matrix of a Gaussian state, ∏_k (1 − i ν_k c_{a_k} c_{b_k}) / 2.
pub fn reconstruct_density_matrix(gamma: &MajoranaCovariance) -> Result<DensityMatrix> {
    let n = gamma.num_modes();
    let ops = majorana_operators(n)?;
    let dim = 1usize << n;
    let (w, u) = linalg::hermitian_eigen(i_times(gamma.matrix()).as_ref())?;
    let mut rho = Mat::<C64>::from_fn(dim, dim, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
    let combine = |coef: &dyn Fn(usize) -> f64| {
        let mut acc = Mat::<C64>::zeros(dim, dim);
        for (k, op) in ops.iter().enumerate() {
            let c = coef(k);
            if c != 0.0 {
                acc += Mat::from_fn(dim, dim, |i, j| op[(i, j)] * c);
            }
        }
        acc
    };
    for k in n..2 * n {
        let a = combine(&|i| 2f64.sqrt() * u[(i, k)].re);
        let b = combine(&|i| 2f64.sqrt() * u[(i, k)].im);
        let ab = &a * &b;
        let factor = Mat::from_fn(dim, dim, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            (C64::new(id, 0.0) - C64::new(0.0, w[k]) * ab[(i, j)]) * 0.5
        });
        rho = &rho * &factor;
    }
    DensityMatrix::new(linalg::hermitize(rho.as_ref()), n)
}

fn identity_c(n: usize) -> Mat<C64> {
    Mat::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
}

/// Complex covariance of ρ₁ρ₂/tr(ρ₁ρ₂) from those of ρ₁ and ρ₂, all in the convention A = iΓ.
fn compose(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> Mat<C64> {
    let n = a.nrows();
    let id = identity_c(n);
    let inv = linalg::inverse_complex((&id + a * b).as_ref());
    &id - (&id - b) * inv * (&id - a)
}

/// ln tr(ρ₁ρ₂) = −n ln 2 + ½ ln det(1 − Γ₁Γ₂).
pub fn log_trace_product(g1: &MajoranaCovariance, g2: &MajoranaCovariance) -> Result<f64> {
    check_modes(g1, g2)?;
    let n = g1.num_modes();
    let prod = g1.matrix() * g2.matrix();
    let m = Mat::from_fn(2 * n, 2 * n, |i, j| if i == j { 1.0 } else { 0.0 } - prod[(i, j)]);
    Ok(-(n as f64) * std::f64::consts::LN_2 + 0.5 * linalg::log_abs_det(m.as_ref()))
}

fn check_modes(g1: &MajoranaCovariance, g2: &MajoranaCovariance) -> Result<()> {
    if g1.num_modes() != g2.num_modes() {
        return domain(format!(
            "mode count mismatch: {} vs {}",
            g1.num_modes(),
            g2.num_modes()
        ));
    }
    Ok(())
}

/// Covariance of √ρ / tr √ρ, with normal-form values tanh(½ artanh ν).
fn half_power(g: MatRef<'_, f64>) -> Result<Mat<f64>> {
    let sq = g * g;
    let neg = Mat::from_fn(sq.nrows(), sq.ncols(), |i, j| -sq[(i, j)]);
    let (s, v) = linalg::symmetric_eigen(neg.as_ref())?;
    let phi: Vec<f64> = s.iter().map(|x| 1.0 / (1.0 + (1.0 - x.clamp(0.0, 1.0)).sqrt())).collect();
    let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, k| v[(i, k)] * phi[k]);
    let f = &scaled * v.transpose();
    Ok(g * &f)
}

/// Fidelity of two Gaussian states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianValue {
    pub value: f64,
    /// Set when an eigenvalue had to be moved away from ±1 or the states were orthogonal.
    pub regularized: bool,
}

pub fn gaussian_fidelity(g1: &MajoranaCovariance, g2: &MajoranaCovariance) -> Result<GaussianValue> {
    let log_tr = log_trace_product(g1, g2)?;
    if !log_tr.is_finite() {
        return Ok(GaussianValue { value: 0.0, regularized: true });
    }
    // A pure argument gives F = √tr(ρ₁ρ₂) exactly, without the √(1 − ν) roundoff of the
    // general product below.
    let pure = |g: &MajoranaCovariance| -> Result<bool> {
        Ok(g.normal_form()?.iter().all(|&v| v >= 1.0 - PURITY_TOL))
    };
    if pure(g1)? || pure(g2)? {
        return Ok(GaussianValue {
            value: (0.5 * log_tr).exp().clamp(0.0, 1.0),
            regularized: false,
        });
    }
    let half = i_times(half_power(g1.matrix())?.as_ref());
    let b = i_times(g2.matrix());
    let k = compose(compose(half.as_ref(), b.as_ref()).as_ref(), half.as_ref());
    // Γ_K = Re(−i K), antisymmetrized.
    let n = k.nrows();
    let gk = Mat::from_fn(n, n, |i, j| 0.5 * (k[(i, j)].im - k[(j, i)].im));
    let nu = mode_values(gk.as_ref())?;
    let log_f = 0.5 * log_tr
        + nu
            .iter()
            .map(|v| (((1.0 + v) / 2.0).sqrt() + ((1.0 - v) / 2.0).sqrt()).ln())
            .sum::<f64>();
    let value = log_f.exp();
    if !value.is_finite() {
        return Ok(GaussianValue { value: 0.0, regularized: true });
    }
    Ok(GaussianValue {
        value: value.clamp(0.0, 1.0),
        regularized: false,
    })
}

fn binary_entropy(nu: f64) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    h((1.0 + nu) / 2.0) + h((1.0 - nu) / 2.0)
}

/// von Neumann entropy in nats.
pub fn gaussian_entropy(g: &MajoranaCovariance) -> Result<f64> {
    Ok(g.normal_form()?.into_iter().map(binary_entropy).sum())
}

/// Pure covariance Re(i U sign(±w) U†) from the eigenpairs of iΓ: the most likely
/// Fock state of the normal modes, or the least likely one when `least` is set.
fn extremal_state(w: &[f64], u: MatRef<'_, C64>, least: bool) -> MajoranaCovariance {
    let signs: Vec<f64> = w
        .iter()
        .map(|&x| if least { -x.signum() } else { x.signum() })
        .collect();
    let s = linalg::reassemble(&signs, u);
    let n = s.nrows();
    MajoranaCovariance::trusted(Mat::from_fn(n, n, |i, j| -s[(i, j)].im))
}

/// True when ρ has weight outside the support of σ, mirroring the dense support rule.
/// σ is diagonal in its normal modes with mode populations (1 ± μ)/2, so its
/// eigenvalues are products of these. Two leak channels are checked: a single
/// mode whose minority population is below the support cutoff while ρ populates
/// it, and a least likely Fock state of σ below the cutoff that overlaps the
/// most likely Fock state of ρ.
fn leaks_outside_support(rho: &MajoranaCovariance, mu: &[f64], u: MatRef<'_, C64>) -> Result<bool> {
    let cutoffs = SupportCutoffs::default();
    let irho = i_times(rho.matrix());
    let single_mode = mu.iter().enumerate().any(|(k, &m)| {
        if m <= 0.0 || (1.0 - m) / 2.0 > cutoffs.support {
            return false;
        }
        let v = u.col(k);
        let mut along = C64::new(0.0, 0.0);
        for j in 0..v.nrows() {
            for i in 0..v.nrows() {
                along += v[i].conj() * irho[(i, j)] * v[j];
            }
        }
        (1.0 - along.re) / 2.0 > cutoffs.leakage
    });
    if single_mode {
        return Ok(true);
    }
    let log_min: f64 = mu
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| ((1.0 - m) / 2.0).max(0.0).ln())
        .sum();
    if log_min > cutoffs.support.ln() {
        return Ok(false);
    }
    let (w, v) = linalg::hermitian_eigen(irho.as_ref())?;
    let log_top: f64 = w.iter().filter(|&&x| x > 0.0).map(|&x| ((1.0 + x.min(1.0)) / 2.0).ln()).sum();
    if log_top <= cutoffs.state.ln() {
        return Ok(false);
    }
    let overlap = log_trace_product(&extremal_state(&w, v.as_ref(), false), &extremal_state(mu, u, true))?;
    Ok(overlap > cutoffs.leakage.ln())
}

/// S(ρ‖σ) = −S(ρ) + ¼ Σ h^σ_ab Γ^ρ_ab + ln Z_σ, where σ ∝ exp(−(i/4) Σ h^σ_ab c_a c_b).
pub fn gaussian_relative_entropy(rho: &MajoranaCovariance, sigma: &MajoranaCovariance) -> Result<GaussianValue> {
    check_modes(rho, sigma)?;
    let (mu, u) = linalg::hermitian_eigen(i_times(sigma.matrix()).as_ref())?;
    if leaks_outside_support(rho, &mu, u.as_ref())? {
        return Ok(GaussianValue {
            value: f64::INFINITY,
            regularized: false,
        });
    }
    let cap = 1.0 - REGULARIZATION;
    let mut regularized = false;
    let clipped: Vec<f64> = mu
        .iter()
        .map(|&m| {
            if m.abs() > cap {
                regularized = true;
                m.signum() * cap
            } else {
                m
            }
        })
        .collect();
    let gen: Vec<f64> = clipped.iter().map(|m| 2.0 * m.atanh()).collect();
    let hs = linalg::reassemble(&gen, u.as_ref());
    // h_σ = Re(i U diag(2 artanh μ) U†)
    let n = hs.nrows();
    let h_sigma = Mat::from_fn(n, n, |i, j| -hs[(i, j)].im);
    let modes = clipped.len() / 2;
    let log_z: f64 = clipped[modes..]
        .iter()
        .map(|v| -0.5 * ((1.0 - v * v) / 4.0).ln())
        .sum();
    let g = rho.matrix();
    let mut cross = 0.0;
    for j in 0..n {
        for i in 0..n {
            cross += h_sigma[(i, j)] * g[(i, j)];
        }
    }
    let value = -gaussian_entropy(rho)? + 0.25 * cross + log_z;
    if regularized {
        log::warn!("relative entropy regularized: σ has a normal-form value within {REGULARIZATION:e} of 1");
    }
    Ok(GaussianValue {
        value: value.max(0.0),
        regularized,
    })
}

/// Distance between Gaussian states; the trace distance has no efficient form and is rejected.
pub fn gaussian_metric(
    g1: &MajoranaCovariance,
    g2: &MajoranaCovariance,
    metric: MetricKind,
) -> Result<GaussianValue> {
    check_modes(g1, g2)?;
    match metric {
        MetricKind::TraceDistance => Err(Error::UnsupportedMetric(metric)),
        MetricKind::Bures => {
            let f = gaussian_fidelity(g1, g2)?;
            Ok(GaussianValue {
                value: (2.0 * (1.0 - f.value)).max(0.0).sqrt(),
                regularized: f.regularized,
            })
        }
        MetricKind::Schatten2 | MetricKind::NormalizedSchatten2 => {
            let a = log_trace_product(g1, g1)?.exp();
            let b = log_trace_product(g2, g2)?.exp();
            let c = log_trace_product(g1, g2)?.exp();
            let sq = (a + b - 2.0 * c).max(0.0);
            let value = if metric == MetricKind::Schatten2 {
                (0.5 * sq).sqrt()
            } else {
                (sq / (a + b)).sqrt().min(1.0)
            };
            Ok(GaussianValue { value, regularized: false })
        }
        MetricKind::RelativeDistance => {
            let s = gaussian_relative_entropy(g1, g2)?;
            Ok(GaussianValue {
                value: (0.5 * s.value).sqrt(),
                regularized: s.regularized,
            })
        }
    }
}

/// Bures speed lim B(ρ_A(t), ρ_A(t+δt))/δt of a block, given Γ and dΓ/dt of the chain.
///
/// Equals √(F_Q/4) with the fermionic Gaussian quantum Fisher information
/// F_Q = ½ Σ_nm |⟨n| i dΓ_A |m⟩|² / (1 − λ_n λ_m), where λ_n, |n⟩ are the
/// eigenpairs of iΓ_A. Pairs with a vanishing denominator carry no weight.
pub fn gaussian_bures_speed(gamma: &MajoranaCovariance, rate: MatRef<'_, f64>, block: Block) -> Result<f64> {
    if rate.nrows() != gamma.matrix().nrows() || rate.ncols() != rate.nrows() {
        return domain("rate matrix must match the covariance shape");
    }
    let ga = block_covariance(gamma, block)?;
    let off = 2 * block.first;
    let n = 2 * block.len;
    let (lambda, u) = linalg::hermitian_eigen(i_times(ga.matrix()).as_ref())?;
    let rate_a = Mat::from_fn(n, n, |i, j| C64::new(0.0, rate[(off + i, off + j)]));
    let m = u.adjoint() * &rate_a * &u;
    let mut fisher = 0.0;
    for j in 0..n {
        for i in 0..n {
            let denom = 1.0 - lambda[i] * lambda[j];
            let num = m[(i, j)].norm_sqr();
            if denom > f64::MIN_POSITIVE && num > 0.0 {
                fisher += num / denom;
            }
        }
    }
    Ok((0.125 * fisher).sqrt())
}

/// metric(Γ_A(t), Γ_A(t + δt)) / δt along a quench.
pub fn gaussian_speed_fd(
    dynamics: &QuenchDynamics,
    block: Block,
    t: f64,
    dt: f64,
    metric: MetricKind,
) -> Result<GaussianValue> {
    if !(dt > 0.0) || !dt.is_finite() {
        return domain(format!("finite-difference step must be positive, got {dt}"));
    }
    let a = block_covariance(&dynamics.covariance_at(t), block)?;
    let b = block_covariance(&dynamics.covariance_at(t + dt), block)?;
    let d = gaussian_metric(&a, &b, metric)?;
    Ok(GaussianValue {
        value: d.value / dt,
        regularized: d.regularized,
    })
}
