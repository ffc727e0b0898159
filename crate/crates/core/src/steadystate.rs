//! Reference steady states and the distance of a trajectory to them.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::C64;
use crate::propagate::{time_grid, EigenBasis, TimeWindow, Trajectory};
use crate::qmetric::{self, BlockLayout, DensityMatrix, StateVector};

/// Energy gap below which eigenvalues are treated as one degenerate level.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Tolerance on the energy when matching a Gibbs temperature.
pub const BETA_ENERGY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SteadyStateKind {
    MaximallyMixed,
    Gibbs { beta: f64 },
    /// Canonical state whose mean energy equals that of the initial state.
    GibbsEnergyMatched,
    DiagonalEnsemble,
    TimeAveragedRdm { window: TimeWindow, samples: usize },
}

impl SteadyStateKind {
    /// Whether the full-system reference commutes with H.
    pub fn is_stationary(&self) -> bool {
        !matches!(self, SteadyStateKind::TimeAveragedRdm { .. })
    }
}

/// Normalized e^{−βE_n}/Z.
pub fn gibbs_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let shift = energies
        .iter()
        .map(|&e| -beta * e)
        .fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = energies.iter().map(|&e| (-beta * e - shift).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn thermal_energy(energies: &[f64], beta: f64) -> f64 {
    gibbs_weights(energies, beta)
        .iter()
        .zip(energies)
        .map(|(w, e)| w * e)
        .sum()
}

/// Solves ⟨H⟩_β = `target` by bisection.
pub fn match_beta(energies: &[f64], target: f64) -> Result<f64> {
    let (lo_e, hi_e) = (energies[0], energies[energies.len() - 1]);
    if !(target > lo_e && target < hi_e) {
        return Err(Error::NoSolution(format!(
            "energy {target} is not inside the spectrum ({lo_e}, {hi_e})"
        )));
    }
    let e0 = thermal_energy(energies, 0.0);
    if (e0 - target).abs() <= BETA_ENERGY_TOL {
        return Ok(0.0);
    }
    // Energy decreases with β, so the sign of the root is known.
    let sign = if target < e0 { 1.0 } else { -1.0 };
    let mut far = 1.0;
    while sign * (thermal_energy(energies, sign * far) - target) > 0.0 {
        far *= 2.0;
        if far > 1e12 {
            return Err(Error::NoSolution(format!("no finite β reaches energy {target}")));
        }
    }
    let (mut a, mut b) = (0.0, far);
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        let e = thermal_energy(energies, sign * mid);
        if (e - target).abs() <= BETA_ENERGY_TOL {
            return Ok(sign * mid);
        }
        if sign * (e - target) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= f64::EPSILON * b {
            break;
        }
    }
    Ok(sign * 0.5 * (a + b))
}

/// Groups of indices whose consecutive energy gaps are below [`DEGENERACY_GAP`].
pub fn degenerate_levels(energies: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut levels = Vec::new();
    let mut start = 0;
    for k in 1..=energies.len() {
        if k == energies.len() || energies[k] - energies[k - 1] >= DEGENERACY_GAP {
            levels.push(start..k);
            start = k;
        }
    }
    levels
}

/// tr_Ā of Σ_n w_n |E_n⟩⟨E_n|.
fn reduce_diagonal_mixture(basis: &EigenBasis, weights: &[f64], layout: &BlockLayout) -> Mat<C64> {
    let v = basis.vectors();
    let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, k| v[(i, k)] * weights[k]);
    let r = &scaled * v.transpose();
    let states = basis.sector().map(|s| s.states());
    layout.reduce_operator(states, |i, j| C64::new(r[(i, j)], 0.0))
}

fn diagonal_ensemble(basis: &EigenBasis, traj: &Trajectory<'_>, layout: &BlockLayout) -> Result<Mat<C64>> {
    let levels = degenerate_levels(basis.energies());
    let coeffs = traj.coefficients();
    let d = basis.dim();
    if levels.len() == d {
        return Ok(reduce_diagonal_mixture(basis, &traj.populations(), layout));
    }
    log::info!(
        "diagonal ensemble merged {} eigenvalues into {} degenerate levels",
        d,
        levels.len()
    );
    // V P Vᵀ with P block-diagonal over degenerate levels, P_nm = c_n c_m*.
    let v = basis.vectors();
    let mut vp_re = Mat::<f64>::zeros(d, d);
    let mut vp_im = Mat::<f64>::zeros(d, d);
    for level in &levels {
        for m in level.clone() {
            for n in level.clone() {
                let p = coeffs[n] * coeffs[m].conj();
                if p.re == 0.0 && p.im == 0.0 {
                    continue;
                }
                for i in 0..d {
                    vp_re[(i, m)] += v[(i, n)] * p.re;
                    vp_im[(i, m)] += v[(i, n)] * p.im;
                }
            }
        }
    }
    let re = &vp_re * v.transpose();
    let im = &vp_im * v.transpose();
    let states = basis.sector().map(|s| s.states());
    Ok(layout.reduce_operator(states, |i, j| C64::new(re[(i, j)], im[(i, j)])))
}

/// Reduced reference state ρ_{A,ss} for the initial state `psi0` evolving in `basis`.
pub fn steady_rdm(
    kind: SteadyStateKind,
    basis: &EigenBasis,
    psi0: &StateVector,
    layout: &BlockLayout,
) -> Result<DensityMatrix> {
    if layout.num_sites() != basis.num_sites() {
        return domain("block layout and eigenbasis disagree on the number of sites");
    }
    let traj = Trajectory::new(basis, psi0)?;
    let len = layout.block().len;
    let matrix = match kind {
        SteadyStateKind::MaximallyMixed => return DensityMatrix::maximally_mixed(len),
        SteadyStateKind::Gibbs { beta } => {
            if !beta.is_finite() {
                return domain(format!("Gibbs β must be finite, got {beta}"));
            }
            reduce_diagonal_mixture(basis, &gibbs_weights(basis.energies(), beta), layout)
        }
        SteadyStateKind::GibbsEnergyMatched => {
            let beta = match_beta(basis.energies(), traj.mean_energy())?;
            log::debug!("energy-matched β = {beta}");
            reduce_diagonal_mixture(basis, &gibbs_weights(basis.energies(), beta), layout)
        }
        SteadyStateKind::DiagonalEnsemble => diagonal_ensemble(basis, &traj, layout)?,
        SteadyStateKind::TimeAveragedRdm { window, samples } => {
            let times = time_grid(window, samples)?;
            let da = layout.block_dim();
            let mut acc = Mat::<C64>::zeros(da, da);
            for psi in traj.states_at(&times)? {
                let m = layout.reshape(psi.amplitudes());
                acc += &m * m.adjoint();
            }
            let n = times.len() as f64;
            Mat::from_fn(da, da, |i, j| acc[(i, j)] / n)
        }
    };
    DensityMatrix::new(crate::linalg::hermitize(matrix.as_ref()), len)
}

/// Energy-matched inverse temperature for a trajectory.
pub fn matched_beta(traj: &Trajectory<'_>) -> Result<f64> {
    match_beta(traj.basis().energies(), traj.mean_energy())
}

/// D(|ψ⟩⟨ψ|, Σ q_k |k⟩⟨k|) where `overlaps[k] = |⟨k|ψ⟩|²` in the same orthonormal basis.
///
/// The difference has a single positive eigenvalue λ, the root of Σ_k o_k/(λ + q_k) = 1,
/// and the trace distance equals λ.
pub fn pure_to_diagonal_distance(overlaps: &[f64], q: &[f64]) -> f64 {
    let f = |lambda: f64| -> f64 {
        overlaps
            .iter()
            .zip(q)
            .filter(|(o, _)| **o > 0.0)
            .map(|(o, qk)| o / (lambda + qk))
            .sum()
    };
    let (mut a, mut b) = (0.0f64, 1.0f64);
    if f(a) <= 1.0 {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if f(mid) > 1.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= 1e-16 {
            break;
        }
    }
    (0.5 * (a + b)).min(1.0)
}

/// D(|ψ(t)⟩, ρ_ss) for the whole chain, constant in time; `None` for time-averaged references.
pub fn total_steady_distance(kind: SteadyStateKind, traj: &Trajectory<'_>) -> Result<Option<f64>> {
    let basis = traj.basis();
    let pops = traj.populations();
    let full_dim = (1usize << basis.num_sites()) as f64;
    let value = match kind {
        SteadyStateKind::MaximallyMixed => (full_dim - 1.0) / full_dim,
        SteadyStateKind::Gibbs { beta } => {
            pure_to_diagonal_distance(&pops, &gibbs_weights(basis.energies(), beta))
        }
        SteadyStateKind::GibbsEnergyMatched => {
            let beta = matched_beta(traj)?;
            pure_to_diagonal_distance(&pops, &gibbs_weights(basis.energies(), beta))
        }
        SteadyStateKind::DiagonalEnsemble => {
            let merged: Vec<f64> = degenerate_levels(basis.energies())
                .into_iter()
                .map(|r| pops[r].iter().sum())
                .collect();
            pure_to_diagonal_distance(&merged, &merged)
        }
        SteadyStateKind::TimeAveragedRdm { .. } => return Ok(None),
    };
    Ok(Some(value))
}

/// Per-time distances to the steady state, for the block and for the whole chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyDistanceSeries {
    pub times: Vec<f64>,
    pub subsystem: Vec<f64>,
    /// D(|ψ(t)⟩, ρ_ss); constant for stationary references, absent for time-averaged ones.
    pub total: Option<Vec<f64>>,
}

/// ½ Σ_i |λ_i − 1/d_A| for the reduced spectrum of a pure state.
pub fn distance_to_maximally_mixed(layout: &BlockLayout, psi: &[C64]) -> Result<f64> {
    let spectrum = layout.reduced_spectrum(psi)?;
    let flat = 1.0 / layout.block_dim() as f64;
    Ok(0.5 * spectrum.iter().map(|l| (l - flat).abs()).sum::<f64>())
}

/// Trace distance between ρ_A(t) and the reference of `kind` at every time.
pub fn steady_distance_series(
    traj: &Trajectory<'_>,
    kind: SteadyStateKind,
    layout: &BlockLayout,
    times: &[f64],
) -> Result<SteadyDistanceSeries> {
    let states = traj.states_at(times)?;
    let subsystem = if kind == SteadyStateKind::MaximallyMixed {
        states
            .iter()
            .map(|s| distance_to_maximally_mixed(layout, s.amplitudes()))
            .collect::<Result<Vec<_>>>()?
    } else {
        let psi0 = traj.state_at(0.0)?;
        let reference = steady_rdm(kind, traj.basis(), &psi0, layout)?;
        states
            .iter()
            .map(|s| qmetric::trace_distance(&layout.reduce(s)?, &reference))
            .collect::<Result<Vec<_>>>()?
    };
    let total = total_steady_distance(kind, traj)?.map(|d| vec![d; times.len()]);
    Ok(SteadyDistanceSeries {
        times: times.to_vec(),
        subsystem,
        total,
    })
}
