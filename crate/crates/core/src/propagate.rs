//! Exact-diagonalization time evolution and subsystem evolution speeds.
//!
//! A state is propagated through its eigenbasis coefficients, so every sampled time is
//! computed from scratch with no step-to-step accumulation.

use std::sync::Arc;

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{self, C64};
use crate::qmetric::{self, BlockLayout, MetricKind, StateVector};
use crate::spinchain::{apply_real, Hamiltonian, Sector};

/// Finite-difference step used when none is given.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Samples per averaging window used when none is given.
pub const DEFAULT_TIME_SAMPLES: usize = 200;

/// Full spectral decomposition H = V diag(E) Vᵀ with ascending energies.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    energies: Vec<f64>,
    vectors: Mat<f64>,
    num_sites: usize,
    sector: Option<Arc<Sector>>,
}

pub fn diagonalize(h: &Hamiltonian) -> Result<EigenBasis> {
    let m = h.matrix();
    let scale = (0..m.ncols())
        .flat_map(|j| (0..m.nrows()).map(move |i| m[(i, j)].abs()))
        .fold(1.0f64, f64::max);
    if linalg::symmetric_defect(m) > 1e-10 * scale {
        return domain("Hamiltonian is not Hermitian within 1e-10");
    }
    let (energies, vectors) = linalg::symmetric_eigen(m)?;
    Ok(EigenBasis {
        energies,
        vectors,
        num_sites: h.num_sites(),
        sector: h.sector().cloned(),
    })
}

impl EigenBasis {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenvectors as columns, in the coordinates of the (possibly sector-restricted) Hamiltonian.
    pub fn vectors(&self) -> MatRef<'_, f64> {
        self.vectors.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn sector(&self) -> Option<&Arc<Sector>> {
        self.sector.as_ref()
    }

    fn local(&self, full: &[C64]) -> Result<Vec<C64>> {
        if full.len() != 1 << self.num_sites {
            return domain(format!(
                "state of dimension {} does not match 2^{}",
                full.len(),
                self.num_sites
            ));
        }
        match &self.sector {
            Some(s) => s.restrict(full),
            None => Ok(full.to_vec()),
        }
    }

    fn to_full(&self, local: Vec<C64>) -> Vec<C64> {
        match &self.sector {
            Some(s) => s.embed(&local),
            None => local,
        }
    }

    /// c_k = ⟨E_k|ψ⟩.
    pub fn coefficients(&self, psi: &StateVector) -> Result<Vec<C64>> {
        let local = self.local(psi.amplitudes())?;
        Ok(linalg::real_transpose_times_vec(self.vectors(), &local))
    }

    /// Σ_k c_k |E_k⟩ as a full-space vector.
    pub fn synthesize(&self, coefficients: &[C64]) -> Vec<C64> {
        self.to_full(apply_real(self.vectors(), coefficients))
    }

    pub fn eigenstate(&self, k: usize) -> Result<StateVector> {
        if k >= self.dim() {
            return domain(format!("eigenstate {k} out of range"));
        }
        let local = (0..self.dim())
            .map(|i| C64::new(self.vectors[(i, k)], 0.0))
            .collect();
        StateVector::normalized(self.to_full(local), self.num_sites)
    }

    /// Largest |H V − V diag(E)| entry.
    pub fn residual(&self, h: &Hamiltonian) -> f64 {
        let hv = h.matrix() * &self.vectors;
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                worst = worst.max((hv[(i, j)] - self.vectors[(i, j)] * self.energies[j]).abs());
            }
        }
        worst
    }
}

/// e^{−iHt}|ψ0⟩.
pub fn evolve(basis: &EigenBasis, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Trajectory::new(basis, psi0)?.state_at(t)
}

/// A pure-state trajectory stored as eigenbasis coefficients.
#[derive(Clone, Debug)]
pub struct Trajectory<'a> {
    basis: &'a EigenBasis,
    coefficients: Vec<C64>,
}

impl<'a> Trajectory<'a> {
    pub fn new(basis: &'a EigenBasis, psi0: &StateVector) -> Result<Self> {
        Ok(Self {
            basis,
            coefficients: basis.coefficients(psi0)?,
        })
    }

    pub fn basis(&self) -> &'a EigenBasis {
        self.basis
    }

    pub fn num_sites(&self) -> usize {
        self.basis.num_sites
    }

    fn phased(&self, t: f64, with_energy: bool) -> Vec<C64> {
        self.coefficients
            .iter()
            .zip(&self.basis.energies)
            .map(|(c, &e)| {
                let z = c * C64::from_polar(1.0, -e * t);
                if with_energy {
                    z * e
                } else {
                    z
                }
            })
            .collect()
    }

    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        let v = self.basis.synthesize(&self.phased(t, false));
        StateVector::normalized(v, self.num_sites())
    }

    /// (ψ(t), Hψ(t)) as full-space vectors.
    pub fn state_and_derivative_at(&self, t: f64) -> (Vec<C64>, Vec<C64>) {
        (
            self.basis.synthesize(&self.phased(t, false)),
            self.basis.synthesize(&self.phased(t, true)),
        )
    }

    /// States at many times, computed with one matrix product.
    pub fn states_at(&self, times: &[f64]) -> Result<Vec<StateVector>> {
        let cols = self.batch(times, false);
        cols.into_iter()
            .map(|v| StateVector::normalized(v, self.num_sites()))
            .collect()
    }

    /// (ψ(t), Hψ(t)) pairs for many times, computed with one matrix product.
    pub fn states_and_derivatives_at(&self, times: &[f64]) -> Vec<(Vec<C64>, Vec<C64>)> {
        let mut both = self.batch(times, true).into_iter();
        let mut out = Vec::with_capacity(times.len());
        while let (Some(a), Some(b)) = (both.next(), both.next()) {
            out.push((a, b));
        }
        out
    }

    fn batch(&self, times: &[f64], with_energy: bool) -> Vec<Vec<C64>> {
        let per = if with_energy { 2 } else { 1 };
        let d = self.basis.dim();
        let mut c = Mat::<C64>::zeros(d, per * times.len());
        for (k, &t) in times.iter().enumerate() {
            let phased = self.phased(t, false);
            for i in 0..d {
                c[(i, per * k)] = phased[i];
                if with_energy {
                    c[(i, per * k + 1)] = phased[i] * self.basis.energies[i];
                }
            }
        }
        let out = linalg::real_times_complex(self.basis.vectors(), c.as_ref());
        (0..out.ncols())
            .map(|j| self.basis.to_full((0..d).map(|i| out[(i, j)]).collect()))
            .collect()
    }

    /// ΔH, which is constant along the trajectory.
    pub fn energy_fluctuation(&self) -> f64 {
        let mut mean = 0.0;
        let mut second = 0.0;
        for (c, &e) in self.coefficients.iter().zip(&self.basis.energies) {
            let p = c.norm_sqr();
            mean += p * e;
            second += p * e * e;
        }
        (second - mean * mean).max(0.0).sqrt()
    }

    /// ⟨H⟩, conserved along the trajectory.
    pub fn mean_energy(&self) -> f64 {
        self.coefficients
            .iter()
            .zip(&self.basis.energies)
            .map(|(c, &e)| c.norm_sqr() * e)
            .sum()
    }

    /// ⟨E_k|ψ0⟩.
    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// |⟨E_k|ψ0⟩|².
    pub fn populations(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// √(⟨H²⟩ − ⟨H⟩²).
pub fn energy_fluctuation(h: &Hamiltonian, psi: &StateVector) -> Result<f64> {
    let hpsi = h.apply(psi)?;
    let mean = qmetric::inner(psi.amplitudes(), &hpsi).re;
    let second: f64 = hpsi.iter().map(|a| a.norm_sqr()).sum();
    Ok((second - mean * mean).max(0.0).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpeedMethod {
    FiniteDifference { dt: f64 },
    ExactDerivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedEstimate {
    pub value: f64,
    pub method: SpeedMethod,
    pub time: Option<f64>,
}

impl SpeedEstimate {
    pub fn at(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }
}

/// Hermitian combination of two reshaped states whose trace norm is wanted.
#[derive(Clone, Copy)]
enum Form {
    /// A A† − B B†
    Difference,
    /// −i (A B† − B A†)
    Commutator,
}

fn form_trace_norm(a: MatRef<'_, C64>, b: MatRef<'_, C64>, form: Form) -> Result<f64> {
    let (da, db) = (a.nrows(), a.ncols());
    if da <= 2 * db {
        let x = match form {
            Form::Difference => a * a.adjoint() - b * b.adjoint(),
            Form::Commutator => {
                let ab = a * b.adjoint();
                Mat::from_fn(da, da, |i, j| C64::new(0.0, -1.0) * (ab[(i, j)] - ab[(j, i)].conj()))
            }
        };
        return linalg::hermitian_trace_norm(x.as_ref());
    }
    // X = W K W† with W = [A, B]; its nonzero spectrum is that of G^½ K G^½, G = W†W.
    let w = Mat::from_fn(da, 2 * db, |i, j| if j < db { a[(i, j)] } else { b[(i, j - db)] });
    let k = Mat::from_fn(2 * db, 2 * db, |i, j| match form {
        Form::Difference if i == j => C64::new(if i < db { 1.0 } else { -1.0 }, 0.0),
        Form::Commutator if i < db && j == i + db => C64::new(0.0, -1.0),
        Form::Commutator if i >= db && j + db == i => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    });
    let gram = w.adjoint() * &w;
    let root = linalg::hermitian_function(gram.as_ref(), |v| v.max(0.0).sqrt())?;
    let core = &root * &k * &root;
    linalg::hermitian_trace_norm(core.as_ref())
}

/// D(tr_Ā|ψ⟩⟨ψ|, tr_Ā|φ⟩⟨φ|) without forming either reduced state when the block is large.
pub fn reduced_trace_distance(layout: &BlockLayout, psi: &[C64], phi: &[C64]) -> Result<f64> {
    let a = layout.reshape(psi);
    let b = layout.reshape(phi);
    Ok((0.5 * form_trace_norm(a.as_ref(), b.as_ref(), Form::Difference)?).min(1.0))
}

/// ½‖dρ_A/dt‖₁ from ψ and Hψ, with dρ_A/dt = −i tr_Ā(H|ψ⟩⟨ψ| − |ψ⟩⟨ψ|H).
pub fn speed_from_derivative(layout: &BlockLayout, psi: &[C64], h_psi: &[C64]) -> Result<f64> {
    let m_psi = layout.reshape(psi);
    let m_phi = layout.reshape(h_psi);
    Ok(0.5 * form_trace_norm(m_phi.as_ref(), m_psi.as_ref(), Form::Commutator)?)
}

/// Exact instantaneous trace-distance speed of the block.
pub fn subsystem_speed_exact(
    h: &Hamiltonian,
    psi_t: &StateVector,
    layout: &BlockLayout,
) -> Result<SpeedEstimate> {
    check_layout(layout, psi_t)?;
    let h_psi = h.apply(psi_t)?;
    Ok(SpeedEstimate {
        value: speed_from_derivative(layout, psi_t.amplitudes(), &h_psi)?,
        method: SpeedMethod::ExactDerivative,
        time: None,
    })
}

/// metric(ρ_A(t), ρ_A(t + δt)) / δt.
pub fn subsystem_speed_fd(
    basis: &EigenBasis,
    psi_t: &StateVector,
    layout: &BlockLayout,
    dt: f64,
    metric: MetricKind,
) -> Result<SpeedEstimate> {
    if !(dt > 0.0) || !dt.is_finite() {
        return domain(format!("finite-difference step must be positive, got {dt}"));
    }
    check_layout(layout, psi_t)?;
    let later = evolve(basis, psi_t, dt)?;
    let d = match metric {
        MetricKind::TraceDistance => {
            reduced_trace_distance(layout, psi_t.amplitudes(), later.amplitudes())?
        }
        other => {
            let a = layout.reduce(psi_t)?;
            let b = layout.reduce(&later)?;
            qmetric::distance(other, &a, &b)?
        }
    };
    Ok(SpeedEstimate {
        value: d / dt,
        method: SpeedMethod::FiniteDifference { dt },
        time: None,
    })
}

fn check_layout(layout: &BlockLayout, psi: &StateVector) -> Result<()> {
    if layout.num_sites() != psi.num_sites() {
        return domain("block layout and state disagree on the number of sites");
    }
    Ok(())
}

/// Closed interval [start, end] of evolution time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(end > start) || !start.is_finite() || !end.is_finite() {
            return domain(format!("invalid time window [{start}, {end}]"));
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// `samples` uniformly spaced times including both endpoints.
pub fn time_grid(window: TimeWindow, samples: usize) -> Result<Vec<f64>> {
    TimeWindow::new(window.start, window.end)?;
    if samples < 2 {
        return domain(format!("time average needs at least 2 samples, got {samples}"));
    }
    let step = window.length() / (samples - 1) as f64;
    Ok((0..samples)
        .map(|k| {
            if k == samples - 1 {
                window.end
            } else {
                window.start + step * k as f64
            }
        })
        .collect())
}

/// Uniform-grid mean of `f` over the window.
pub fn time_average(f: impl FnMut(f64) -> f64, window: TimeWindow, samples: usize) -> Result<f64> {
    let grid = time_grid(window, samples)?;
    let n = grid.len() as f64;
    Ok(grid.into_iter().map(f).sum::<f64>() / n)
}
