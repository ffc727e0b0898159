//! Spin-chain Hamiltonians on a periodic ring, initial states and disorder.
//!
//! Conventions follow [`crate::qmetric`]: site 0 is the most significant bit and
//! spin-up is bit 0, so σᶻ on a site reads `1 - 2 * bit`.

use std::sync::Arc;

use faer::{Mat, MatRef};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, C64};
use crate::propagate;
use crate::qmetric::{dim_of, StateVector};
use crate::sampling;

/// Largest chain stored as a dense 2^L × 2^L matrix.
pub const MAX_DENSE_SITES: usize = 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Model {
    /// −½ Σ (σˣσˣ + h_x σˣ + h_z σᶻ)
    ChaoticIsing { h_x: f64, h_z: f64 },
    /// −½ Σ (σˣσˣ + h_z σᶻ)
    Tfim { h_z: f64 },
    /// Σ [¼(σˣσˣ + σʸσʸ + Δ σᶻσᶻ) + ½ h_j σᶻ_j]
    Xxz { delta: f64, fields: Vec<f64> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub model: Model,
    pub num_sites: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(model: Model, num_sites: usize) -> Result<Self> {
        let spec = Self {
            model,
            num_sites,
            boundary: Boundary::Periodic,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn chaotic_ising(h_x: f64, h_z: f64, num_sites: usize) -> Result<Self> {
        Self::new(Model::ChaoticIsing { h_x, h_z }, num_sites)
    }

    pub fn tfim(h_z: f64, num_sites: usize) -> Result<Self> {
        Self::new(Model::Tfim { h_z }, num_sites)
    }

    pub fn xxz(delta: f64, fields: Vec<f64>) -> Result<Self> {
        let n = fields.len();
        Self::new(Model::Xxz { delta, fields }, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_sites < 2 {
            return domain(format!("chain needs at least 2 sites, got {}", self.num_sites));
        }
        if let Model::Xxz { fields, .. } = &self.model {
            if fields.len() != self.num_sites {
                return domain(format!(
                    "XXZ field vector has {} entries for {} sites",
                    fields.len(),
                    self.num_sites
                ));
            }
        }
        Ok(())
    }

    /// Whether the model conserves total σᶻ.
    pub fn conserves_magnetization(&self) -> bool {
        matches!(self.model, Model::Xxz { .. })
    }
}

/// Basis states with a fixed number of down spins, embedded in the full space.
#[derive(Clone, Debug)]
pub struct Sector {
    states: Vec<usize>,
    position: Vec<u32>,
    num_down: usize,
}

impl Sector {
    pub fn fixed_down_spins(num_sites: usize, num_down: usize) -> Result<Self> {
        let full = dim_of(num_sites)?;
        if num_down > num_sites {
            return domain("more down spins than sites");
        }
        let states: Vec<usize> = (0..full)
            .filter(|i| i.count_ones() as usize == num_down)
            .collect();
        let mut position = vec![u32::MAX; full];
        for (k, &s) in states.iter().enumerate() {
            position[s] = k as u32;
        }
        Ok(Self {
            states,
            position,
            num_down,
        })
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn full_dim(&self) -> usize {
        self.position.len()
    }

    pub fn num_down(&self) -> usize {
        self.num_down
    }

    pub fn index_of(&self, full_index: usize) -> Option<usize> {
        match self.position[full_index] {
            u32::MAX => None,
            k => Some(k as usize),
        }
    }

    /// Restricts a full vector, failing if it has weight outside the sector.
    pub fn restrict(&self, full: &[C64]) -> Result<Vec<C64>> {
        let inside: f64 = self.states.iter().map(|&s| full[s].norm_sqr()).sum();
        let total: f64 = full.iter().map(|a| a.norm_sqr()).sum();
        if total - inside > 1e-12 {
            return domain(format!(
                "state has weight {:e} outside the {}-down-spin sector",
                total - inside,
                self.num_down
            ));
        }
        Ok(self.states.iter().map(|&s| full[s]).collect())
    }

    pub fn embed(&self, local: &[C64]) -> Vec<C64> {
        let mut full = vec![C64::new(0.0, 0.0); self.full_dim()];
        for (k, &s) in self.states.iter().enumerate() {
            full[s] = local[k];
        }
        full
    }
}

/// Real symmetric Hamiltonian in the σᶻ product basis, optionally restricted to a sector.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    matrix: Mat<f64>,
    num_sites: usize,
    sector: Option<Arc<Sector>>,
}

impl Hamiltonian {
    /// Wraps an arbitrary real symmetric matrix on the full 2^L space.
    pub fn from_matrix(matrix: Mat<f64>, num_sites: usize) -> Result<Self> {
        let dim = dim_of(num_sites)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return domain("Hamiltonian dimension does not match 2^L");
        }
        let scale = max_abs(matrix.as_ref()).max(1.0);
        if linalg::symmetric_defect(matrix.as_ref()) > 1e-10 * scale {
            return domain("Hamiltonian is not symmetric");
        }
        Ok(Self {
            matrix,
            num_sites,
            sector: None,
        })
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// Dimension of the space the matrix acts on (sector dimension if restricted).
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn sector(&self) -> Option<&Arc<Sector>> {
        self.sector.as_ref()
    }

    /// Maps a full-space vector into the coordinates of `matrix`.
    pub(crate) fn local_coords(&self, full: &[C64]) -> Result<Vec<C64>> {
        if full.len() != 1 << self.num_sites {
            return domain("vector dimension does not match the Hamiltonian");
        }
        match &self.sector {
            Some(s) => s.restrict(full),
            None => Ok(full.to_vec()),
        }
    }

    pub(crate) fn to_full(&self, local: Vec<C64>) -> Vec<C64> {
        match &self.sector {
            Some(s) => s.embed(&local),
            None => local,
        }
    }

    /// H|ψ⟩ as a full-space vector.
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<C64>> {
        let local = self.local_coords(psi.amplitudes())?;
        let out = apply_real(self.matrix.as_ref(), &local);
        Ok(self.to_full(out))
    }
}

pub(crate) fn apply_real(m: MatRef<'_, f64>, v: &[C64]) -> Vec<C64> {
    let n = m.nrows();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (j, vj) in v.iter().enumerate() {
        if vj.re == 0.0 && vj.im == 0.0 {
            continue;
        }
        let col = m.col(j);
        for i in 0..n {
            out[i] += *vj * col[i];
        }
    }
    out
}

fn max_abs(m: MatRef<'_, f64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].abs());
        }
    }
    worst
}

fn guard(num_sites: usize) -> Result<()> {
    if num_sites > MAX_DENSE_SITES {
        return Err(Error::Resource(format!(
            "L = {num_sites} exceeds the dense limit of {MAX_DENSE_SITES} sites; \
             use the free-fermion path or a sparse solver"
        )));
    }
    Ok(())
}

/// Builds the dense Hamiltonian on the full 2^L space.
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    guard(spec.num_sites)?;
    let dim = 1usize << spec.num_sites;
    let states: Vec<usize> = (0..dim).collect();
    let matrix = assemble(spec, &states, |i| Some(i));
    Ok(Hamiltonian {
        matrix,
        num_sites: spec.num_sites,
        sector: None,
    })
}

/// Builds a magnetization-conserving Hamiltonian inside the sector with `num_down` down spins.
pub fn build_hamiltonian_in_sector(spec: &ChainSpec, num_down: usize) -> Result<Hamiltonian> {
    spec.validate()?;
    guard(spec.num_sites)?;
    if !spec.conserves_magnetization() {
        return domain("only magnetization-conserving models can be restricted to a sector");
    }
    let sector = Sector::fixed_down_spins(spec.num_sites, num_down)?;
    let matrix = assemble(spec, sector.states(), |i| sector.index_of(i));
    Ok(Hamiltonian {
        matrix,
        num_sites: spec.num_sites,
        sector: Some(Arc::new(sector)),
    })
}

fn assemble(spec: &ChainSpec, states: &[usize], locate: impl Fn(usize) -> Option<usize>) -> Mat<f64> {
    let l = spec.num_sites;
    let n = states.len();
    let mask = |site: usize| 1usize << (l - 1 - site);
    let spin = |i: usize, site: usize| if i & mask(site) == 0 { 1.0 } else { -1.0 };
    let mut m = Mat::<f64>::zeros(n, n);
    for (col, &i) in states.iter().enumerate() {
        let push = |target: usize, value: f64, m: &mut Mat<f64>| {
            if let Some(row) = locate(target) {
                m[(row, col)] += value;
            }
        };
        for j in 0..l {
            let k = (j + 1) % l;
            match &spec.model {
                Model::ChaoticIsing { h_x, h_z } => {
                    push(i ^ mask(j) ^ mask(k), -0.5, &mut m);
                    push(i ^ mask(j), -0.5 * h_x, &mut m);
                    push(i, -0.5 * h_z * spin(i, j), &mut m);
                }
                Model::Tfim { h_z } => {
                    push(i ^ mask(j) ^ mask(k), -0.5, &mut m);
                    push(i, -0.5 * h_z * spin(i, j), &mut m);
                }
                Model::Xxz { delta, fields } => {
                    let (sj, sk) = (spin(i, j), spin(i, k));
                    if sj != sk {
                        push(i ^ mask(j) ^ mask(k), 0.5, &mut m);
                    }
                    push(i, 0.25 * delta * sj * sk + 0.5 * fields[j] * sj, &mut m);
                }
            }
        }
    }
    m
}

/// Uniform random fields on [−h, h], reproducible from (seed, realization).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub strength: f64,
    pub seed: u64,
    pub realization_index: u64,
}

pub fn sample_disorder(d: &DisorderSpec, num_sites: usize) -> Result<Vec<f64>> {
    if !(d.strength >= 0.0) || !d.strength.is_finite() {
        return domain(format!("disorder strength {} must be finite and >= 0", d.strength));
    }
    if d.strength == 0.0 {
        return Ok(vec![0.0; num_sites]);
    }
    let mut rng = sampling::seeded_rng(d.seed, d.realization_index);
    let h = d.strength;
    Ok((0..num_sites).map(|_| rng.random_range(-h..=h)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialStateKind {
    /// Gaussian amplitudes, complex unless `real` is set, then normalized.
    RandomGaussian {
        seed: u64,
        #[serde(default)]
        real: bool,
    },
    XPlus,
    YPlus,
    ZPlus,
    Neel,
    GroundState { spec: ChainSpec },
}

pub fn make_initial_state(kind: &InitialStateKind, num_sites: usize) -> Result<StateVector> {
    let dim = dim_of(num_sites)?;
    let amp = 2f64.powf(-(num_sites as f64) / 2.0);
    match kind {
        InitialStateKind::RandomGaussian { seed, real } => {
            let mut rng = sampling::seeded_rng(*seed, 0);
            StateVector::normalized(sampling::gaussian_amplitudes(&mut rng, dim, *real), num_sites)
        }
        InitialStateKind::XPlus => StateVector::new(vec![C64::new(amp, 0.0); dim], num_sites),
        InitialStateKind::YPlus => {
            let phases = [
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, -1.0),
            ];
            let amps = (0..dim)
                .map(|i| phases[(i.count_ones() % 4) as usize] * amp)
                .collect();
            StateVector::normalized(amps, num_sites)
        }
        InitialStateKind::ZPlus => StateVector::basis_state(0, num_sites),
        InitialStateKind::Neel => {
            if num_sites % 2 != 0 {
                return domain(format!("Néel state needs an even number of sites, got {num_sites}"));
            }
            StateVector::basis_state(neel_index(num_sites), num_sites)
        }
        InitialStateKind::GroundState { spec } => {
            if spec.num_sites != num_sites {
                return domain("ground-state spec size differs from the requested size");
            }
            let h = build_hamiltonian(spec)?;
            let basis = propagate::diagonalize(&h)?;
            basis.eigenstate(0)
        }
    }
}

/// Basis index of |↑↓↑↓…⟩.
pub fn neel_index(num_sites: usize) -> usize {
    (0..num_sites)
        .filter(|j| j % 2 == 1)
        .map(|j| 1usize << (num_sites - 1 - j))
        .sum()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;
    use std::f64::consts::FRAC_1_SQRT_2;

    // Independent oracle: explicit Kronecker products of Pauli matrices.
    fn kron_site(l: usize, site: usize, op: [[C64; 2]; 2]) -> Mat<C64> {
        let mut m = Mat::from_fn(1, 1, |_, _| C64::new(1.0, 0.0));
        for s in 0..l {
            let f = if s == site {
                op
            } else {
                [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]
            };
            let n = m.nrows();
            m = Mat::from_fn(2 * n, 2 * n, |i, j| m[(i / 2, j / 2)] * f[i % 2][j % 2]);
        }
        m
    }

    fn paulis() -> [[[C64; 2]; 2]; 3] {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]]
    }

    fn oracle(spec: &ChainSpec) -> Mat<C64> {
        let l = spec.num_sites;
        let [sx, sy, sz] = paulis();
        let dim = 1 << l;
        let mut h = Mat::<C64>::zeros(dim, dim);
        let mut add = |m: Mat<C64>, c: f64| {
            for i in 0..dim {
                for j in 0..dim {
                    h[(i, j)] += m[(i, j)] * c;
                }
            }
        };
        for j in 0..l {
            let k = (j + 1) % l;
            let pair = |a, b| &kron_site(l, j, a) * &kron_site(l, k, b);
            match &spec.model {
                Model::ChaoticIsing { h_x, h_z } => {
                    add(pair(sx, sx), -0.5);
                    add(kron_site(l, j, sx), -0.5 * h_x);
                    add(kron_site(l, j, sz), -0.5 * h_z);
                }
                Model::Tfim { h_z } => {
                    add(pair(sx, sx), -0.5);
                    add(kron_site(l, j, sz), -0.5 * h_z);
                }
                Model::Xxz { delta, fields } => {
                    add(pair(sx, sx), 0.25);
                    add(pair(sy, sy), 0.25);
                    add(pair(sz, sz), 0.25 * delta);
                    add(kron_site(l, j, sz), 0.5 * fields[j]);
                }
            }
        }
        h
    }

    fn assert_matches_oracle(spec: &ChainSpec) {
        let h = build_hamiltonian(spec).unwrap();
        let o = oracle(spec);
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                assert!(
                    (o[(i, j)] - C64::new(h.matrix()[(i, j)], 0.0)).norm() < 1e-14,
                    "{spec:?} differs at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn hamiltonians_match_kronecker_oracle() {
        assert_matches_oracle(&ChainSpec::chaotic_ising(0.7, -1.3, 3).unwrap());
        assert_matches_oracle(&ChainSpec::chaotic_ising(0.3, 0.2, 4).unwrap());
        assert_matches_oracle(&ChainSpec::tfim(1.1, 4).unwrap());
        assert_matches_oracle(&ChainSpec::xxz(0.6, vec![0.1, -0.4, 0.9, 0.3]).unwrap());
        assert_matches_oracle(&ChainSpec::xxz(1.0, vec![0.0, 0.0]).unwrap());
    }

    #[test]
    fn two_site_ising_spectrum() {
        // Both ring bonds couple the same pair, so H = −σˣσˣ: eigenvalues ±1, each twice.
        let h = build_hamiltonian(&ChainSpec::chaotic_ising(0.0, 0.0, 2).unwrap()).unwrap();
        let vals = symmetric_eigenvalues(h.matrix()).unwrap();
        for (v, e) in vals.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((v - e).abs() < 1e-14, "{vals:?}");
        }
    }

    #[test]
    fn two_site_heisenberg_ground_energy() {
        let spec = ChainSpec::xxz(1.0, vec![0.0, 0.0]).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let vals = symmetric_eigenvalues(h.matrix()).unwrap();
        let oracle_vals = linalg::hermitian_eigenvalues(oracle(&spec).as_ref()).unwrap();
        assert!((vals[0] - oracle_vals[0]).abs() < 1e-14);
        assert!((vals[0] + 1.5).abs() < 1e-14);
    }

    #[test]
    fn chaotic_parameters_build_hermitian_at_l8() {
        let spec = ChainSpec::chaotic_ising(3f64.sqrt() / 2.0, 2f64.sqrt(), 8).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        assert!(linalg::symmetric_defect(h.matrix()) < 1e-14);
    }

    #[test]
    fn rebuild_is_bit_exact() {
        let spec = ChainSpec::chaotic_ising(0.8, 1.4, 6).unwrap();
        let a = build_hamiltonian(&spec).unwrap();
        let b = build_hamiltonian(&spec).unwrap();
        assert!(a.matrix() == b.matrix());
    }

    #[test]
    fn tfim_is_ising_without_longitudinal_field() {
        let a = build_hamiltonian(&ChainSpec::tfim(1.3, 5).unwrap()).unwrap();
        let b = build_hamiltonian(&ChainSpec::chaotic_ising(0.0, 1.3, 5).unwrap()).unwrap();
        assert!(a.matrix() == b.matrix());
    }

    #[test]
    fn xxz_conserves_magnetization() {
        let spec = ChainSpec::xxz(1.0, vec![0.0; 6]).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let dim = h.dim();
        let mz: Vec<f64> = (0..dim).map(|i| 6.0 - 2.0 * i.count_ones() as f64).collect();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((h.matrix()[(i, j)] * (mz[j] - mz[i])).abs());
            }
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn sector_hamiltonian_is_a_principal_block() {
        let spec = ChainSpec::xxz(0.8, vec![0.3, -0.2, 0.5, 0.1]).unwrap();
        let full = build_hamiltonian(&spec).unwrap();
        let sec = build_hamiltonian_in_sector(&spec, 2).unwrap();
        let states = sec.sector().unwrap().states().to_vec();
        assert_eq!(states.len(), 6);
        for (a, &i) in states.iter().enumerate() {
            for (b, &j) in states.iter().enumerate() {
                assert_eq!(sec.matrix()[(a, b)], full.matrix()[(i, j)]);
            }
        }
        let ising = ChainSpec::tfim(1.0, 4).unwrap();
        assert!(build_hamiltonian_in_sector(&ising, 2).is_err());
    }

    #[test]
    fn dense_guard() {
        let spec = ChainSpec::tfim(1.0, 15).unwrap();
        assert!(matches!(build_hamiltonian(&spec), Err(Error::Resource(_))));
        assert!(ChainSpec::tfim(1.0, 1).is_err());
        assert!(ChainSpec::new(Model::Xxz { delta: 1.0, fields: vec![0.0; 3] }, 4).is_err());
    }

    #[test]
    fn disorder_zero_and_determinism() {
        let zero = DisorderSpec { strength: 0.0, seed: 1, realization_index: 0 };
        assert_eq!(sample_disorder(&zero, 5).unwrap(), vec![0.0; 5]);
        let d = DisorderSpec { strength: 2.0, seed: 7, realization_index: 3 };
        let a = sample_disorder(&d, 10).unwrap();
        let b = sample_disorder(&d, 10).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|v| v.abs() <= 2.0));
        let other = DisorderSpec { realization_index: 4, ..d };
        assert_ne!(a, sample_disorder(&other, 10).unwrap());
    }

    #[test]
    fn disorder_moments() {
        let h = 2f64.sqrt();
        let d = DisorderSpec { strength: h, seed: 11, realization_index: 0 };
        let n = 100_000;
        let xs = sample_disorder(&d, n).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let exact_var = h * h / 3.0;
        let sigma_mean = (exact_var / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * sigma_mean, "mean {mean}");
        assert!(((var - exact_var) / exact_var).abs() < 0.05, "var {var}");
    }

    #[test]
    fn product_states() {
        let z = make_initial_state(&InitialStateKind::ZPlus, 2).unwrap();
        assert_eq!(z.amplitudes()[0], C64::new(1.0, 0.0));
        assert!(z.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));

        let y = make_initial_state(&InitialStateKind::YPlus, 1).unwrap();
        assert!((y.amplitudes()[0] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((y.amplitudes()[1] - C64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);

        let neel = make_initial_state(&InitialStateKind::Neel, 4).unwrap();
        assert_eq!(neel.amplitudes()[0b0101], C64::new(1.0, 0.0));
        assert!(make_initial_state(&InitialStateKind::Neel, 5).is_err());

        let x = make_initial_state(&InitialStateKind::XPlus, 3).unwrap();
        assert!(x.amplitudes().iter().all(|a| (a.re - 8f64.sqrt().recip()).abs() < 1e-15));
    }

    #[test]
    fn y_plus_is_a_tensor_product() {
        let l = 3;
        let y = make_initial_state(&InitialStateKind::YPlus, l).unwrap();
        let site = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)];
        for i in 0..(1 << l) {
            let expected: C64 = (0..l).map(|s| site[(i >> (l - 1 - s)) & 1]).product();
            assert!((y.amplitudes()[i] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn random_state_is_seeded() {
        let k = InitialStateKind::RandomGaussian { seed: 5, real: false };
        let a = make_initial_state(&k, 4).unwrap();
        assert_eq!(a, make_initial_state(&k, 4).unwrap());
        assert!(a.amplitudes().iter().any(|v| v.im != 0.0));
        let r = make_initial_state(&InitialStateKind::RandomGaussian { seed: 5, real: true }, 4).unwrap();
        assert!(r.amplitudes().iter().all(|v| v.im == 0.0));
    }
}
