//! Scenario execution: disorder, position and time averaging.

use rayon::prelude::*;
use relaxometer_core::freefermion::{
    block_covariance, gaussian_bures_speed, gaussian_metric, QuenchDynamics, QuenchSpec,
};
use relaxometer_core::propagate::{diagonalize, reduced_trace_distance, speed_from_derivative, EigenBasis, Trajectory};
use relaxometer_core::qmetric::{self, Block, BlockLayout, DensityMatrix, StateVector};
use relaxometer_core::sampling::{random_state, seeded_rng};
use relaxometer_core::spinchain::{
    build_hamiltonian, build_hamiltonian_in_sector, make_initial_state, sample_disorder, ChainSpec,
    DisorderSpec, Hamiltonian, InitialStateKind,
};
use relaxometer_core::steadystate::{distance_to_maximally_mixed, steady_rdm, total_steady_distance, SteadyStateKind};
use relaxometer_core::{MetricKind, C64};

use crate::config::{ExperimentConfig, Scenario};
use crate::emit::{Row, SweepResult};
use crate::error::{Error, Result};
use crate::provenance::{self, Parameters};
use crate::schedule::{schedule, WorkPlan};

/// Slack on the bound v_A ≤ ΔH for emitted normalized speeds.
pub const SPEED_BOUND_SLACK: f64 = 1e-8;
/// Tolerance of the translation-invariance spot check.
pub const SPOT_CHECK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// Subsystem evolution speed.
    Speed,
    /// Distance of the block to its steady-state reference.
    SteadyDistance,
    /// Distance of the block to its initial state.
    InitialDistance,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Speed => "speed",
            Quantity::SteadyDistance => "ss_distance",
            Quantity::InitialDistance => "ini_distance",
        }
    }
}

/// `quantity/metric` as written to the metric column.
pub fn metric_label(quantity: &str, metric: MetricKind) -> String {
    format!("{quantity}/{}", metric.name())
}

/// Whole-chain speed of a pure state equals ΔH for these metrics.
fn total_speed_defined(metric: MetricKind) -> bool {
    metric != MetricKind::RelativeDistance
}

fn bounded_by_energy_fluctuation(metric: MetricKind) -> bool {
    matches!(metric, MetricKind::TraceDistance | MetricKind::Bures)
}

/// Runs every chain length of the configured scenario.
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    cfg.check_resources()?;
    let cfg = cfg.resolved();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_resolved(&cfg))
}

fn run_resolved(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for case in cases(cfg) {
        for &l in &cfg.sizes {
            log::info!("{} L={l}", case.label);
            let plan = schedule(cfg, l)?;
            log::debug!("{} tasks", plan.task_count());
            let summary = if cfg.scenario.is_gaussian() {
                gaussian_size(cfg, &case, &plan, &mut warnings)?
            } else {
                dense_size(cfg, &case, &plan)?
            };
            rows.extend(summary.rows(cfg, &case, &plan));
        }
    }
    for r in &rows {
        let bounded = MetricKind::ALL
            .iter()
            .any(|&m| bounded_by_energy_fluctuation(m) && r.metric == metric_label("speed", m));
        if let (true, Some(v)) = (bounded, r.value_normalized) {
            if v > 1.0 + SPEED_BOUND_SLACK {
                return Err(Error::Invariant(format!(
                    "normalized speed {v} exceeds 1 for {} L={} L_A={}",
                    r.scenario, r.l, r.l_a
                )));
            }
        }
    }
    Ok(SweepResult {
        config: cfg.clone(),
        parameters: provenance::parameters(&cfg.scenario),
        warnings,
        rows,
    })
}

/// One fixed parameter set of a scenario; a disorder sweep has one case per strength.
#[derive(Clone, Debug)]
struct Case {
    label: String,
    model: Model,
    initial: Initial,
}

#[derive(Clone, Copy, Debug)]
enum Model {
    Ising { h_x: f64, h_z: f64 },
    Xxz { delta: f64, h: f64 },
    Quench { h0: f64, h1: f64 },
}

#[derive(Clone, Debug)]
enum Initial {
    Random,
    Fixed(InitialStateKind),
}

fn cases(cfg: &ExperimentConfig) -> Vec<Case> {
    let p: Parameters = provenance::parameters(&cfg.scenario);
    let ising = Model::Ising {
        h_x: p.h_x.unwrap_or_default(),
        h_z: p.h_z.unwrap_or_default(),
    };
    let label = cfg.scenario.to_string();
    match &cfg.scenario {
        Scenario::Fig1Random | Scenario::FigS2TfimRandom => vec![Case {
            label,
            model: ising,
            initial: Initial::Random,
        }],
        Scenario::Fig2Product { state } | Scenario::FigS3TfimProduct { state } => vec![Case {
            label,
            model: ising,
            initial: Initial::Fixed(state.initial_state()),
        }],
        Scenario::Fig3Xxz { .. } | Scenario::FigS1Transition { .. } => cfg
            .scenario
            .disorder_strengths()
            .into_iter()
            .map(|h| Case {
                label: format!("{}[h={h}]", cfg.scenario.kind()),
                model: Model::Xxz {
                    delta: p.delta.unwrap_or_default(),
                    h,
                },
                initial: Initial::Fixed(InitialStateKind::Neel),
            })
            .collect(),
        Scenario::FigS4Quench => vec![Case {
            label,
            model: Model::Quench {
                h0: p.h0.unwrap_or_default(),
                h1: p.h1.unwrap_or_default(),
            },
            initial: Initial::Fixed(InitialStateKind::ZPlus),
        }],
    }
}

impl Case {
    fn disordered(&self) -> bool {
        matches!(self.model, Model::Xxz { h, .. } if h > 0.0)
    }

    fn hamiltonian(&self, l: usize, seed: u64, realization: u64) -> Result<Hamiltonian> {
        Ok(match self.model {
            Model::Ising { h_x, h_z } => build_hamiltonian(&ChainSpec::chaotic_ising(h_x, h_z, l)?)?,
            Model::Xxz { delta, h } => {
                let fields = sample_disorder(
                    &DisorderSpec {
                        strength: h,
                        seed,
                        realization_index: realization,
                    },
                    l,
                )?;
                build_hamiltonian_in_sector(&ChainSpec::xxz(delta, fields)?, l / 2)?
            }
            Model::Quench { .. } => unreachable!("quench cases take the Gaussian path"),
        })
    }

    fn initial_state(&self, l: usize, seed: u64, realization: u64) -> Result<StateVector> {
        Ok(match &self.initial {
            Initial::Random => random_state(&mut seeded_rng(seed, realization), l)?,
            Initial::Fixed(kind) => make_initial_state(kind, l)?,
        })
    }
}

/// Position-averaged time series of one realization.
#[derive(Clone, Debug)]
struct RealizationSeries {
    realization: u64,
    /// ΔH, the whole-chain speed.
    total_speed: f64,
    /// Whole-chain steady-state distance per metric, where defined.
    total_steady: Vec<Option<f64>>,
    /// Indexed by [subsystem][slot][time].
    series: Vec<Vec<Vec<f64>>>,
}

/// Which (quantity, metric) pairs a task evaluates, in slot order.
#[derive(Clone, Debug)]
struct Slots {
    entries: Vec<(Quantity, MetricKind)>,
}

impl Slots {
    fn new(cfg: &ExperimentConfig) -> Self {
        let mut entries = Vec::new();
        let mut quantities = vec![Quantity::Speed];
        if cfg.scenario.is_gaussian() || cfg.steady_state.is_some() {
            quantities.push(Quantity::SteadyDistance);
        }
        if cfg.time_series {
            quantities.push(Quantity::InitialDistance);
        }
        for q in quantities {
            for &m in &cfg.metrics {
                entries.push((q, m));
            }
        }
        Self { entries }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Averages `values` (laid out as [subsystem][position][time][slot]) over positions.
fn position_average(plan: &WorkPlan, slots: usize, values: &[Vec<f64>]) -> Vec<Vec<Vec<f64>>> {
    let (np, nt) = (plan.positions.len(), plan.times.len());
    plan.subsystems
        .iter()
        .enumerate()
        .map(|(si, _)| {
            (0..slots)
                .map(|s| {
                    (0..nt)
                        .map(|ti| {
                            let mut acc = 0.0;
                            for pi in 0..np {
                                acc += values[(si * np + pi) * nt + ti][s];
                            }
                            acc / np as f64
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

struct SizeSummary {
    slots: Slots,
    realizations: Vec<RealizationSeries>,
}

fn dense_size(cfg: &ExperimentConfig, case: &Case, plan: &WorkPlan) -> Result<SizeSummary> {
    let l = plan.num_sites;
    let slots = Slots::new(cfg);
    let shared = if case.disordered() {
        None
    } else {
        Some(diagonalize(&case.hamiltonian(l, cfg.base_seed, 0)?)?)
    };
    let layouts: Vec<Vec<BlockLayout>> = plan
        .subsystems
        .iter()
        .map(|&la| {
            plan.positions
                .iter()
                .map(|&p| Ok(BlockLayout::new(Block::new(p, la, l)?, l)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let realizations = plan
        .realizations
        .par_iter()
        .map(|&k| {
            let owned;
            let basis = match &shared {
                Some(b) => b,
                None => {
                    owned = diagonalize(&case.hamiltonian(l, cfg.base_seed, k)?)?;
                    &owned
                }
            };
            dense_realization(cfg, case, plan, &slots, &layouts, basis, k)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SizeSummary { slots, realizations })
}

fn dense_realization(
    cfg: &ExperimentConfig,
    case: &Case,
    plan: &WorkPlan,
    slots: &Slots,
    layouts: &[Vec<BlockLayout>],
    basis: &EigenBasis,
    k: u64,
) -> Result<RealizationSeries> {
    let l = plan.num_sites;
    let psi0 = case.initial_state(l, cfg.base_seed, k)?;
    let traj = Trajectory::new(basis, &psi0)?;
    let pairs = traj.states_and_derivatives_at(&plan.times);
    let dt = cfg.fd_step;
    let later = if cfg.metrics.iter().any(|&m| m != MetricKind::TraceDistance) {
        let shifted: Vec<f64> = plan.times.iter().map(|t| t + dt).collect();
        Some(traj.states_at(&shifted)?)
    } else {
        None
    };
    let reference = cfg.steady_state;
    let references: Option<Vec<Vec<DensityMatrix>>> = match reference {
        Some(kind) if kind != SteadyStateKind::MaximallyMixed => Some(
            layouts
                .iter()
                .map(|row| row.iter().map(|lay| Ok(steady_rdm(kind, basis, &psi0, lay)?)).collect())
                .collect::<Result<_>>()?,
        ),
        _ => None,
    };
    let total_steady = cfg
        .metrics
        .iter()
        .map(|&m| match (reference, m) {
            (Some(kind), MetricKind::TraceDistance) => Ok(total_steady_distance(kind, &traj)?),
            _ => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;

    let np = plan.positions.len();
    let tasks = plan.realization_tasks(k);
    let values = tasks
        .par_iter()
        .enumerate()
        .map(|(n, task)| {
            let si = n / (np * plan.times.len());
            let pi = (n / plan.times.len()) % np;
            let lay = &layouts[si][pi];
            let (psi, hpsi) = &pairs[task.time_index];
            let state = || StateVector::new(psi.clone(), l);
            let mut rho = None;
            let mut reduced = |lay: &BlockLayout| -> Result<DensityMatrix> {
                if rho.is_none() {
                    rho = Some(lay.reduce(&state()?)?);
                }
                Ok(rho.clone().expect("just set"))
            };
            let mut out = Vec::with_capacity(slots.len());
            for &(q, m) in &slots.entries {
                let v = match (q, m) {
                    (Quantity::Speed, MetricKind::TraceDistance) => speed_from_derivative(lay, psi, hpsi)?,
                    (Quantity::Speed, _) => {
                        let next = &later.as_ref().expect("computed for FD metrics")[task.time_index];
                        qmetric::distance(m, &reduced(lay)?, &lay.reduce(next)?)? / dt
                    }
                    (Quantity::SteadyDistance, _) => match &references {
                        None if m == MetricKind::TraceDistance => distance_to_maximally_mixed(lay, psi)?,
                        None => {
                            let mm = DensityMatrix::maximally_mixed(lay.block().len)?;
                            qmetric::distance(m, &reduced(lay)?, &mm)?
                        }
                        Some(refs) => qmetric::distance(m, &reduced(lay)?, &refs[si][pi])?,
                    },
                    (Quantity::InitialDistance, MetricKind::TraceDistance) => {
                        reduced_trace_distance(lay, psi0.amplitudes(), psi)?
                    }
                    (Quantity::InitialDistance, _) => qmetric::distance(m, &reduced(lay)?, &lay.reduce(&psi0)?)?,
                };
                out.push(v);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    if np == 1 && k == plan.realizations[0] {
        dense_spot_check(plan, &pairs[0])?;
    }
    Ok(RealizationSeries {
        realization: k,
        total_speed: traj.energy_fluctuation(),
        total_steady,
        series: position_average(plan, slots.len(), &values),
    })
}

/// Confirms on one sample that skipping the position average is harmless.
fn dense_spot_check(plan: &WorkPlan, pair: &(Vec<C64>, Vec<C64>)) -> Result<()> {
    let l = plan.num_sites;
    let Some(&la) = plan.subsystems.iter().find(|&&la| la < l) else {
        return Ok(());
    };
    let at = |p: usize| -> Result<f64> {
        let lay = BlockLayout::new(Block::new(p, la, l)?, l)?;
        Ok(speed_from_derivative(&lay, &pair.0, &pair.1)?)
    };
    let (a, b) = (at(0)?, at(1)?);
    if (a - b).abs() > SPOT_CHECK_TOL * a.abs().max(1.0) {
        return Err(Error::Invariant(format!(
            "block speed depends on position (L={l}, L_A={la}: {a} vs {b})"
        )));
    }
    Ok(())
}

fn gaussian_size(
    cfg: &ExperimentConfig,
    case: &Case,
    plan: &WorkPlan,
    warnings: &mut Vec<String>,
) -> Result<SizeSummary> {
    let Model::Quench { h0, h1 } = case.model else {
        unreachable!("dense cases take the dense path")
    };
    let l = plan.num_sites;
    let slots = Slots::new(cfg);
    let dynamics = QuenchDynamics::new(QuenchSpec::new(h0, h1, l)?)?;
    let gge = dynamics.gge();
    let dt = cfg.fd_step;
    let covariances: Vec<_> = plan
        .times
        .par_iter()
        .map(|&t| (dynamics.covariance_at(t), dynamics.covariance_at(t + dt), dynamics.covariance_rate_at(t)))
        .collect();
    let k = plan.realizations[0];
    let tasks = plan.realization_tasks(k);
    let values = tasks
        .par_iter()
        .map(|task| {
            let block = Block::new(task.position, task.subsystem, l)?;
            let (now, next, rate) = &covariances[task.time_index];
            let a = block_covariance(now, block)?;
            let mut regularized = false;
            let mut out = Vec::with_capacity(slots.len());
            for &(q, m) in &slots.entries {
                if (q, m) == (Quantity::Speed, MetricKind::Bures) {
                    out.push(gaussian_bures_speed(now, rate.as_ref(), block)?);
                    continue;
                }
                let other = match q {
                    Quantity::Speed => block_covariance(next, block)?,
                    Quantity::SteadyDistance => block_covariance(&gge, block)?,
                    Quantity::InitialDistance => block_covariance(dynamics.initial(), block)?,
                };
                let d = gaussian_metric(&a, &other, m)?;
                regularized |= d.regularized;
                out.push(if q == Quantity::Speed { d.value / dt } else { d.value });
            }
            Ok((out, regularized))
        })
        .collect::<Result<Vec<_>>>()?;
    let flagged = values.iter().filter(|(_, r)| *r).count();
    if flagged > 0 {
        let msg = format!("{} L={l}: {flagged} Gaussian evaluations were regularized", case.label);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let values: Vec<Vec<f64>> = values.into_iter().map(|(v, _)| v).collect();
    let width = slots.len();

    if let Some(&la) = plan.subsystems.iter().find(|&&la| la < l) {
        let a = block_covariance(&covariances[0].0, Block::new(0, la, l)?)?;
        let b = block_covariance(&covariances[0].0, Block::new(1, la, l)?)?;
        let (a, b) = (a.matrix(), b.matrix());
        let mut gap = 0.0f64;
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                gap = gap.max((a[(i, j)] - b[(i, j)]).abs());
            }
        }
        if gap > SPOT_CHECK_TOL {
            return Err(Error::Invariant(format!(
                "Gaussian block covariance depends on position (L={l}, L_A={la}: max entry gap {gap:e})"
            )));
        }
    }

    let total_steady = cfg
        .metrics
        .iter()
        .map(|&m| {
            let mut acc = 0.0;
            for (now, _, _) in &covariances {
                acc += gaussian_metric(now, &gge, m)?.value;
            }
            Ok(Some(acc / covariances.len() as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SizeSummary {
        slots,
        realizations: vec![RealizationSeries {
            realization: k,
            total_speed: dynamics.energy_fluctuation(),
            total_steady,
            series: position_average(plan, width, &values),
        }],
    })
}

fn mean(v: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = v.len() as f64;
    v.sum::<f64>() / n
}

/// Standard error of the mean, present for more than one sample.
fn stderr(v: &[f64]) -> Option<f64> {
    let n = v.len();
    if n < 2 {
        return None;
    }
    let m = mean(v.iter().copied());
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    Some((var / n as f64).sqrt())
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

impl SizeSummary {
    fn rows(&self, cfg: &ExperimentConfig, case: &Case, plan: &WorkPlan) -> Vec<Row> {
        let l = plan.num_sites;
        let window = cfg.window();
        let seed = |ks: &[u64]| -> String {
            match ks {
                _ if !cfg.scenario.is_random() => cfg.base_seed.to_string(),
                [k] => format!("{}:{k}", cfg.base_seed),
                [first, .., last] => format!("{}:{first}-{last}", cfg.base_seed),
                [] => cfg.base_seed.to_string(),
            }
        };
        let all: Vec<u64> = self.realizations.iter().map(|r| r.realization).collect();
        let row = |l_a: usize, when: String, metric: String, value: f64, norm: Option<f64>, err: Option<f64>, seed: String| Row {
            scenario: case.label.clone(),
            l,
            l_a,
            x: l_a as f64 / l as f64,
            t_or_window: when,
            metric,
            value,
            value_normalized: norm,
            stderr: err,
            seed,
        };
        let total_speed: Vec<f64> = self.realizations.iter().map(|r| r.total_speed).collect();
        let mean_total_speed = mean(total_speed.iter().copied());
        let total_steady = |slot_metric: usize| -> Option<f64> {
            let v: Option<Vec<f64>> = self.realizations.iter().map(|r| r.total_steady[slot_metric]).collect();
            v.map(|v| mean(v.into_iter()))
        };
        let metric_index = |m: MetricKind| cfg.metrics.iter().position(|&x| x == m).expect("slot metric configured");
        let normalizer = |q: Quantity, m: MetricKind, speed: f64, steady: Option<f64>| -> Option<f64> {
            match q {
                Quantity::Speed if total_speed_defined(m) => Some(speed),
                Quantity::SteadyDistance => steady,
                _ => None,
            }
        };

        let mut rows = Vec::new();
        for (si, &l_a) in plan.subsystems.iter().enumerate() {
            for (s, &(q, m)) in self.slots.entries.iter().enumerate() {
                if q == Quantity::InitialDistance {
                    continue;
                }
                let per: Vec<f64> = self
                    .realizations
                    .iter()
                    .map(|r| mean(r.series[si][s].iter().copied()))
                    .collect();
                let value = mean(per.iter().copied());
                let norm = normalizer(q, m, mean_total_speed, total_steady(metric_index(m)));
                rows.push(row(
                    l_a,
                    window.label(l),
                    metric_label(q.name(), m),
                    value,
                    norm.and_then(|d| ratio(value, d)),
                    stderr(&per),
                    seed(&all),
                ));
                if cfg.emit_realizations && self.realizations.len() > 1 {
                    for (r, &v) in self.realizations.iter().zip(&per) {
                        let d = normalizer(q, m, r.total_speed, r.total_steady[metric_index(m)]);
                        rows.push(row(
                            l_a,
                            window.label(l),
                            metric_label(q.name(), m),
                            v,
                            d.and_then(|d| ratio(v, d)),
                            None,
                            seed(&[r.realization]),
                        ));
                    }
                }
            }
            if cfg.time_series {
                for (ti, &t) in plan.times.iter().enumerate() {
                    for (s, &(q, m)) in self.slots.entries.iter().enumerate() {
                        let at: Vec<f64> = self.realizations.iter().map(|r| r.series[si][s][ti]).collect();
                        let value = mean(at.iter().copied());
                        let norm = normalizer(q, m, mean_total_speed, total_steady(metric_index(m)));
                        rows.push(row(
                            l_a,
                            t.to_string(),
                            metric_label(q.name(), m),
                            value,
                            norm.and_then(|d| ratio(value, d)),
                            stderr(&at),
                            seed(&all),
                        ));
                        if q == Quantity::Speed {
                            let dev: Vec<f64> = self
                                .realizations
                                .iter()
                                .map(|r| r.series[si][s][ti] - mean(r.series[si][s].iter().copied()))
                                .collect();
                            let value = mean(dev.iter().copied());
                            rows.push(row(
                                l_a,
                                t.to_string(),
                                metric_label("speed_deviation", m),
                                value,
                                norm.and_then(|d| ratio(value, d)),
                                stderr(&dev),
                                seed(&all),
                            ));
                            let abs: Vec<f64> = dev.iter().map(|d| d.abs()).collect();
                            let value = mean(abs.iter().copied());
                            rows.push(row(
                                l_a,
                                t.to_string(),
                                metric_label("speed_abs_deviation", m),
                                value,
                                norm.and_then(|d| ratio(value, d)),
                                stderr(&abs),
                                seed(&all),
                            ));
                        }
                    }
                }
            }
        }
        for &m in &cfg.metrics {
            if total_speed_defined(m) {
                rows.push(row(
                    l,
                    window.label(l),
                    metric_label("total_speed", m),
                    mean_total_speed,
                    None,
                    stderr(&total_speed),
                    seed(&all),
                ));
            }
            if let Some(d) = total_steady(metric_index(m)) {
                let per: Vec<f64> = self
                    .realizations
                    .iter()
                    .filter_map(|r| r.total_steady[metric_index(m)])
                    .collect();
                rows.push(row(
                    l,
                    window.label(l),
                    metric_label("total_ss_distance", m),
                    d,
                    None,
                    stderr(&per),
                    seed(&all),
                ));
            }
        }
        rows
    }
}
