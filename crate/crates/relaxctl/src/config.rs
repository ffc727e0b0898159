//! Experiment configuration, parsed from TOML.

use std::fmt;
use std::path::Path;

use relaxometer_core::propagate::{TimeWindow, DEFAULT_FD_STEP, DEFAULT_TIME_SAMPLES};
use relaxometer_core::spinchain::{InitialStateKind, MAX_DENSE_SITES};
use relaxometer_core::steadystate::SteadyStateKind;
use relaxometer_core::MetricKind;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::provenance;

/// Largest chain handled by the free-fermion scenario.
pub const MAX_GAUSSIAN_SITES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductState {
    XPlus,
    YPlus,
    ZPlus,
    Neel,
}

impl ProductState {
    pub fn name(self) -> &'static str {
        match self {
            ProductState::XPlus => "x_plus",
            ProductState::YPlus => "y_plus",
            ProductState::ZPlus => "z_plus",
            ProductState::Neel => "neel",
        }
    }

    pub fn initial_state(self) -> InitialStateKind {
        match self {
            ProductState::XPlus => InitialStateKind::XPlus,
            ProductState::YPlus => InitialStateKind::YPlus,
            ProductState::ZPlus => InitialStateKind::ZPlus,
            ProductState::Neel => InitialStateKind::Neel,
        }
    }

    pub fn translation_invariant(self) -> bool {
        self != ProductState::Neel
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    /// Chaotic Ising chain from Gaussian random states.
    Fig1Random,
    /// Chaotic Ising chain from a product state.
    Fig2Product { state: ProductState },
    /// Random-field XXZ chain from the Néel state.
    Fig3Xxz { h: f64 },
    /// Random-field XXZ chain swept over disorder strengths.
    FigS1Transition { strengths: Vec<f64> },
    /// Transverse-field Ising chain from Gaussian random states.
    FigS2TfimRandom,
    /// Transverse-field Ising chain from a product state.
    FigS3TfimProduct { state: ProductState },
    /// Free-fermion quench of the transverse-field Ising chain.
    FigS4Quench,
}

impl Scenario {
    pub const KINDS: [&'static str; 7] = [
        "fig1_random",
        "fig2_product",
        "fig3_xxz",
        "fig_s1_transition",
        "fig_s2_tfim_random",
        "fig_s3_tfim_product",
        "fig_s4_quench",
    ];

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Fig1Random => Self::KINDS[0],
            Scenario::Fig2Product { .. } => Self::KINDS[1],
            Scenario::Fig3Xxz { .. } => Self::KINDS[2],
            Scenario::FigS1Transition { .. } => Self::KINDS[3],
            Scenario::FigS2TfimRandom => Self::KINDS[4],
            Scenario::FigS3TfimProduct { .. } => Self::KINDS[5],
            Scenario::FigS4Quench => Self::KINDS[6],
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, Scenario::FigS4Quench)
    }

    pub fn random_state(&self) -> bool {
        matches!(self, Scenario::Fig1Random | Scenario::FigS2TfimRandom)
    }

    /// Disorder strengths for the XXZ scenarios, empty otherwise.
    pub fn disorder_strengths(&self) -> Vec<f64> {
        match self {
            Scenario::Fig3Xxz { h } => vec![*h],
            Scenario::FigS1Transition { strengths } => strengths.clone(),
            _ => Vec::new(),
        }
    }

    /// Whether different realization indices give different runs.
    pub fn is_random(&self) -> bool {
        self.random_state() || self.disorder_strengths().iter().any(|&h| h > 0.0)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Fig2Product { state } | Scenario::FigS3TfimProduct { state } => {
                write!(f, "{}[state={}]", self.kind(), state.name())
            }
            Scenario::Fig3Xxz { h } => write!(f, "{}[h={h}]", self.kind()),
            _ => f.write_str(self.kind()),
        }
    }
}

/// Times at which quantities are evaluated, in units of the chain length L.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum WindowRule {
    /// Uniform grid on [start·L, end·L], averaged.
    Scaled { start: f64, end: f64 },
    /// The single time at·L.
    Instant { at: f64 },
}

impl WindowRule {
    pub fn times(&self, num_sites: usize, samples: usize) -> Result<Vec<f64>> {
        let l = num_sites as f64;
        match *self {
            WindowRule::Scaled { start, end } => Ok(relaxometer_core::propagate::time_grid(
                TimeWindow::new(start * l, end * l)?,
                samples,
            )?),
            WindowRule::Instant { at } => Ok(vec![at * l]),
        }
    }

    /// Column text: "a:b" for a window, the time itself for an instant.
    pub fn label(&self, num_sites: usize) -> String {
        let l = num_sites as f64;
        match *self {
            WindowRule::Scaled { start, end } => format!("{}:{}", start * l, end * l),
            WindowRule::Instant { at } => format!("{}", at * l),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            WindowRule::Scaled { start, end } => {
                if !(start >= 0.0 && end > start && end.is_finite()) {
                    return invalid(format!("window [{start}, {end}] must satisfy 0 <= start < end"));
                }
            }
            WindowRule::Instant { at } => {
                if !(at >= 0.0 && at.is_finite()) {
                    return invalid(format!("instant {at} must be finite and >= 0"));
                }
            }
        }
        Ok(())
    }
}

fn one() -> usize {
    1
}

fn default_samples() -> usize {
    DEFAULT_TIME_SAMPLES
}

fn default_fd_step() -> f64 {
    DEFAULT_FD_STEP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem_ratios: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem_sizes: Option<Vec<usize>>,
    /// Overrides the scenario's averaging window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowRule>,
    pub metrics: Vec<MetricKind>,
    #[serde(default = "one")]
    pub realizations: usize,
    #[serde(default)]
    pub first_realization: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    #[serde(default = "default_samples")]
    pub time_samples: usize,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// Reference state for the steady-state distance; dense scenarios only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady_state: Option<SteadyStateKind>,
    /// Also emit one row per evaluation time.
    #[serde(default)]
    pub time_series: bool,
    /// Also emit one row per realization.
    #[serde(default)]
    pub emit_realizations: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Validation(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable in TOML")
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return invalid("`sizes` is empty");
        }
        if self.metrics.is_empty() {
            return invalid("`metrics` is empty");
        }
        for (i, m) in self.metrics.iter().enumerate() {
            if self.metrics[..i].contains(m) {
                return invalid(format!("metric {m} listed twice"));
            }
        }
        if self.realizations == 0 {
            return invalid("`realizations` must be at least 1");
        }
        if self.workers == 0 {
            return invalid("`workers` must be at least 1");
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return invalid(format!("`fd_step` must be positive, got {}", self.fd_step));
        }
        let window = self.window();
        window.validate()?;
        if matches!(window, WindowRule::Scaled { .. }) && self.time_samples < 2 {
            return invalid("`time_samples` must be at least 2 for an averaging window");
        }
        match (&self.subsystem_ratios, &self.subsystem_sizes) {
            (Some(_), Some(_)) => return invalid("give `subsystem_ratios` or `subsystem_sizes`, not both"),
            (None, None) => return invalid("one of `subsystem_ratios` or `subsystem_sizes` is required"),
            (Some(r), None) => {
                if r.is_empty() {
                    return invalid("`subsystem_ratios` is empty");
                }
                if let Some(bad) = r.iter().find(|x| !(**x > 0.0 && **x <= 1.0)) {
                    return invalid(format!("subsystem ratio {bad} is outside (0, 1]"));
                }
            }
            (None, Some(s)) => {
                if s.is_empty() {
                    return invalid("`subsystem_sizes` is empty");
                }
            }
        }
        for &l in &self.sizes {
            if l < 2 {
                return invalid(format!("chain length {l} is below 2"));
            }
            if let Some(s) = &self.subsystem_sizes {
                if let Some(bad) = s.iter().find(|&&la| la == 0 || la > l) {
                    return invalid(format!("subsystem size {bad} does not fit a chain of {l} sites"));
                }
            }
        }
        self.validate_scenario()
    }

    fn validate_scenario(&self) -> Result<()> {
        let s = &self.scenario;
        let needs_even = match s {
            Scenario::Fig2Product { state } | Scenario::FigS3TfimProduct { state } => {
                *state == ProductState::Neel
            }
            Scenario::Fig3Xxz { .. } | Scenario::FigS1Transition { .. } | Scenario::FigS4Quench => true,
            _ => false,
        };
        if needs_even {
            if let Some(l) = self.sizes.iter().find(|l| *l % 2 != 0) {
                return invalid(format!("{} needs even chain lengths, got {l}", s.kind()));
            }
        }
        if let Scenario::FigS1Transition { strengths } = s {
            if strengths.is_empty() {
                return invalid("`strengths` is empty");
            }
        }
        if let Some(h) = s.disorder_strengths().iter().find(|h| !(**h >= 0.0 && h.is_finite())) {
            return invalid(format!("disorder strength {h} must be finite and >= 0"));
        }
        if s.is_gaussian() {
            if self.metrics.contains(&MetricKind::TraceDistance) {
                return invalid("the trace distance has no Gaussian form; use bures instead");
            }
            if self.steady_state.is_some() {
                return invalid("the quench scenario always measures against its generalized Gibbs ensemble");
            }
        }
        match self.steady_state {
            Some(SteadyStateKind::Gibbs { beta }) if !beta.is_finite() => {
                invalid(format!("Gibbs β must be finite, got {beta}"))
            }
            Some(SteadyStateKind::TimeAveragedRdm { window, samples }) => {
                if !(window.end > window.start && window.start.is_finite() && window.end.is_finite()) || samples < 2 {
                    return invalid("time-averaged reference needs a proper window and at least 2 samples");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Fails with a resource error when a chain length exceeds the scenario's limit.
    pub fn check_resources(&self) -> Result<()> {
        let limit = if self.scenario.is_gaussian() {
            MAX_GAUSSIAN_SITES
        } else {
            MAX_DENSE_SITES
        };
        match self.sizes.iter().find(|&&l| l > limit) {
            Some(l) => Err(Error::Resource(format!(
                "{} supports at most {limit} sites, got {l}",
                self.scenario.kind()
            ))),
            None => Ok(()),
        }
    }

    pub fn window(&self) -> WindowRule {
        self.window.unwrap_or_else(|| provenance::default_window(&self.scenario))
    }

    /// Reference state used for the steady-state distance, if one is measured.
    pub fn reference(&self) -> Option<SteadyStateKind> {
        self.steady_state.or(match self.scenario {
            Scenario::Fig1Random | Scenario::FigS2TfimRandom => Some(SteadyStateKind::MaximallyMixed),
            _ => None,
        })
    }

    /// Realization count actually run: one when the scenario has no randomness.
    pub fn effective_realizations(&self) -> usize {
        if self.scenario.is_random() {
            self.realizations
        } else {
            1
        }
    }

    /// Copy with every default made explicit, as echoed in the output.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.window = Some(self.window());
        c.steady_state = self.reference();
        c.realizations = self.effective_realizations();
        c
    }

    /// Subsystem sizes for chain length `l`. A ratio whose L_A = x·L is not an
    /// integer contributes both neighbouring sizes.
    pub fn subsystems(&self, l: usize) -> Vec<usize> {
        let mut out: Vec<usize> = match (&self.subsystem_sizes, &self.subsystem_ratios) {
            (Some(s), _) => s.clone(),
            (None, Some(r)) => r
                .iter()
                .flat_map(|&x| {
                    let v = x * l as f64;
                    let near = v.round();
                    if (v - near).abs() < 1e-9 {
                        vec![near as usize]
                    } else {
                        vec![v.floor() as usize, v.ceil() as usize]
                    }
                })
                .filter(|&la| la >= 1 && la <= l)
                .collect(),
            (None, None) => Vec::new(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}
