//! Deterministic work plans.
//!
//! A plan enumerates (realization, subsystem, position, time) tasks in a fixed
//! order. Workers may evaluate tasks in any order; results are collected back
//! into plan order and reduced sequentially, so the output does not depend on
//! the number of threads.

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Task {
    pub realization: u64,
    pub subsystem: usize,
    pub position: usize,
    pub time_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkPlan {
    pub num_sites: usize,
    pub realizations: Vec<u64>,
    pub subsystems: Vec<usize>,
    /// Block start positions averaged over, identical for every subsystem size.
    pub positions: Vec<usize>,
    pub times: Vec<f64>,
}

impl WorkPlan {
    pub fn task_count(&self) -> usize {
        self.realizations.len() * self.subsystems.len() * self.positions.len() * self.times.len()
    }

    /// Tasks of one realization in plan order.
    pub fn realization_tasks(&self, realization: u64) -> Vec<Task> {
        let mut out = Vec::with_capacity(self.task_count() / self.realizations.len().max(1));
        for &subsystem in &self.subsystems {
            for &position in &self.positions {
                for time_index in 0..self.times.len() {
                    out.push(Task {
                        realization,
                        subsystem,
                        position,
                        time_index,
                    });
                }
            }
        }
        out
    }

    pub fn tasks(&self) -> Vec<Task> {
        self.realizations
            .iter()
            .flat_map(|&k| self.realization_tasks(k))
            .collect()
    }
}

/// Whether block averages must run over every start position.
pub fn averages_positions(cfg: &ExperimentConfig) -> bool {
    use crate::config::Scenario;
    match &cfg.scenario {
        Scenario::Fig1Random | Scenario::FigS2TfimRandom => true,
        Scenario::Fig2Product { state } | Scenario::FigS3TfimProduct { state } => {
            !state.translation_invariant()
        }
        Scenario::Fig3Xxz { .. } | Scenario::FigS1Transition { .. } => true,
        Scenario::FigS4Quench => false,
    }
}

pub fn schedule(cfg: &ExperimentConfig, num_sites: usize) -> Result<WorkPlan> {
    let first = cfg.first_realization;
    let count = cfg.effective_realizations() as u64;
    let positions = if averages_positions(cfg) {
        (0..num_sites).collect()
    } else {
        vec![0]
    };
    Ok(WorkPlan {
        num_sites,
        realizations: (first..first + count).collect(),
        subsystems: cfg.subsystems(num_sites),
        positions,
        times: cfg.window().times(num_sites, cfg.time_samples)?,
    })
}
