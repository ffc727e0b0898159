//! Model parameters and averaging windows attached to each scenario.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::config::{Scenario, WindowRule};

/// Longitudinal field of the chaotic Ising chain, √3/2.
pub const ISING_H_X: f64 = 0.866_025_403_784_438_6;
pub const ISING_H_Z: f64 = SQRT_2;
pub const TFIM_H_Z: f64 = SQRT_2;
pub const XXZ_DELTA: f64 = 1.0;
pub const QUENCH_H0: f64 = SQRT_2;
pub const QUENCH_H1: f64 = 1.0;
/// Quench observation time t* in units of L.
pub const QUENCH_T_STAR: f64 = 0.375;

/// Averaging window [L, 2L] of the Ising scenarios.
pub const ISING_WINDOW: WindowRule = WindowRule::Scaled { start: 1.0, end: 2.0 };
/// Averaging window [4L, 8L] of the XXZ scenarios.
pub const XXZ_WINDOW: WindowRule = WindowRule::Scaled { start: 4.0, end: 8.0 };
pub const QUENCH_WINDOW: WindowRule = WindowRule::Instant { at: QUENCH_T_STAR };

/// Fixed model parameters of a scenario; absent entries do not apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<f64>,
}

pub fn parameters(scenario: &Scenario) -> Parameters {
    match scenario {
        Scenario::Fig1Random | Scenario::Fig2Product { .. } => Parameters {
            h_x: Some(ISING_H_X),
            h_z: Some(ISING_H_Z),
            ..Parameters::default()
        },
        Scenario::FigS2TfimRandom | Scenario::FigS3TfimProduct { .. } => Parameters {
            h_x: Some(0.0),
            h_z: Some(TFIM_H_Z),
            ..Parameters::default()
        },
        Scenario::Fig3Xxz { .. } | Scenario::FigS1Transition { .. } => Parameters {
            delta: Some(XXZ_DELTA),
            ..Parameters::default()
        },
        Scenario::FigS4Quench => Parameters {
            h0: Some(QUENCH_H0),
            h1: Some(QUENCH_H1),
            ..Parameters::default()
        },
    }
}

pub fn default_window(scenario: &Scenario) -> WindowRule {
    match scenario {
        Scenario::Fig1Random
        | Scenario::Fig2Product { .. }
        | Scenario::FigS2TfimRandom
        | Scenario::FigS3TfimProduct { .. } => ISING_WINDOW,
        Scenario::Fig3Xxz { .. } | Scenario::FigS1Transition { .. } => XXZ_WINDOW,
        Scenario::FigS4Quench => QUENCH_WINDOW,
    }
}
