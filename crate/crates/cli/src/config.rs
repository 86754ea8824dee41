//! Run configuration: a single JSON document selecting a scenario variant,
//! a run mode, solver knobs and the output sink.
//!
//! ```json
//! {
//!   "scenario": { "variant": "tourmaline", "alpha": 0.5796 },
//!   "mode": "enumerate",
//!   "n_traj": 100000,
//!   "seed": 0,
//!   "horizon": null,
//!   "solver": { "grid_steps": 1000, "t_tol_rel": 1e-9, "plateau_eps": 1e-6, "max_iter": 200 },
//!   "output": { "path": "out.json", "format": "json" }
//! }
//! ```
//!
//! Every field except `scenario` and `mode` has a default; `seed` defaults
//! to 0 (never wall-clock) unless `--seed auto` is passed on the command
//! line.

use serde::Deserialize;

use reduxion_core::scenarios::{ScenarioError, ScenarioParams};
use reduxion_core::{Scenario, SolverConfig};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub mode: Mode,
    #[serde(default = "default_n_traj")]
    pub n_traj: usize,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the scenario's built-in stage window when set.
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub output: Option<OutputBlock>,
}

fn default_n_traj() -> usize {
    100_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Trajectory,
    Ensemble,
    Enumerate,
    EntropyScan,
    Verify,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default = "default_grid_steps")]
    pub grid_steps: usize,
    #[serde(default = "default_t_tol_rel")]
    pub t_tol_rel: f64,
    #[serde(default = "default_plateau_eps")]
    pub plateau_eps: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_grid_steps() -> usize {
    1000
}
fn default_t_tol_rel() -> f64 {
    1e-9
}
fn default_plateau_eps() -> f64 {
    1e-6
}
fn default_max_iter() -> usize {
    200
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self {
            grid_steps: default_grid_steps(),
            t_tol_rel: default_t_tol_rel(),
            plateau_eps: default_plateau_eps(),
            max_iter: default_max_iter(),
        }
    }
}

impl SolverBlock {
    pub fn to_solver(self) -> SolverConfig {
        SolverConfig {
            grid_steps: self.grid_steps,
            t_tol_rel: self.t_tol_rel,
            plateau_eps: self.plateau_eps,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub path: String,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Scenario selection: a variant tag plus its parameter block.
#[derive(Debug, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioConfig {
    Tourmaline {
        alpha: f64,
    },
    Absorption {
        p_abs: f64,
        #[serde(default = "one")]
        tau: f64,
    },
    Emission {
        tau: f64,
        #[serde(default = "ten")]
        n_stages: usize,
    },
    Detection {
        channels: usize,
        #[serde(default)]
        taus: Option<Vec<f64>>,
        #[serde(default = "three")]
        n_stages: usize,
    },
    Superposition {
        c_s: f64,
        c_sbar: f64,
        #[serde(default = "one")]
        tau: f64,
    },
    NonintegralCascade {
        alpha0: f64,
        alpha1: f64,
        #[serde(default = "one")]
        omega: f64,
        fock_cutoff: usize,
        n_stages: usize,
    },
    EntangledPair {
        c1: f64,
        c2: f64,
        #[serde(default)]
        tau_a: Option<f64>,
        #[serde(default)]
        tau_b: Option<f64>,
    },
    AtomPhoton {
        c1: f64,
        c2: f64,
        #[serde(default = "one")]
        tau: f64,
    },
    WeakBoson {
        lambda_in: f64,
        lambda_1: f64,
    },
}

fn one() -> f64 {
    1.0
}
fn ten() -> usize {
    10
}
fn three() -> usize {
    3
}

impl ScenarioConfig {
    pub fn to_params(&self) -> ScenarioParams {
        match self {
            Self::Tourmaline { alpha } => ScenarioParams::Tourmaline { alpha: *alpha },
            Self::Absorption { p_abs, tau } => ScenarioParams::Absorption {
                p_abs: *p_abs,
                tau: *tau,
            },
            Self::Emission { tau, n_stages } => ScenarioParams::Emission {
                tau: *tau,
                n_stages: *n_stages,
            },
            Self::Detection {
                channels,
                taus,
                n_stages,
            } => ScenarioParams::Detection {
                channels: *channels,
                taus: taus.clone(),
                n_stages: *n_stages,
            },
            Self::Superposition { c_s, c_sbar, tau } => ScenarioParams::Superposition {
                c_s: *c_s,
                c_sbar: *c_sbar,
                tau: *tau,
            },
            Self::NonintegralCascade {
                alpha0,
                alpha1,
                omega,
                fock_cutoff,
                n_stages,
            } => ScenarioParams::NonIntegralCascade {
                alpha0: *alpha0,
                alpha1: *alpha1,
                omega: *omega,
                fock_cutoff: *fock_cutoff,
                n_stages: *n_stages,
            },
            Self::EntangledPair {
                c1,
                c2,
                tau_a,
                tau_b,
            } => ScenarioParams::EntangledPair {
                c1: *c1,
                c2: *c2,
                tau_a: *tau_a,
                tau_b: *tau_b,
            },
            Self::AtomPhoton { c1, c2, tau } => ScenarioParams::AtomPhoton {
                c1: *c1,
                c2: *c2,
                tau: *tau,
            },
            Self::WeakBoson {
                lambda_in,
                lambda_1,
            } => ScenarioParams::WeakBoson {
                lambda_in: *lambda_in,
                lambda_1: *lambda_1,
            },
        }
    }

    pub fn build(&self, cfg: &RunConfig) -> Result<Scenario, ScenarioError> {
        let mut sc = self.to_params().build()?;
        sc.set_solver(cfg.solver.to_solver());
        if let Some(h) = cfg.horizon {
            sc.set_horizon(h);
        }
        Ok(sc)
    }
}
