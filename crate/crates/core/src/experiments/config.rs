use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    JcTransition,
    RhOverlap,
    Resources,
    Scaling,
}

/// Taylor settings shared by every time point; the segment count is derived
/// per point as `m = ceil(t / tau)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorSettings {
    #[serde(rename = "K")]
    pub k: u32,
    pub tau: f64,
    pub eps_term: f64,
}

fn default_true() -> bool {
    true
}

fn default_full_term_limit() -> usize {
    1024
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: ModelSpec,
    pub taylor: TaylorSettings,
    /// Physical times `t` in units of `1/ω_c`.
    pub time_grid: Vec<f64>,
    /// 0 selects exact probabilities.
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    /// Amplification rounds for the Jaynes-Cummings LCU circuits.
    #[serde(default)]
    pub use_oaa: usize,
    #[serde(default = "default_true")]
    pub use_reduction: bool,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Pauli-sum text file replacing the built Hamiltonian (e.g. a
    /// symmetry-reduced operator); five-qubit files pair with the reduced Mott state.
    #[serde(default)]
    pub hamiltonian_path: Option<PathBuf>,
    /// Raise `K` per time point until the propagator precision meets this.
    #[serde(default)]
    pub precision_target: Option<f64>,
    /// Trotter step width; defaults to `taylor.tau`.
    #[serde(default)]
    pub trotter_tau: Option<f64>,
    /// Cavity counts swept by the scaling run.
    #[serde(default)]
    pub cavities: Vec<usize>,
    /// Full (unreduced) LCUs above this many terms are costed by formula
    /// instead of synthesized.
    #[serde(default = "default_full_term_limit")]
    pub full_term_limit: usize,
}

impl RunConfig {
    pub fn preset(experiment: Experiment) -> RunConfig {
        match experiment {
            Experiment::JcTransition => {
                let model = ModelSpec::jaynes_cummings(0.01, 0.001, 4);
                let omega = model.rabi_frequency();
                let period = 2.0 * PI / omega;
                RunConfig {
                    experiment,
                    taylor: TaylorSettings {
                        k: 8,
                        tau: period / 625.0,
                        eps_term: 1e-8,
                    },
                    time_grid: (1..=25).map(|i| i as f64 * period / 25.0).collect(),
                    precision_target: Some(1e-3),
                    ..RunConfig::base(experiment, model)
                }
            }
            Experiment::RhOverlap | Experiment::Resources => {
                let model = ModelSpec::rabi_hubbard_default();
                let j = model.j;
                RunConfig {
                    taylor: TaylorSettings {
                        k: 8,
                        tau: 0.05,
                        eps_term: 1e-8,
                    },
                    time_grid: (1..=10).map(|i| i as f64 * 0.1 / j).collect(),
                    ..RunConfig::base(experiment, model)
                }
            }
            Experiment::Scaling => {
                let mut model = ModelSpec::rabi_hubbard_default();
                model.max_photons = 3;
                let tau = 0.02 / model.j;
                RunConfig {
                    taylor: TaylorSettings {
                        k: 6,
                        tau,
                        eps_term: 1e-8,
                    },
                    time_grid: vec![tau],
                    cavities: vec![2, 3, 4],
                    ..RunConfig::base(experiment, model)
                }
            }
        }
    }

    fn base(experiment: Experiment, model: ModelSpec) -> RunConfig {
        RunConfig {
            experiment,
            model,
            taylor: TaylorSettings {
                k: 8,
                tau: 0.05,
                eps_term: 1e-8,
            },
            time_grid: Vec::new(),
            shots: 0,
            seed: 0,
            use_oaa: 0,
            use_reduction: true,
            output_path: None,
            hamiltonian_path: None,
            precision_target: None,
            trotter_tau: None,
            cavities: Vec::new(),
            full_term_limit: default_full_term_limit(),
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.time_grid.is_empty() {
            return bad("time_grid must be nonempty".into());
        }
        if self.time_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return bad("time_grid entries must be positive".into());
        }
        if self.time_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("time_grid must be strictly increasing".into());
        }
        if self.taylor.tau.is_nan() || self.taylor.tau <= 0.0 || self.taylor.eps_term.is_nan() || self.taylor.eps_term < 0.0 {
            return bad("taylor.tau must be positive and eps_term nonnegative".into());
        }
        if self.trotter_tau.is_some_and(|t| t.is_nan() || t <= 0.0) {
            return bad("trotter_tau must be positive".into());
        }
        let expected_model = match self.experiment {
            Experiment::JcTransition => ModelKind::JaynesCummings,
            _ => ModelKind::RabiHubbard,
        };
        if self.model.model != expected_model {
            return bad(format!(
                "{:?} needs a {:?} model",
                self.experiment, expected_model
            ));
        }
        if self.use_oaa > 0 && self.experiment != Experiment::JcTransition {
            return bad("use_oaa applies to jc_transition only".into());
        }
        if matches!(self.experiment, Experiment::RhOverlap | Experiment::Resources) {
            let j = self.model.j;
            if self.time_grid.iter().any(|t| j * t > 1.0 + 1e-12) {
                return bad("Jt grid must lie in (0, 1]".into());
            }
        }
        if self.experiment == Experiment::Scaling && self.cavities.iter().any(|&c| c < 1) {
            return bad("cavity counts must be positive".into());
        }
        Ok(())
    }
}
