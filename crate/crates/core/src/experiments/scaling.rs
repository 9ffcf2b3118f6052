use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::csv::{Cell, CsvRow};
use crate::error::Result;
use crate::models::{build_initial_state, build_rh_hamiltonian};
use crate::propagator::{collapse_propagator, merge_parallel_terms, preselect, TaylorConfig};
use crate::synth::{ancilla_count, multiplexor_cost, synth_select};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n_cavities: usize,
    pub n_qubits_system: usize,
    /// System plus prepare register of the reduced LCU.
    pub n_qubits_total: usize,
    pub n_terms_hamiltonian: usize,
    pub n_terms: usize,
    pub n_terms_parallel: usize,
    pub n_terms_reduced: usize,
    pub cx_estimate: i64,
    /// CX count of the synthesized reduced SELECT.
    pub cx_select: usize,
}

impl CsvRow for ScalingRow {
    const HEADER: &'static [&'static str] = &[
        "n_cavities",
        "n_qubits_system",
        "n_qubits_total",
        "n_terms_hamiltonian",
        "n_terms",
        "n_terms_parallel",
        "n_terms_reduced",
        "cx_estimate",
        "cx_select",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.n_cavities.into(),
            self.n_qubits_system.into(),
            self.n_qubits_total.into(),
            self.n_terms_hamiltonian.into(),
            self.n_terms.into(),
            self.n_terms_parallel.into(),
            self.n_terms_reduced.into(),
            self.cx_estimate.into(),
            self.cx_select.into(),
        ]
    }
}

fn scaling_point(cavities: usize, cfg: &RunConfig) -> Result<ScalingRow> {
    let mut spec = cfg.model.clone();
    spec.n_cavities = cavities;
    let h = build_rh_hamiltonian(&spec)?;
    let psi0 = build_initial_state(&spec)?;
    let t = cfg.time_grid[0];
    let taylor = TaylorConfig::for_time(t, cfg.taylor.tau, cfg.taylor.k, cfg.taylor.eps_term)?;
    let y = collapse_propagator(&h, &taylor)?;
    let split = preselect(&y, &psi0)?;
    let reduced = if cfg.use_reduction {
        merge_parallel_terms(&split, &psi0)?
    } else {
        split.parallel.clone()
    };
    let n = h.n_qubits();
    let k = ancilla_count(reduced.len());
    let select = synth_select(&reduced, k)?;
    Ok(ScalingRow {
        n_cavities: cavities,
        n_qubits_system: n,
        n_qubits_total: n + k,
        n_terms_hamiltonian: h.len(),
        n_terms: y.len(),
        n_terms_parallel: split.parallel.len(),
        n_terms_reduced: reduced.len(),
        cx_estimate: multiplexor_cost(k as u32, n as u32),
        cx_select: select.two_qubit_count(),
    })
}

/// Reduced-LCU size for growing Rabi-Hubbard arrays at the first grid time.
pub fn run_scaling(cfg: &RunConfig) -> Result<Vec<ScalingRow>> {
    cfg.validate()?;
    cfg.cavities.par_iter().map(|&c| scaling_point(c, cfg)).collect()
}
