use std::fs::File;
use std::io::BufReader;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::csv::{Cell, CsvRow};
use crate::error::{Error, Result};
use crate::models::{build_initial_state, build_rh_hamiltonian, tapered_mott_state};
use crate::propagator::{
    collapse_propagator, merge_parallel_terms, norm_expectation, preselect, reduced_overlap_reconstruct,
    PropagatorRecord, SplitOperator, TaylorConfig,
};
use crate::sim::{dense_expm_reference, postselect_zero, run, sample_state, vacuum_circuit, StateVector};
use crate::synth::{ancilla_count, multiplexor_cost, synth_state_prep};
use crate::{PauliSum, DENSE_QUBIT_LIMIT};

/// Qubit count of the symmetry-reduced two-cavity register.
pub const REDUCED_QUBITS: usize = 5;

/// Hamiltonian and Mott state for a Rabi-Hubbard run. A Hamiltonian file on
/// the reduced five-qubit register pairs with the reduced Mott state.
pub fn rh_problem(cfg: &RunConfig) -> Result<(PauliSum, StateVector)> {
    let Some(path) = &cfg.hamiltonian_path else {
        return Ok((build_rh_hamiltonian(&cfg.model)?, build_initial_state(&cfg.model)?));
    };
    let h = PauliSum::read_text(BufReader::new(File::open(path)?))?;
    let n = h.n_qubits();
    let psi0 = if n == REDUCED_QUBITS {
        tapered_mott_state(cfg.model.mott_theta())
    } else if n == cfg.model.n_qubits()? {
        build_initial_state(&cfg.model)?
    } else {
        return Err(Error::InvalidSpec(format!(
            "Hamiltonian file has {n} qubits; expected {REDUCED_QUBITS} or {}",
            cfg.model.n_qubits()?
        )));
    };
    Ok((h, psi0))
}

/// The propagator at one time point and its split against `ψ0`.
pub struct Propagated {
    pub taylor: TaylorConfig,
    pub full: PauliSum,
    pub split: SplitOperator,
    /// Υ∥, merged when reduction is on.
    pub reduced: PauliSum,
    /// `<ψ0|Υ†Υ|ψ0>`.
    pub norm: f64,
}

impl Propagated {
    pub fn record(&self) -> PropagatorRecord {
        PropagatorRecord {
            t: self.taylor.time(),
            n_terms_full: self.full.len(),
            n_terms_parallel: self.split.parallel.len(),
            l1_full: self.split.l1_full,
            l1_parallel: self.reduced.l1_norm(),
            precision: (1.0 - self.norm.sqrt()).abs(),
        }
    }
}

pub fn propagate(h: &PauliSum, psi0: &StateVector, t: f64, cfg: &RunConfig) -> Result<Propagated> {
    let taylor = TaylorConfig::for_time(t, cfg.taylor.tau, cfg.taylor.k, cfg.taylor.eps_term)?;
    let full = collapse_propagator(h, &taylor)?;
    let split = preselect(&full, psi0)?;
    let reduced = if cfg.use_reduction {
        merge_parallel_terms(&split, psi0)?
    } else {
        split.parallel.clone()
    };
    if reduced.is_empty() {
        return Err(Error::Domain(format!("no parallel terms at t = {t}")));
    }
    let norm = norm_expectation(&full, psi0)?;
    Ok(Propagated {
        taylor,
        full,
        split,
        reduced,
        norm,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhRow {
    pub jt: f64,
    pub t: f64,
    pub n_terms: usize,
    pub n_terms_parallel: usize,
    pub n_terms_reduced: usize,
    pub precision: f64,
    pub l1_full: f64,
    pub l1_parallel: f64,
    pub p_parallel: f64,
    pub sq_overlap_reduced: f64,
    /// Reconstruction with the exact `<ψ0|Υ†Υ|ψ0>` denominator.
    pub sq_overlap_reconstructed: f64,
    /// Reconstruction with the denominator set to 1.
    pub sq_overlap_reconstructed_unit: f64,
    pub sq_overlap_sv: Option<f64>,
    pub p_parallel_shots: Option<f64>,
    pub sq_overlap_shots: Option<f64>,
    pub n_ancilla: usize,
    pub depth: usize,
    pub cx: usize,
}

impl CsvRow for RhRow {
    const HEADER: &'static [&'static str] = &[
        "Jt",
        "t",
        "n_terms",
        "n_terms_parallel",
        "n_terms_reduced",
        "precision",
        "l1_full",
        "l1_parallel",
        "p_parallel",
        "sq_overlap_reduced",
        "sq_overlap_reconstructed",
        "sq_overlap_reconstructed_unit",
        "sq_overlap_sv",
        "p_parallel_shots",
        "sq_overlap_shots",
        "n_ancilla",
        "depth",
        "cx",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.jt.into(),
            self.t.into(),
            self.n_terms.into(),
            self.n_terms_parallel.into(),
            self.n_terms_reduced.into(),
            self.precision.into(),
            self.l1_full.into(),
            self.l1_parallel.into(),
            self.p_parallel.into(),
            self.sq_overlap_reduced.into(),
            self.sq_overlap_reconstructed.into(),
            self.sq_overlap_reconstructed_unit.into(),
            self.sq_overlap_sv.into(),
            self.p_parallel_shots.into(),
            self.sq_overlap_shots.into(),
            self.n_ancilla.into(),
            self.depth.into(),
            self.cx.into(),
        ]
    }
}

fn overlap_point(
    h: &PauliSum,
    psi0: &StateVector,
    t: f64,
    i: usize,
    cfg: &RunConfig,
) -> Result<(RhRow, PropagatorRecord)> {
    let prop = propagate(h, psi0, t, cfg)?;
    let (circuit, k) = vacuum_circuit(&prop.reduced, psi0)?;
    let out = run(&circuit, &StateVector::zero(circuit.n_qubits))?;
    let ancillas: Vec<usize> = (0..k).collect();
    let (p_parallel, _) = postselect_zero(&out, &ancillas);
    let joint = out.amplitude(0).norm_sqr();
    let sq_overlap_reduced = if p_parallel > 0.0 { joint / p_parallel } else { 0.0 };
    let l1 = prop.reduced.l1_norm();
    let (p_parallel_shots, sq_overlap_shots) = if cfg.shots > 0 {
        let all: Vec<usize> = (0..circuit.n_qubits).collect();
        let shots = sample_state(&out, &all, cfg.shots, cfg.seed.wrapping_add(i as u64))?;
        let p = shots.zero_fraction(&ancillas);
        let j = shots.zero_fraction(&all);
        (Some(p), Some(if p > 0.0 { j / p } else { 0.0 }))
    } else {
        (None, None)
    };
    let sq_overlap_sv = if h.n_qubits() <= DENSE_QUBIT_LIMIT {
        let exact = dense_expm_reference(h, t, psi0)?;
        Some(psi0.inner(&exact)?.norm_sqr())
    } else {
        None
    };
    let row = RhRow {
        jt: cfg.model.j * t,
        t,
        n_terms: prop.full.len(),
        n_terms_parallel: prop.split.parallel.len(),
        n_terms_reduced: prop.reduced.len(),
        precision: (1.0 - prop.norm.sqrt()).abs(),
        l1_full: prop.split.l1_full,
        l1_parallel: l1,
        p_parallel,
        sq_overlap_reduced,
        sq_overlap_reconstructed: reduced_overlap_reconstruct(sq_overlap_reduced, p_parallel, l1, prop.norm)?,
        sq_overlap_reconstructed_unit: reduced_overlap_reconstruct(sq_overlap_reduced, p_parallel, l1, 1.0)?,
        sq_overlap_sv,
        p_parallel_shots,
        sq_overlap_shots,
        n_ancilla: k,
        depth: circuit.depth(),
        cx: circuit.two_qubit_count(),
    };
    Ok((row, prop.record()))
}

/// Mott-state return probability `|<ψ0|e^{−iHt}|ψ0>|²` from the reduced vacuum test.
pub fn run_rh_overlap(cfg: &RunConfig) -> Result<(Vec<RhRow>, Vec<PropagatorRecord>)> {
    cfg.validate()?;
    let (h, psi0) = rh_problem(cfg)?;
    let pairs: Vec<(RhRow, PropagatorRecord)> = cfg
        .time_grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| overlap_point(&h, &psi0, t, i, cfg))
        .collect::<Result<_>>()?;
    Ok(pairs.into_iter().unzip())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceRow {
    pub jt: f64,
    pub n_terms_full: usize,
    pub n_terms_reduced: usize,
    pub n_ancilla_full: usize,
    pub n_ancilla_reduced: usize,
    /// False when the full LCU exceeded the term guard and was costed by formula.
    pub full_synthesized: bool,
    pub cx_full: usize,
    pub cx_reduced: usize,
    pub depth_full: Option<usize>,
    pub depth_reduced: usize,
    pub cx_reduction: f64,
    pub depth_reduction: Option<f64>,
}

impl CsvRow for ResourceRow {
    const HEADER: &'static [&'static str] = &[
        "Jt",
        "n_terms_full",
        "n_terms_reduced",
        "n_ancilla_full",
        "n_ancilla_reduced",
        "full_synthesized",
        "cx_full",
        "cx_reduced",
        "depth_full",
        "depth_reduced",
        "cx_reduction",
        "depth_reduction",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.jt.into(),
            self.n_terms_full.into(),
            self.n_terms_reduced.into(),
            self.n_ancilla_full.into(),
            self.n_ancilla_reduced.into(),
            self.full_synthesized.into(),
            self.cx_full.into(),
            self.cx_reduced.into(),
            self.depth_full.into(),
            self.depth_reduced.into(),
            self.cx_reduction.into(),
            self.depth_reduction.into(),
        ]
    }
}

/// CX bound of PREPARE · SELECT · PREPARE† for `n_terms` terms on `n` qubits.
pub fn lcu_cx_bound(n_terms: usize, n: usize) -> usize {
    let k = ancilla_count(n_terms) as u32;
    let prepare = (1usize << k).saturating_sub(2);
    multiplexor_cost(k, n as u32).max(0) as usize + 2 * prepare
}

fn resource_point(h: &PauliSum, psi0: &StateVector, t: f64, cfg: &RunConfig) -> Result<ResourceRow> {
    let prop = propagate(h, psi0, t, cfg)?;
    let (reduced, k_red) = vacuum_circuit(&prop.reduced, psi0)?;
    let n_full = prop.full.len();
    let k_full = ancilla_count(n_full);
    let (cx_full, depth_full, synthesized) = if n_full <= cfg.full_term_limit {
        let (full, _) = vacuum_circuit(&prop.full, psi0)?;
        (full.two_qubit_count(), Some(full.depth()), true)
    } else {
        let prep = synth_state_prep(psi0)?.two_qubit_count();
        (lcu_cx_bound(n_full, h.n_qubits()) + 2 * prep, None, false)
    };
    let cx_reduced = reduced.two_qubit_count();
    let depth_reduced = reduced.depth();
    Ok(ResourceRow {
        jt: cfg.model.j * t,
        n_terms_full: n_full,
        n_terms_reduced: prop.reduced.len(),
        n_ancilla_full: k_full,
        n_ancilla_reduced: k_red,
        full_synthesized: synthesized,
        cx_full,
        cx_reduced,
        depth_full,
        depth_reduced,
        cx_reduction: 1.0 - cx_reduced as f64 / cx_full as f64,
        depth_reduction: depth_full.map(|d| 1.0 - depth_reduced as f64 / d as f64),
    })
}

/// Full versus reduced LCU cost on the overlap grid.
pub fn run_resources(cfg: &RunConfig) -> Result<Vec<ResourceRow>> {
    cfg.validate()?;
    let (h, psi0) = rh_problem(cfg)?;
    cfg.time_grid
        .par_iter()
        .map(|&t| resource_point(&h, &psi0, t, cfg))
        .collect()
}
