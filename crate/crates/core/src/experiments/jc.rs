use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::csv::{Cell, CsvRow};
use crate::error::Result;
use crate::models::{build_initial_state, build_jc_hamiltonian, jc_index, ModelSpec};
use crate::propagator::{collapse_propagator, precision, TaylorConfig, MAX_ORDER};
use crate::sim::{postselect_zero, run, sample_state, StateVector};
use crate::synth::{synth_oaa, synth_trotter};
use crate::PauliSum;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JcRow {
    pub t: f64,
    pub p_analytic: f64,
    pub p_lcu: f64,
    pub p_trotter: f64,
    pub depth_lcu: usize,
    pub depth_trotter: usize,
    pub cx_lcu: usize,
    pub cx_trotter: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub segments: usize,
    pub n_terms: usize,
    pub n_ancilla: usize,
    pub precision: f64,
    /// Ancilla all-zero probability of the (amplified) block encoding.
    pub p_success: f64,
}

impl CsvRow for JcRow {
    const HEADER: &'static [&'static str] = &[
        "t",
        "P_analytic",
        "P_lcu",
        "P_trotter",
        "depth_lcu",
        "depth_trotter",
        "cx_lcu",
        "cx_trotter",
        "K",
        "segments",
        "n_terms",
        "n_ancilla",
        "precision",
        "p_success",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.t.into(),
            self.p_analytic.into(),
            self.p_lcu.into(),
            self.p_trotter.into(),
            self.depth_lcu.into(),
            self.depth_trotter.into(),
            self.cx_lcu.into(),
            self.cx_trotter.into(),
            (self.k as usize).into(),
            self.segments.into(),
            self.n_terms.into(),
            self.n_ancilla.into(),
            self.precision.into(),
            self.p_success.into(),
        ]
    }
}

/// `|N,g> → |N−1,e>` transition probability, `(4g²N/Ω²) sin²(Ωt/2)`.
pub fn jc_analytic(spec: &ModelSpec, t: f64) -> f64 {
    let omega = spec.rabi_frequency();
    let n = spec.n_start as f64;
    4.0 * spec.g * spec.g * n / (omega * omega) * (omega * t / 2.0).sin().powi(2)
}

/// Collapsed propagator at time `t`, raising `K` by two while the precision
/// misses `target`.
pub fn adaptive_propagator(
    h: &PauliSum,
    psi0: &StateVector,
    t: f64,
    cfg: &RunConfig,
) -> Result<(PauliSum, TaylorConfig, f64)> {
    let mut k = cfg.taylor.k;
    loop {
        let tc = TaylorConfig::for_time(t, cfg.taylor.tau, k, cfg.taylor.eps_term)?;
        let y = collapse_propagator(h, &tc)?;
        let p = precision(&y, psi0)?;
        let done = cfg.precision_target.is_none_or(|target| p <= target);
        if done || k + 2 > MAX_ORDER {
            return Ok((y, tc, p));
        }
        k += 2;
    }
}

fn probability_of(psi: &StateVector, index: usize, qubits: &[usize], cfg: &RunConfig, salt: u64) -> Result<f64> {
    if cfg.shots == 0 {
        return Ok(psi.amplitude(index).norm_sqr() / psi.norm_sqr());
    }
    let shots = sample_state(psi, qubits, cfg.shots, cfg.seed.wrapping_add(salt))?;
    let width = qubits.len();
    Ok(shots.count(&format!("{index:0width$b}")) as f64 / shots.total() as f64)
}

fn point(h: &PauliSum, psi0: &StateVector, target: usize, t: f64, i: usize, cfg: &RunConfig) -> Result<JcRow> {
    let spec = &cfg.model;
    let n = h.n_qubits();
    let (y, tc, prec) = adaptive_propagator(h, psi0, t, cfg)?;
    let lcu = synth_oaa(&y, cfg.use_oaa)?;
    let k = lcu.n_ancilla;
    let input = StateVector::zero(k).tensor(psi0);
    let out = run(&lcu.circuit, &input)?;
    let ancillas = lcu.ancillas();
    let (p_success, post) = postselect_zero(&out, &ancillas);
    let p_lcu = if cfg.shots == 0 {
        post.map_or(0.0, |s| s.amplitude(target).norm_sqr())
    } else {
        let all: Vec<usize> = (0..k + n).collect();
        let shots = sample_state(&out, &all, cfg.shots, cfg.seed.wrapping_add(2 * i as u64))?;
        let kept = shots.zero_fraction(&ancillas) * shots.shots as f64;
        let hits = shots.count(&format!("{target:0w$b}", w = k + n)) as f64;
        if kept > 0.0 {
            hits / kept
        } else {
            0.0
        }
    };
    let trotter_tau = cfg.trotter_tau.unwrap_or(cfg.taylor.tau);
    let steps = ((t / trotter_tau) - 1e-9).ceil().max(1.0) as usize;
    let trotter = synth_trotter(h, t / steps as f64, steps)?;
    let psi_trotter = run(&trotter, psi0)?;
    let system: Vec<usize> = (0..n).collect();
    let p_trotter = probability_of(&psi_trotter, target, &system, cfg, 2 * i as u64 + 1)?;
    Ok(JcRow {
        t,
        p_analytic: jc_analytic(spec, t),
        p_lcu,
        p_trotter,
        depth_lcu: lcu.circuit.depth(),
        depth_trotter: trotter.depth(),
        cx_lcu: lcu.circuit.two_qubit_count(),
        cx_trotter: trotter.two_qubit_count(),
        k: tc.k,
        segments: tc.m,
        n_terms: y.len(),
        n_ancilla: k,
        precision: prec,
        p_success,
    })
}

/// Jaynes-Cummings Rabi transition `|N,g> → |N−1,e>` on the configured grid.
pub fn run_jc_transition(cfg: &RunConfig) -> Result<Vec<JcRow>> {
    cfg.validate()?;
    let h = build_jc_hamiltonian(&cfg.model)?;
    let psi0 = build_initial_state(&cfg.model)?;
    let target = jc_index(&cfg.model, cfg.model.n_start.saturating_sub(1), true)?;
    cfg.time_grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| point(&h, &psi0, target, t, i, cfg))
        .collect()
}
