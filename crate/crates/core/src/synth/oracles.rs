//! PREPARE, SELECT, state preparation, the LCU block encoding and its
//! amplified form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::{dagger, identity2, matmul2, scale2, Circuit, Gate, Mat2};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::sim::StateVector;

use super::multiplexor::{diagonal_gates, mux_rotation_gates, mux_u2_parts, split_target_diagonal, Axis};

const DIAG_TOL: f64 = 1e-12;

/// `⌈log₂ L⌉`, with `L = 1` giving 0.
pub fn ancilla_count(n_terms: usize) -> usize {
    n_terms.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Ry cascade loading `amps` (length `2^k`) from `|0…0>` onto `qubits`.
/// With `signed`, the last level absorbs real signs.
fn amplitude_cascade(amps: &[f64], qubits: &[usize], signed: bool) -> Vec<Gate> {
    let k = qubits.len();
    // norms[j][a]: norm of the subtree under prefix `a` of length `j`.
    let mut norms: Vec<Vec<f64>> = vec![Vec::new(); k + 1];
    norms[k] = amps.iter().map(|a| a.abs()).collect();
    for j in (0..k).rev() {
        norms[j] = (0..1 << j)
            .map(|a| norms[j + 1][2 * a].hypot(norms[j + 1][2 * a + 1]))
            .collect();
    }
    let mut gates = Vec::new();
    for j in 0..k {
        let last = j + 1 == k;
        let mut angles: Vec<Option<f64>> = (0..1usize << j)
            .map(|a| {
                if norms[j][a] == 0.0 {
                    None
                } else if last && signed {
                    Some(2.0 * amps[2 * a + 1].atan2(amps[2 * a]))
                } else {
                    Some(2.0 * norms[j + 1][2 * a + 1].atan2(norms[j + 1][2 * a]))
                }
            })
            .collect();
        for a in 0..angles.len() {
            if angles[a].is_none() {
                angles[a] = Some(angles[a ^ 1].unwrap_or(0.0));
            }
        }
        let angles: Vec<f64> = angles.into_iter().map(|a| a.unwrap_or(0.0)).collect();
        gates.extend(mux_rotation_gates(Axis::Ry, &angles, &qubits[..j], qubits[j]));
    }
    gates
}

/// Maps `|0…0>` to `Σ_ℓ sqrt(w_ℓ/Σw) |ℓ>` on `⌈log₂ L⌉` qubits.
pub fn synth_prepare(weights: &[f64]) -> Result<Circuit> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidSpec("weights must be finite and nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidSpec("weights are all zero".into()));
    }
    let k = ancilla_count(weights.len());
    let mut amps = vec![0.0; 1 << k];
    for (a, w) in amps.iter_mut().zip(weights) {
        *a = (w / total).sqrt();
    }
    let qubits: Vec<usize> = (0..k).collect();
    Circuit::from_gates(k, amplitude_cascade(&amps, &qubits, false), 0.0)
}

/// Circuit `U` with `U|0…0> = psi`, global phase included.
pub fn synth_state_prep(psi: &StateVector) -> Result<Circuit> {
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::Domain("cannot prepare the zero vector".into()));
    }
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("state norm {norm} is not 1")));
    }
    let n = psi.n_qubits();
    let qubits: Vec<usize> = (0..n).collect();
    let amps = psi.amplitudes();
    if amps.iter().all(|a| a.im == 0.0) {
        let re: Vec<f64> = amps.iter().map(|a| a.re).collect();
        return Ok(Circuit::from_gates(n, amplitude_cascade(&re, &qubits, true), 0.0)?.compacted());
    }
    let mags: Vec<f64> = amps.iter().map(|a| a.norm()).collect();
    let mut gates = amplitude_cascade(&mags, &qubits, false);
    let phases: Vec<f64> = amps
        .iter()
        .map(|a| if a.norm() == 0.0 { 0.0 } else { a.arg() })
        .collect();
    let (diag, phase) = diagonal_gates(&phases, &qubits);
    gates.extend(diag);
    Ok(Circuit::from_gates(n, gates, phase)?.compacted())
}

fn is_diagonal(m: &Mat2) -> bool {
    m[0][1].norm() < DIAG_TOL && m[1][0].norm() < DIAG_TOL
}

/// `Σ_ℓ |ℓ><ℓ| ⊗ (c_ℓ/|c_ℓ|) P_ℓ` on `k` ancillas (qubits `0..k`) followed by
/// the system register. Patterns `ℓ ≥ L` act as the identity.
pub fn synth_select(y: &PauliSum, n_ancilla: usize) -> Result<Circuit> {
    let l = y.len();
    if l > 1 << n_ancilla {
        return Err(Error::InvalidSpec(format!(
            "{l} terms do not fit {n_ancilla} ancilla qubits"
        )));
    }
    let k = n_ancilla;
    let n = y.n_qubits();
    let patterns = 1usize << k;
    let controls: Vec<usize> = (0..k).collect();
    let terms: Vec<_> = y.iter().map(|(s, c)| (*s, *c)).collect();

    let mut circuit = Circuit::new(k + n);
    let mut control_diag = vec![0.0; patterns];
    for j in 0..n {
        let t = k + j;
        let targets: Vec<Mat2> = (0..patterns)
            .map(|a| match terms.get(a) {
                None => identity2(),
                Some((s, c)) => {
                    let m = s.letter(j).matrix();
                    if j == 0 {
                        scale2(&m, c / c.norm())
                    } else {
                        m
                    }
                }
            })
            .collect();
        let v0_dag = dagger(&targets[0]);
        let rel: Vec<Mat2> = targets.iter().map(|v| matmul2(&v0_dag, v)).collect();
        // V_a = V_0 D_a with D_a diagonal: phase multiplexor, then V_0.
        if rel.iter().all(is_diagonal) {
            let diag: Vec<f64> = rel.iter().flat_map(|d| [d[0][0].arg(), d[1][1].arg()]).collect();
            let (theta, mean) = split_target_diagonal(&diag);
            circuit.gates.extend(mux_rotation_gates(Axis::Rz, &theta, &controls, t));
            circuit.push(Gate::U2 {
                qubit: t,
                matrix: targets[0],
            });
            control_diag.iter_mut().zip(mean).for_each(|(acc, m)| *acc += m);
            continue;
        }
        let parts = mux_u2_parts(&targets, &controls, t)?;
        circuit.gates.extend(parts.gates);
        let (theta, mean) = split_target_diagonal(&parts.diag);
        circuit.gates.extend(mux_rotation_gates(Axis::Rz, &theta, &controls, t));
        control_diag.iter_mut().zip(mean).for_each(|(acc, m)| *acc += m);
        circuit.add_phase(parts.phase);
    }
    let (gates, phase) = diagonal_gates(&control_diag, &controls);
    circuit.gates.extend(gates);
    circuit.add_phase(phase);
    circuit.validate()?;
    Ok(circuit.compacted())
}

/// An LCU-style circuit with its register split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LcuCircuit {
    pub circuit: Circuit,
    pub n_ancilla: usize,
    pub n_system: usize,
    pub n_terms: usize,
    pub l1_norm: f64,
}

impl LcuCircuit {
    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.n_ancilla).collect()
    }
}

/// PREPARE · SELECT · PREPARE† with ancillas first; the ancilla-zero block is `Υ/|α|₁`.
pub fn synth_lcu(y: &PauliSum) -> Result<LcuCircuit> {
    if y.is_empty() {
        return Err(Error::InvalidSpec("cannot block-encode an empty sum".into()));
    }
    let k = ancilla_count(y.len());
    let n = y.n_qubits();
    let weights: Vec<f64> = y.iter().map(|(_, c)| c.norm()).collect();
    let prep = synth_prepare(&weights)?;
    let select = synth_select(y, k)?;
    let anc: Vec<usize> = (0..k).collect();
    let mut c = Circuit::new(k + n);
    c.append_mapped(&prep, &anc);
    c.append(&select);
    c.append_mapped(&prep.inverse(), &anc);
    Ok(LcuCircuit {
        circuit: c.compacted(),
        n_ancilla: k,
        n_system: n,
        n_terms: y.len(),
        l1_norm: y.l1_norm(),
    })
}

/// `W` followed by `rounds` applications of `A = −W R W† R`, where
/// `R = (I − 2|0><0|) ⊗ I` on the ancillas.
pub fn synth_oaa(y: &PauliSum, rounds: usize) -> Result<LcuCircuit> {
    let mut lcu = synth_lcu(y)?;
    if rounds == 0 {
        return Ok(lcu);
    }
    let w = lcu.circuit.clone();
    let w_dag = w.inverse();
    let k = lcu.n_ancilla;
    let mut r = Circuit::new(w.n_qubits);
    let mut phases = vec![0.0; 1 << k];
    phases[0] = PI;
    let anc: Vec<usize> = (0..k).collect();
    let (gates, phase) = diagonal_gates(&phases, &anc);
    r.gates = gates;
    r.global_phase = phase;
    let mut c = w.clone();
    for _ in 0..rounds {
        c.append(&r);
        c.append(&w_dag);
        c.append(&r);
        c.append(&w);
        c.add_phase(PI);
    }
    lcu.circuit = c.compacted();
    Ok(lcu)
}
