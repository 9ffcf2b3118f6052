use std::io::BufRead;

use serde::Serialize;

use crate::error::Result;
use crate::synth::{multiplexor_cost, synth_lcu, synth_select};
use crate::PauliSum;

/// Cost summary written next to the QASM of a synthesized block encoding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthesisReport {
    pub k: usize,
    pub n: usize,
    pub n_terms: usize,
    pub l1_norm: f64,
    /// CX count of the full PREPARE · SELECT · PREPARE† circuit.
    pub cx: usize,
    pub depth: usize,
    pub cx_select: usize,
    /// Multiplexor bound on the SELECT CX count.
    pub bound: i64,
    pub bound_satisfied: bool,
}

/// Block-encodes the Pauli sum read from `reader`; returns QASM and its report.
pub fn synthesize_text<R: BufRead>(reader: R) -> Result<(String, SynthesisReport)> {
    let y = PauliSum::read_text(reader)?;
    let lcu = synth_lcu(&y)?;
    let select = synth_select(&y, lcu.n_ancilla)?;
    let bound = multiplexor_cost(lcu.n_ancilla as u32, lcu.n_system as u32);
    let cx_select = select.two_qubit_count();
    let report = SynthesisReport {
        k: lcu.n_ancilla,
        n: lcu.n_system,
        n_terms: lcu.n_terms,
        l1_norm: lcu.l1_norm,
        cx: lcu.circuit.two_qubit_count(),
        depth: lcu.circuit.depth(),
        cx_select,
        bound,
        bound_satisfied: cx_select as i64 <= bound,
    };
    Ok((lcu.circuit.to_qasm()?, report))
}
