//! Hamiltonian time evolution with a single collapsed linear combination of
//! unitaries (LCU).
//!
//! The pipeline is: build a qubit Hamiltonian ([`models`]), expand the
//! truncated Taylor propagator into one Pauli sum ([`propagator`]), lower the
//! PREPARE/SELECT oracles to CX + single-qubit gates through quantum
//! multiplexor decompositions ([`synth`]), and check every circuit on the
//! dense statevector simulator ([`sim`]). [`experiments`] strings these
//! together into the batch runs exposed by the `lcu` binary.
//!
//! Basis convention used everywhere: qubit 0 is the most significant bit of a
//! basis index, so the ket `|q0 q1 ... q(n-1)>` reads left to right.

pub mod circuit;
pub mod error;
pub mod experiments;
pub mod models;
pub mod pauli;
pub mod propagator;
pub mod sim;
pub mod synth;

pub use num_complex::Complex64 as C64;

pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use pauli::{PauliString, PauliSum, PauliTerm};
pub use sim::StateVector;

/// Dense complex matrix used by the verification oracles.
pub type Matrix = nalgebra::DMatrix<C64>;

/// Largest register the dense paths (matrices, `unitary_of`, `to_dense`) accept.
pub const DENSE_QUBIT_LIMIT: usize = 12;

pub(crate) fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > DENSE_QUBIT_LIMIT {
        return Err(Error::Guard {
            what: "qubit count for dense evaluation",
            value: n_qubits,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(())
}
