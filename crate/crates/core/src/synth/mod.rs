//! Lowering of operator-level oracles to CX + single-qubit gates.

pub mod cost;
pub mod demux;
pub mod multiplexor;
pub mod oracles;
pub mod trotter;

pub use cost::{crossover_n, crossover_table, multiplexor_cost, unary_iteration_cost, CrossoverRow};
pub use demux::{demultiplex_pair, DemuxStep};
pub use multiplexor::{synth_diagonal, synth_multiplexed_rotation, synth_multiplexed_u2, Axis, MultiplexorSpec};
pub use oracles::{
    ancilla_count, synth_lcu, synth_oaa, synth_prepare, synth_select, synth_state_prep, LcuCircuit,
};
pub use trotter::{synth_trotter, synth_trotter_step};
