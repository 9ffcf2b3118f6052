//! Dense statevector execution, post-selection, and seeded sampling.
//!
//! Basis index convention: qubit 0 is the most significant bit.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::synth::{synth_lcu, synth_state_prep};
use crate::{check_dense, Matrix, C64};

/// Statevectors above this width are refused.
pub const SIM_QUBIT_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// `|0…0>`.
    pub fn zero(n_qubits: usize) -> Self {
        StateVector::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits <= SIM_QUBIT_LIMIT, "at most {SIM_QUBIT_LIMIT} qubits");
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps raw amplitudes (not renormalized); the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidSpec(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > SIM_QUBIT_LIMIT {
            return Err(Error::Guard {
                what: "statevector qubits",
                value: n_qubits,
                limit: SIM_QUBIT_LIMIT,
            });
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        StateVector::from_amplitudes(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_dim(other.n_qubits)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self> ⊗ |other>` with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.amplitudes[i] != C64::new(0.0, 0.0))
            .collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, n_qubits: usize) -> Result<()> {
        if self.n_qubits != n_qubits {
            return Err(Error::Dimension {
                expected: n_qubits,
                got: self.n_qubits,
            });
        }
        Ok(())
    }

    fn apply_single(&mut self, q: usize, m: &[[C64; 2]; 2]) {
        let bit = 1usize << (self.n_qubits - 1 - q);
        for i0 in 0..self.dim() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let a = self.amplitudes[i0];
            let b = self.amplitudes[i1];
            self.amplitudes[i0] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[i1] = m[1][0] * a + m[1][1] * b;
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cbit = 1usize << (self.n_qubits - 1 - control);
        let tbit = 1usize << (self.n_qubits - 1 - target);
        for i in 0..self.dim() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amplitudes.swap(i, i | tbit);
            }
        }
    }
}

/// Applies the unitary gates of `c` to `psi`; `measure` gates are refused.
pub fn run(c: &Circuit, psi: &StateVector) -> Result<StateVector> {
    psi.check_dim(c.n_qubits)?;
    let mut out = psi.clone();
    for g in &c.gates {
        match *g {
            Gate::Cx { control, target } => out.apply_cx(control, target),
            Gate::Measure { .. } => {
                return Err(Error::InvalidSpec(
                    "run executes unitary segments only; use sample for measurements".into(),
                ))
            }
            _ => {
                let (q, _) = g.qubits();
                out.apply_single(q, &g.matrix().expect("single-qubit gate"));
            }
        }
    }
    if c.global_phase != 0.0 {
        let ph = C64::from_polar(1.0, c.global_phase);
        out.amplitudes.iter_mut().for_each(|a| *a *= ph);
    }
    Ok(out)
}

/// `Y|psi>` without normalization.
pub fn apply_pauli_sum(y: &PauliSum, psi: &StateVector) -> Result<StateVector> {
    psi.check_dim(y.n_qubits())?;
    let n = y.n_qubits();
    let mut out = vec![C64::new(0.0, 0.0); psi.dim()];
    let support = psi.support();
    for (s, c) in y.iter() {
        for &b in &support {
            let (b2, phase) = s.apply_to_index(b, n);
            out[b2] += c * phase * psi.amplitudes[b];
        }
    }
    StateVector::from_amplitudes(out)
}

/// `<psi|Y|psi>`.
pub fn expectation(y: &PauliSum, psi: &StateVector) -> Result<C64> {
    psi.inner(&apply_pauli_sum(y, psi)?)
}

/// Projects `register` onto all-zero. Returns the probability and, when it
/// is nonzero, the renormalized full-register state.
pub fn postselect_zero(psi: &StateVector, register: &[usize]) -> (f64, Option<StateVector>) {
    let n = psi.n_qubits;
    let mask = register
        .iter()
        .fold(0usize, |m, &q| m | (1usize << (n - 1 - q)));
    let mut amps = psi.amplitudes.clone();
    let mut p = 0.0;
    for (i, a) in amps.iter_mut().enumerate() {
        if i & mask == 0 {
            p += a.norm_sqr();
        } else {
            *a = C64::new(0.0, 0.0);
        }
    }
    if p <= 0.0 {
        return (0.0, None);
    }
    let s = p.sqrt();
    amps.iter_mut().for_each(|a| *a /= s);
    (p, Some(StateVector { n_qubits: n, amplitudes: amps }))
}

/// Restricts a state whose `n_lead` leading qubits are `|0…0>` to the
/// remaining qubits.
pub fn trailing_register(psi: &StateVector, n_lead: usize) -> StateVector {
    let n = psi.n_qubits - n_lead;
    StateVector {
        n_qubits: n,
        amplitudes: psi.amplitudes[..1usize << n].to_vec(),
    }
}

/// `p = <psi|Y†Y|psi> / |α|₁²`.
pub fn lcu_success_probability(y: &PauliSum, psi: &StateVector) -> Result<f64> {
    let l1 = y.l1_norm();
    if l1 == 0.0 {
        return Err(Error::Domain("operator has no terms".into()));
    }
    Ok(apply_pauli_sum(y, psi)?.norm_sqr() / (l1 * l1))
}

/// Vacuum-test outcome for `U_ψ† · LCU(Υ∥) · U_ψ` applied to `|0>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VacuumTest {
    /// All-zero probability on the ancilla register.
    pub p_parallel: f64,
    /// All-zero probability on every qubit.
    pub joint_zero: f64,
    /// `joint_zero / p_parallel`, the squared overlap of the postselected state.
    pub sq_overlap: f64,
    pub n_ancilla: usize,
    pub two_qubit_count: usize,
    pub depth: usize,
}

/// `U_ψ† · LCU(Υ) · U_ψ` on `k` ancillas followed by the system register.
pub fn vacuum_circuit(y: &PauliSum, psi0: &StateVector) -> Result<(Circuit, usize)> {
    psi0.check_dim(y.n_qubits())?;
    let lcu = synth_lcu(y)?;
    let k = lcu.n_ancilla;
    let prep = synth_state_prep(psi0)?;
    let total = lcu.circuit.n_qubits;
    let sys_map: Vec<usize> = (k..total).collect();
    let mut c = Circuit::new(total);
    c.append_mapped(&prep, &sys_map);
    c.append(&lcu.circuit);
    c.append_mapped(&prep.inverse(), &sys_map);
    Ok((c.compacted(), k))
}

pub fn vacuum_test(y_par: &PauliSum, psi0: &StateVector) -> Result<VacuumTest> {
    let (c, k) = vacuum_circuit(y_par, psi0)?;
    let total = c.n_qubits;
    let out = run(&c, &StateVector::zero(total))?;
    let ancillas: Vec<usize> = (0..k).collect();
    let (p_parallel, _) = postselect_zero(&out, &ancillas);
    let joint_zero = out.amplitudes[0].norm_sqr();
    let sq_overlap = if p_parallel > 0.0 { joint_zero / p_parallel } else { 0.0 };
    Ok(VacuumTest {
        p_parallel,
        joint_zero,
        sq_overlap,
        n_ancilla: k,
        two_qubit_count: c.two_qubit_count(),
        depth: c.depth(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotResult {
    pub seed: u64,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl ShotResult {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    /// Fraction of shots whose bits at `positions` are all `'0'`.
    pub fn zero_fraction(&self, positions: &[usize]) -> f64 {
        let hits: u64 = self
            .counts
            .iter()
            .filter(|(k, _)| positions.iter().all(|&p| k.as_bytes()[p] == b'0'))
            .map(|(_, v)| *v)
            .sum();
        hits as f64 / self.shots as f64
    }
}

/// Samples `shots` outcomes of `c` run on `|0…0>`.
///
/// Measurement gates mark which qubits are read out (in order of first
/// appearance); without any, every qubit is read. Bitstrings list qubit 0 first.
pub fn sample(c: &Circuit, shots: u64, seed: u64) -> Result<ShotResult> {
    let mut measured: Vec<usize> = Vec::new();
    let mut unitary = Circuit::new(c.n_qubits);
    unitary.global_phase = c.global_phase;
    for g in &c.gates {
        if let Gate::Measure { qubit } = *g {
            if !measured.contains(&qubit) {
                measured.push(qubit);
            }
        } else if measured.iter().any(|&q| g.touches(q)) {
            return Err(Error::InvalidSpec(
                "gates after a measurement on the same qubit are not supported".into(),
            ));
        } else {
            unitary.gates.push(g.clone());
        }
    }
    if measured.is_empty() {
        measured = (0..c.n_qubits).collect();
    }
    let psi = run(&unitary, &StateVector::zero(c.n_qubits))?;
    sample_state(&psi, &measured, shots, seed)
}

/// Multinomial draw over the outcomes of `qubits` in state `psi`.
pub fn sample_state(psi: &StateVector, qubits: &[usize], shots: u64, seed: u64) -> Result<ShotResult> {
    if shots == 0 {
        return Err(Error::InvalidSpec("shots must be at least 1".into()));
    }
    let n = psi.n_qubits;
    let mut marginal: BTreeMap<usize, f64> = BTreeMap::new();
    for (i, a) in psi.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let key = qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((i >> (n - 1 - q)) & 1));
        *marginal.entry(key).or_default() += p;
    }
    let outcomes: Vec<usize> = marginal.keys().copied().collect();
    let dist = WeightedIndex::new(marginal.values().copied())
        .map_err(|e| Error::Domain(format!("cannot sample: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = vec![0u64; outcomes.len()];
    for _ in 0..shots {
        tallies[dist.sample(&mut rng)] += 1;
    }
    let width = qubits.len();
    let counts = outcomes
        .iter()
        .zip(tallies)
        .filter(|(_, t)| *t > 0)
        .map(|(o, t)| (format!("{o:0width$b}"), t))
        .collect();
    Ok(ShotResult { seed, shots, counts })
}

/// `exp(-iHt)|psi0>` by Hermitian eigendecomposition of the dense `H`.
pub fn dense_expm_reference(h: &PauliSum, t: f64, psi0: &StateVector) -> Result<StateVector> {
    check_dense(h.n_qubits())?;
    psi0.check_dim(h.n_qubits())?;
    if !h.is_hermitian(1e-12) {
        return Err(Error::NonHermitian("dense_expm_reference needs a Hermitian H".into()));
    }
    let eig = h.to_dense()?.symmetric_eigen();
    let v = &eig.eigenvectors;
    let psi = nalgebra::DVector::from_column_slice(psi0.amplitudes());
    let mut coeffs = v.adjoint() * psi;
    for (c, lambda) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= C64::from_polar(1.0, -lambda * t);
    }
    let out = v * coeffs;
    StateVector::from_amplitudes(out.iter().copied().collect())
}

/// Dense `exp(-iHt)` by eigendecomposition.
pub fn dense_expm(h: &PauliSum, t: f64) -> Result<Matrix> {
    check_dense(h.n_qubits())?;
    let eig = h.to_dense()?.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = Matrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * t)));
    Ok(v * phases * v.adjoint())
}
