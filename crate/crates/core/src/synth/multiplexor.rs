//! Multiplexed rotations, diagonal gates and multiplexed single-qubit unitaries.
//!
//! A multiplexor with controls `c0 … c(k−1)` and target `t` applies `V_i`
//! when the controls read `i`, with `c0` the most significant bit of `i`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::circuit::{
    hadamard, matmul2, rz, unitarity_residual, Circuit, Gate, Mat2, ANGLE_TOL, UNITARY_TOL,
};
use crate::error::{Error, Result};
use crate::C64;

use super::demux::demultiplex_pair;

/// Angle lists differing by less than this are treated as equal when pruning.
const PRUNE_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Ry,
    Rz,
}

impl Axis {
    fn gate(self, qubit: usize, angle: f64) -> Gate {
        match self {
            Axis::Ry => Gate::Ry { qubit, angle },
            Axis::Rz => Gate::Rz { qubit, angle },
        }
    }
}

pub(crate) fn log2_exact(len: usize, what: &str) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidSpec(format!(
            "{what} needs a power-of-two length, got {len}"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Item {
    Rot(f64),
    /// CX from the control at this position.
    Cx(usize),
}

fn rotation_items(angles: &[f64], level: usize, leading: bool, out: &mut Vec<Item>) {
    if angles.len() == 1 {
        out.push(Item::Rot(angles[0]));
        return;
    }
    let half = angles.len() / 2;
    let gamma: Vec<f64> = (0..half).map(|i| (angles[i] + angles[half + i]) / 2.0).collect();
    let beta: Vec<f64> = (0..half).map(|i| (angles[i] - angles[half + i]) / 2.0).collect();
    if leading {
        rotation_items(&gamma, level + 1, true, out);
        push_cx(out, level);
        rotation_items(&beta, level + 1, false, out);
        push_cx(out, level);
    } else {
        push_cx(out, level);
        rotation_items(&beta, level + 1, true, out);
        push_cx(out, level);
        rotation_items(&gamma, level + 1, false, out);
    }
}

/// CXs sharing a target commute, so a new CX cancels an equal one anywhere in
/// the trailing run of CXs.
fn push_cx(out: &mut Vec<Item>, level: usize) {
    for idx in (0..out.len()).rev() {
        match out[idx] {
            Item::Rot(_) => break,
            Item::Cx(l) if l == level => {
                out.remove(idx);
                return;
            }
            Item::Cx(_) => {}
        }
    }
    out.push(Item::Cx(level));
}

fn items_to_gates(axis: Axis, items: &[Item], controls: &[usize], target: usize, keep_zero: bool) -> Vec<Gate> {
    items
        .iter()
        .filter_map(|it| match *it {
            Item::Rot(a) if keep_zero || a.abs() >= ANGLE_TOL => Some(axis.gate(target, a)),
            Item::Rot(_) => None,
            Item::Cx(l) => Some(Gate::Cx {
                control: controls[l],
                target,
            }),
        })
        .collect()
}

/// Multiplexed `ry`/`rz` on `k+1` qubits (controls `0..k`, target `k`) with
/// exactly `2^k` CX and `2^k` rotations for `k ≥ 1`.
pub fn synth_multiplexed_rotation(axis: Axis, angles: &[f64]) -> Result<Circuit> {
    let k = log2_exact(angles.len(), "multiplexed rotation")?;
    let mut items = Vec::with_capacity(2 * angles.len());
    rotation_items(angles, 0, true, &mut items);
    let controls: Vec<usize> = (0..k).collect();
    Circuit::from_gates(k + 1, items_to_gates(axis, &items, &controls, k, true), 0.0)
}

/// Multiplexed rotation with controls the angles do not depend on removed,
/// constant angle lists collapsed and zero rotations dropped.
pub(crate) fn mux_rotation_gates(axis: Axis, angles: &[f64], controls: &[usize], target: usize) -> Vec<Gate> {
    debug_assert_eq!(angles.len(), 1 << controls.len());
    let mut angles = angles.to_vec();
    let mut kept: Vec<usize> = controls.to_vec();
    let mut pos = 0;
    while pos < kept.len() {
        let bit = 1usize << (kept.len() - 1 - pos);
        let independent = (0..angles.len())
            .filter(|i| i & bit == 0)
            .all(|i| (angles[i] - angles[i | bit]).abs() <= PRUNE_TOL);
        if independent {
            angles = (0..angles.len())
                .filter(|i| i & bit == 0)
                .map(|i| angles[i])
                .collect();
            kept.remove(pos);
        } else {
            pos += 1;
        }
    }
    if angles.iter().all(|a| a.abs() < ANGLE_TOL) {
        return Vec::new();
    }
    let mut items = Vec::with_capacity(2 * angles.len());
    rotation_items(&angles, 0, true, &mut items);
    items_to_gates(axis, &items, &kept, target, false)
}

/// Gates for `diag(e^{iφ_b})` over `qubits` (first qubit most significant),
/// plus the global phase left over.
pub(crate) fn diagonal_gates(phases: &[f64], qubits: &[usize]) -> (Vec<Gate>, f64) {
    debug_assert_eq!(phases.len(), 1 << qubits.len());
    let mut cur = phases.to_vec();
    let mut gates = Vec::new();
    for level in (1..=qubits.len()).rev() {
        let half = cur.len() / 2;
        let theta: Vec<f64> = (0..half).map(|a| cur[2 * a + 1] - cur[2 * a]).collect();
        gates.extend(mux_rotation_gates(
            Axis::Rz,
            &theta,
            &qubits[..level - 1],
            qubits[level - 1],
        ));
        cur = (0..half).map(|a| (cur[2 * a] + cur[2 * a + 1]) / 2.0).collect();
    }
    (gates, cur[0])
}

/// Diagonal unitary `diag(e^{iφ_b})` on `log2(len)` qubits with at most `2^k − 2` CX.
pub fn synth_diagonal(phases: &[f64]) -> Result<Circuit> {
    let k = log2_exact(phases.len(), "diagonal")?;
    let qubits: Vec<usize> = (0..k).collect();
    let (gates, phase) = diagonal_gates(phases, &qubits);
    Circuit::from_gates(k, gates, phase)
}

/// Splits `diag` over `[controls…, t]` (target least significant) into the
/// multiplexed-`rz` angles on `t` and the remaining control-register phases.
pub(crate) fn split_target_diagonal(diag: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let half = diag.len() / 2;
    let theta = (0..half).map(|a| diag[2 * a + 1] - diag[2 * a]).collect();
    let mean = (0..half).map(|a| (diag[2 * a] + diag[2 * a + 1]) / 2.0).collect();
    (theta, mean)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplexorSpec {
    pub targets: Vec<Mat2>,
    pub controls: Vec<usize>,
    pub target: usize,
    pub n_qubits: usize,
}

impl MultiplexorSpec {
    /// Local layout: controls `0..k`, target `k`.
    pub fn new(targets: Vec<Mat2>) -> Result<Self> {
        let k = log2_exact(targets.len(), "multiplexor")?;
        let spec = MultiplexorSpec {
            targets,
            controls: (0..k).collect(),
            target: k,
            n_qubits: k + 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn k(&self) -> usize {
        self.controls.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.len() != 1 << self.controls.len() {
            return Err(Error::InvalidSpec(format!(
                "{} controls need {} targets, got {}",
                self.controls.len(),
                1usize << self.controls.len(),
                self.targets.len()
            )));
        }
        let mut seen = vec![false; self.n_qubits];
        for &q in self.controls.iter().chain(std::iter::once(&self.target)) {
            if q >= self.n_qubits || std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidSpec(format!("bad or repeated qubit {q}")));
            }
        }
        for v in &self.targets {
            let res = unitarity_residual(v);
            if res > UNITARY_TOL {
                return Err(Error::NonUnitary(res));
            }
        }
        Ok(())
    }
}

/// `⊕_i V_i = e^{i phase} · diag · (gates)`, with `diag` over
/// `[controls…, target]` applied after the gates.
pub(crate) struct MuxParts {
    pub gates: Vec<Gate>,
    pub diag: Vec<f64>,
    pub phase: f64,
}

fn phase_diag(p0: f64, p1: f64) -> Mat2 {
    let o = C64::new(0.0, 0.0);
    [[C64::from_polar(1.0, p0), o], [o, C64::from_polar(1.0, p1)]]
}

/// Recursive demultiplexing: `2^k − 1` CX and `2^k` single-qubit unitaries.
pub(crate) fn mux_u2_parts(targets: &[Mat2], controls: &[usize], target: usize) -> Result<MuxParts> {
    if controls.is_empty() {
        return Ok(MuxParts {
            gates: vec![Gate::U2 {
                qubit: target,
                matrix: targets[0],
            }],
            diag: vec![0.0, 0.0],
            phase: 0.0,
        });
    }
    let half = targets.len() / 2;
    let steps = (0..half)
        .map(|i| demultiplex_pair(&targets[i], &targets[half + i]))
        .collect::<Result<Vec<_>>>()?;
    let rest = &controls[1..];

    let ls: Vec<Mat2> = steps.iter().map(|s| s.l).collect();
    let left = mux_u2_parts(&ls, rest, target)?;

    let mut gates = left.gates;
    gates.push(Gate::H { qubit: target });
    gates.push(Gate::Cx {
        control: controls[0],
        target,
    });

    // e^{iπ/4 Z Z} = e^{−iπ/4} rz_c(−π/2) rz_t(−π/2) H_t CX H_t; the inner
    // diagonal of the left half commutes with it and joins the right half.
    let post = matmul2(&rz(-FRAC_PI_2), &hadamard());
    let ws: Vec<Mat2> = steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let dl = phase_diag(left.diag[2 * i], left.diag[2 * i + 1]);
            matmul2(&s.w, &matmul2(&dl, &post))
        })
        .collect();
    let right = mux_u2_parts(&ws, rest, target)?;
    gates.extend(right.gates);

    let mut diag = vec![0.0; 2 * targets.len()];
    for c0 in 0..2 {
        let (sign, zz) = if c0 == 0 { (-1.0, FRAC_PI_4) } else { (1.0, -FRAC_PI_4) };
        for (i, s) in steps.iter().enumerate() {
            for tb in 0..2 {
                diag[((c0 * half + i) << 1) | tb] = sign * s.r_phases[tb] + zz + right.diag[2 * i + tb];
            }
        }
    }
    Ok(MuxParts {
        gates,
        diag,
        phase: left.phase + right.phase - FRAC_PI_4,
    })
}

/// `⊕_i V_i`, exact including global phase, lowered to CX and rotations.
pub fn synth_multiplexed_u2(spec: &MultiplexorSpec) -> Result<Circuit> {
    spec.validate()?;
    let parts = mux_u2_parts(&spec.targets, &spec.controls, spec.target)?;
    let mut qubits = spec.controls.clone();
    qubits.push(spec.target);
    let (diag_gates, diag_phase) = diagonal_gates(&parts.diag, &qubits);
    let mut gates = parts.gates;
    gates.extend(diag_gates);
    let c = Circuit::from_gates(spec.n_qubits, gates, parts.phase + diag_phase)?;
    Ok(c.compacted())
}
