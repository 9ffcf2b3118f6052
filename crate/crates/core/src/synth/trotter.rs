//! First-order product formula built from Pauli-exponential gadgets.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliSum};

/// Imaginary parts above this make a coefficient non-Hermitian.
const HERMITIAN_TOL: f64 = 1e-12;

/// `Π_j exp(−i β_j P_j τ)` in lexicographic term order.
pub fn synth_trotter_step(h: &PauliSum, tau: f64) -> Result<Circuit> {
    let n = h.n_qubits();
    let mut c = Circuit::new(n);
    for (s, coeff) in h.iter() {
        if coeff.im.abs() > HERMITIAN_TOL {
            return Err(Error::NonHermitian(format!(
                "coefficient {coeff} on {}",
                s.letters(n)
            )));
        }
        let beta = coeff.re;
        if s.is_identity() {
            c.add_phase(-beta * tau);
            continue;
        }
        let support: Vec<usize> = (0..n).filter(|&q| s.letter(q) != Letter::I).collect();
        let basis: Vec<Gate> = support
            .iter()
            .filter_map(|&q| match s.letter(q) {
                Letter::X => Some(Gate::H { qubit: q }),
                Letter::Y => Some(Gate::Rx { qubit: q, angle: FRAC_PI_2 }),
                _ => None,
            })
            .collect();
        let ladder: Vec<Gate> = support
            .windows(2)
            .map(|w| Gate::Cx { control: w[0], target: w[1] })
            .collect();
        let last = *support.last().expect("non-identity string");
        c.gates.extend(basis.iter().cloned());
        c.gates.extend(ladder.iter().cloned());
        c.push(Gate::Rz { qubit: last, angle: 2.0 * beta * tau });
        c.gates.extend(ladder.iter().rev().cloned());
        c.gates.extend(basis.iter().map(Gate::inverse));
    }
    Ok(c)
}

/// `steps` repetitions of [`synth_trotter_step`].
pub fn synth_trotter(h: &PauliSum, tau: f64, steps: usize) -> Result<Circuit> {
    let step = synth_trotter_step(h, tau)?;
    let mut c = Circuit::new(h.n_qubits());
    for _ in 0..steps {
        c.append(&step);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn single_z_is_one_rz() {
        let h = PauliSum::from_letters(1, [(C64::new(0.7, 0.0), "Z")]).unwrap();
        let c = synth_trotter_step(&h, 0.2).unwrap();
        assert_eq!(c.gates.len(), 1);
        match c.gates[0] {
            Gate::Rz { angle, .. } => assert!((angle - 0.28).abs() < 1e-15),
            ref g => panic!("unexpected {g:?}"),
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let h = PauliSum::from_letters(1, [(C64::new(0.0, 1.0), "X")]).unwrap();
        assert!(matches!(synth_trotter_step(&h, 0.1), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn depth_grows_linearly() {
        let h = PauliSum::from_letters(2, [(C64::new(0.3, 0.0), "XX"), (C64::new(0.2, 0.0), "ZI")]).unwrap();
        let d1 = synth_trotter(&h, 0.1, 1).unwrap().depth();
        let d4 = synth_trotter(&h, 0.1, 4).unwrap().depth();
        assert!(d4 >= 3 * d1 && d4 <= 4 * d1);
    }
}
