mod common;

use common::*;
use lcu_core::circuit::{Circuit, Gate};
use lcu_core::pauli::PauliSum;
use lcu_core::sim::{run, StateVector};
use lcu_core::synth::*;
use lcu_core::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn demultiplex_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let v0 = random_unitary2(&mut rng);
        let v1 = random_unitary2(&mut rng);
        let step = demultiplex_pair(&v0, &v1).unwrap();
        worst = worst.max(step.residual(&v0, &v1));
    }
    assert!(worst < 1e-9, "worst residual {worst}");
}

#[test]
fn multiplexed_u2_matches_block_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..=4 {
        for _ in 0..4 {
            let targets: Vec<_> = (0..1 << k).map(|_| random_unitary2(&mut rng)).collect();
            let spec = MultiplexorSpec::new(targets.clone()).unwrap();
            let c = synth_multiplexed_u2(&spec).unwrap();
            let err = max_diff(&c.unitary_of().unwrap(), &block_diag(&targets));
            assert!(err < 1e-9, "k={k} err={err}");
            let bound = (1usize << k) - 1 + (1usize << (k + 1)) - 2;
            assert!(c.two_qubit_count() <= bound, "k={k}");
        }
    }
}

#[test]
fn multiplexed_rotation_matches_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..=4 {
        for axis in [Axis::Ry, Axis::Rz] {
            let angles: Vec<f64> = (0..1 << k).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let c = synth_multiplexed_rotation(axis, &angles).unwrap();
            let blocks: Vec<_> = angles
                .iter()
                .map(|&a| match axis {
                    Axis::Ry => lcu_core::circuit::ry(a),
                    Axis::Rz => lcu_core::circuit::rz(a),
                })
                .collect();
            assert!(max_diff(&c.unitary_of().unwrap(), &block_diag(&blocks)) < 1e-12);
            let want_cx = if k == 0 { 0 } else { 1 << k };
            assert_eq!(c.two_qubit_count(), want_cx);
            assert_eq!(c.len() - c.two_qubit_count(), 1 << k);
        }
    }
}

#[test]
fn select_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let terms = rng.gen_range(1..=12);
        let y = random_sum(&mut rng, n, terms);
        let k = ancilla_count(y.len());
        let c = synth_select(&y, k).unwrap();
        let err = max_diff(&c.unitary_of().unwrap(), &select_matrix(&y, k));
        assert!(err < 1e-9, "n={n} L={} err={err}", y.len());
        let bound = multiplexor_cost(k as u32, n as u32).max(0) as usize;
        assert!(c.two_qubit_count() <= bound, "cx {} > {bound}", c.two_qubit_count());
    }
}

#[test]
fn select_with_one_system_qubit() {
    let y = PauliSum::from_letters(1, [(c(0.3, 0.0), "I"), (c(0.7, 0.0), "Z")]).unwrap();
    let circ = synth_select(&y, 1).unwrap();
    assert!(circ.two_qubit_count() <= 3);
    assert!(max_diff(&circ.unitary_of().unwrap(), &select_matrix(&y, 1)) < 1e-10);
}

#[test]
fn prepare_random_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for l in [1usize, 2, 3, 5, 8, 13, 16] {
        let w: Vec<f64> = (0..l).map(|_| rng.gen_range(0.0..2.0)).collect();
        let circ = synth_prepare(&w).unwrap();
        let k = circ.n_qubits;
        let out = run(&circ, &StateVector::zero(k)).unwrap();
        let total: f64 = w.iter().sum();
        for (i, a) in out.amplitudes().iter().enumerate() {
            let want = w.get(i).map_or(0.0, |x| (x / total).sqrt());
            assert!((a - c(want, 0.0)).norm() < 1e-10);
        }
        if k >= 1 {
            assert!(circ.two_qubit_count() <= (1 << k) - 2);
        }
    }
}

#[test]
fn state_prep_random_complex_and_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for n in 1..=5 {
        for real in [true, false] {
            let amps: Vec<_> = (0..1 << n)
                .map(|_| {
                    let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
                    c(rng.gen_range(-1.0..1.0), im)
                })
                .collect();
            let psi = StateVector::from_amplitudes(amps).unwrap().normalized().unwrap();
            let circ = synth_state_prep(&psi).unwrap();
            let out = run(&circ, &StateVector::zero(n)).unwrap();
            assert!(out.max_abs_diff(&psi) < 1e-10, "n={n} real={real}");
        }
    }
}

#[test]
fn lcu_block_is_scaled_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let n = rng.gen_range(1..=3);
        let terms = rng.gen_range(1..=9);
        let y = random_sum(&mut rng, n, terms);
        let lcu = synth_lcu(&y).unwrap();
        let block = ancilla_zero_block(&lcu.circuit.unitary_of().unwrap(), n);
        let want = sum_matrix(&y) / c(y.l1_norm(), 0.0);
        assert!(max_diff(&block, &want) < 1e-9);
    }
}

#[test]
fn lcu_identity_block() {
    let lcu = synth_lcu(&PauliSum::identity(2)).unwrap();
    assert_eq!(lcu.n_ancilla, 0);
    assert!(max_diff(&lcu.circuit.unitary_of().unwrap(), &Matrix::identity(4, 4)) < 1e-12);
}

#[test]
fn trotter_gadget_xx() {
    let g = 0.37;
    let tau = 0.6;
    let h = PauliSum::from_letters(2, [(c(g, 0.0), "XX")]).unwrap();
    let circ = synth_trotter_step(&h, tau).unwrap();
    let want = expm_taylor(&sum_matrix(&h), tau);
    assert!(max_diff(&circ.unitary_of().unwrap(), &want) < 1e-12);
    assert_eq!(circ.count("h"), 4);
    assert_eq!(circ.two_qubit_count(), 2);
}

#[test]
fn trotter_gadget_mixed_letters() {
    let h = PauliSum::from_letters(3, [(c(0.4, 0.0), "YZX"), (c(-0.2, 0.0), "III"), (c(0.1, 0.0), "IYI")]).unwrap();
    let circ = synth_trotter_step(&h, 0.3).unwrap();
    let mut want = Matrix::identity(8, 8);
    for (s, coeff) in h.iter() {
        let one = PauliSum::from_letters(3, [(*coeff, s.letters(3).as_str())]).unwrap();
        want = expm_taylor(&sum_matrix(&one), 0.3) * want;
    }
    assert!(max_diff(&circ.unitary_of().unwrap(), &want) < 1e-12);
}

#[test]
fn synthesis_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let y = random_sum(&mut rng, 3, 7);
    let a = synth_lcu(&y).unwrap().circuit.to_qasm().unwrap();
    let b = synth_lcu(&y).unwrap().circuit.to_qasm().unwrap();
    assert_eq!(a, b);
}

#[test]
fn circuit_concatenation_composes_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut a = Circuit::new(3);
    let mut b = Circuit::new(3);
    for circ in [&mut a, &mut b] {
        for _ in 0..10 {
            let q = rng.gen_range(0..3);
            circ.push(Gate::U2 { qubit: q, matrix: random_unitary2(&mut rng) });
            circ.push(Gate::Cx { control: q, target: (q + 1) % 3 });
        }
    }
    let mut ab = a.clone();
    ab.append(&b);
    let want = b.unitary_of().unwrap() * a.unitary_of().unwrap();
    assert!(max_diff(&ab.unitary_of().unwrap(), &want) < 1e-12);
}
