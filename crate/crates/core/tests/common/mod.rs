//! Independent verification oracles built from Kronecker products of the
//! 2x2 Pauli matrices, with no use of the library's symplectic algebra.
#![allow(dead_code)]

use lcu_core::circuit::Mat2;
use lcu_core::pauli::PauliSum;
use lcu_core::{Matrix, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn letter_matrix(ch: char) -> Matrix {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let v = match ch {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        _ => panic!("bad letter {ch}"),
    };
    Matrix::from_row_slice(2, 2, &v)
}

/// Dense matrix of a letter string, qubit 0 leftmost in the Kronecker product.
pub fn string_matrix(letters: &str) -> Matrix {
    letters
        .chars()
        .fold(Matrix::identity(1, 1), |acc, ch| acc.kronecker(&letter_matrix(ch)))
}

pub fn sum_matrix(y: &PauliSum) -> Matrix {
    let n = y.n_qubits();
    let dim = 1 << n;
    let mut m = Matrix::zeros(dim, dim);
    for (s, coeff) in y.iter() {
        m += string_matrix(&s.letters(n)) * *coeff;
    }
    m
}

pub fn all_strings(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| "IXYZ".chars().map(move |ch| format!("{s}{ch}")))
            .collect();
    }
    out
}

/// Hilbert–Schmidt projection of a dense matrix onto the Pauli basis.
pub fn pauli_decompose(m: &Matrix, n: usize) -> Vec<(String, C64)> {
    let dim = (1usize << n) as f64;
    all_strings(n)
        .into_iter()
        .map(|s| {
            let p = string_matrix(&s);
            let coeff = (p.adjoint() * m).trace() / dim;
            (s, coeff)
        })
        .collect()
}

/// Compares a sum to a dense matrix via the Pauli decomposition.
pub fn sum_matches_dense(y: &PauliSum, m: &Matrix, tol: f64) -> bool {
    let n = y.n_qubits();
    pauli_decompose(m, n).into_iter().all(|(s, coeff)| {
        let (ps, _) = lcu_core::pauli::PauliString::parse(&s).unwrap();
        (y.coefficient(&ps) - coeff).norm() <= tol
    })
}

pub fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// exp(-iHt) by a scaled-and-squared Taylor series, independent of any eigensolver.
pub fn expm_taylor(h: &Matrix, t: f64) -> Matrix {
    let dim = h.nrows();
    let a = h * c(0.0, -t);
    let norm: f64 = a.iter().map(|v| v.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm.log2().ceil().max(0.0) as u32) + 4;
    let scaled = &a * c(1.0 / f64::powi(2.0, squarings as i32), 0.0);
    let mut sum = Matrix::identity(dim, dim);
    let mut term = Matrix::identity(dim, dim);
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn random_unitary2<R: Rng>(rng: &mut R) -> Mat2 {
    // Haar-ish via Euler angles and a global phase.
    let (a, b, g, phi): (f64, f64, f64, f64) = (
        rng.gen_range(-3.2..3.2),
        rng.gen_range(0.0..3.2),
        rng.gen_range(-3.2..3.2),
        rng.gen_range(-3.2..3.2),
    );
    let e = |x: f64| C64::from_polar(1.0, x);
    let (s, co) = (b / 2.0).sin_cos();
    [
        [e(phi - (a + g) / 2.0) * co, -e(phi - (a - g) / 2.0) * s],
        [e(phi + (a - g) / 2.0) * s, e(phi + (a + g) / 2.0) * co],
    ]
}

pub fn random_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    let mut y = PauliSum::new(n);
    let letters = ['I', 'X', 'Y', 'Z'];
    for _ in 0..terms {
        let s: String = (0..n).map(|_| letters[rng.gen_range(0..4)]).collect();
        let (ps, _) = lcu_core::pauli::PauliString::parse(&s).unwrap();
        y.add_term(ps, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    y
}

pub fn random_hermitian_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    let y = random_sum(rng, n, terms);
    let mut h = PauliSum::new(n);
    for (s, coeff) in y.iter() {
        h.add_term(*s, c(coeff.re, 0.0));
    }
    h
}

/// Block-diagonal matrix `⊕ V_i`.
pub fn block_diag(blocks: &[Mat2]) -> Matrix {
    let n = 2 * blocks.len();
    let mut m = Matrix::zeros(n, n);
    for (b, v) in blocks.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * b + i, 2 * b + j)] = v[i][j];
            }
        }
    }
    m
}

/// `Σ_ℓ |ℓ><ℓ| ⊗ (c_ℓ/|c_ℓ|) P_ℓ`, identity on unused patterns.
pub fn select_matrix(y: &PauliSum, k: usize) -> Matrix {
    let n = y.n_qubits();
    let sys = 1usize << n;
    let dim = (1usize << k) * sys;
    let mut m = Matrix::zeros(dim, dim);
    let terms: Vec<_> = y.iter().collect();
    for a in 0..1usize << k {
        let block = match terms.get(a) {
            Some((s, coeff)) => string_matrix(&s.letters(n)) * (**coeff / coeff.norm()),
            None => Matrix::identity(sys, sys),
        };
        m.view_mut((a * sys, a * sys), (sys, sys)).copy_from(&block);
    }
    m
}

/// Top-left `2^n x 2^n` block of a matrix with `k` leading ancillas.
pub fn ancilla_zero_block(u: &Matrix, n_system: usize) -> Matrix {
    let sys = 1usize << n_system;
    u.view((0, 0), (sys, sys)).into_owned()
}
