//! Collapsed truncated-Taylor propagator and the Υ∥ / Υ⊥ split.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{i_pow, index_mask, PauliString, PauliSum, COLLECT_TOL};
use crate::sim::{apply_pauli_sum, StateVector};
use crate::C64;

/// Orders above this add nothing in double precision.
pub const MAX_ORDER: u32 = 20;

/// `|<ψ0|P|ψ0>|` at or below this is treated as zero.
pub const PARALLEL_TOL: f64 = 1e-12;

/// Merged groups whose coefficient falls below this are dropped.
pub const MERGE_DROP_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorConfig {
    #[serde(rename = "K")]
    pub k: u32,
    pub tau: f64,
    pub m: usize,
    pub eps_term: f64,
}

impl TaylorConfig {
    /// Splits `t` into `m = ceil(t / tau_max)` equal segments.
    pub fn for_time(t: f64, tau_max: f64, k: u32, eps_term: f64) -> Result<Self> {
        if !(t > 0.0 && tau_max > 0.0) {
            return Err(Error::InvalidSpec("t and tau_max must be positive".into()));
        }
        let m = ((t / tau_max) - 1e-9).ceil().max(1.0) as usize;
        let cfg = TaylorConfig {
            k,
            tau: t / m as f64,
            m,
            eps_term,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn time(&self) -> f64 {
        self.tau * self.m as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.k > MAX_ORDER {
            return Err(Error::Guard {
                what: "Taylor order",
                value: self.k as usize,
                limit: MAX_ORDER as usize,
            });
        }
        if self.m < 1 || !self.tau.is_finite() || self.eps_term.is_nan() || self.eps_term < 0.0 {
            return Err(Error::InvalidSpec(format!("invalid Taylor config {self:?}")));
        }
        Ok(())
    }
}

/// Largest Pauli sum the expansion may build.
pub const MAX_PROPAGATOR_TERMS: usize = 2_000_000;

/// Intermediate powers of a single segment drop terms below `eps_term` times this.
pub const SEGMENT_FLOOR_RATIO: f64 = 1e-3;

fn segment(h: &PauliSum, tau: f64, k: u32, floor: f64) -> Result<PauliSum> {
    let mut sum = PauliSum::identity(h.n_qubits());
    let mut term = PauliSum::identity(h.n_qubits());
    for order in 1..=k {
        term = term
            .sum_multiply(h)?
            .scaled(C64::new(0.0, -tau / order as f64))
            .truncate(floor);
        if term.len() > MAX_PROPAGATOR_TERMS {
            return Err(Error::Guard {
                what: "propagator term count",
                value: term.len(),
                limit: MAX_PROPAGATOR_TERMS,
            });
        }
        sum.add(&term)?;
    }
    Ok(sum)
}

/// `Σ_{k≤K} (−iHτ)^k / k!`, truncated at `eps_term`.
pub fn taylor_segment(h: &PauliSum, cfg: &TaylorConfig) -> Result<PauliSum> {
    cfg.validate()?;
    let floor = (cfg.eps_term * SEGMENT_FLOOR_RATIO).max(COLLECT_TOL);
    Ok(segment(h, cfg.tau, cfg.k, floor)?.truncate(cfg.eps_term))
}

/// `(U_{τ,K})^m`, truncated at `eps_term`. Intermediate products keep every
/// term above the collection floor so only the final truncation loses weight.
pub fn collapse_propagator(h: &PauliSum, cfg: &TaylorConfig) -> Result<PauliSum> {
    cfg.validate()?;
    if cfg.m == 1 {
        return taylor_segment(h, cfg);
    }
    let seg = segment(h, cfg.tau, cfg.k, COLLECT_TOL)?;
    Ok(seg.power(cfg.m as u32)?.truncate(cfg.eps_term))
}

/// `<ψ0|Υ†Υ|ψ0> = ‖Υψ0‖²`.
pub fn norm_expectation(y: &PauliSum, psi0: &StateVector) -> Result<f64> {
    Ok(apply_pauli_sum(y, psi0)?.norm_sqr())
}

/// `|1 − sqrt(<ψ0|Υ†Υ|ψ0>)|`.
pub fn precision(y: &PauliSum, psi0: &StateVector) -> Result<f64> {
    Ok((1.0 - norm_expectation(y, psi0)?.sqrt()).abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitOperator {
    pub parallel: PauliSum,
    pub perpendicular: PauliSum,
    pub l1_parallel: f64,
    pub l1_full: f64,
}

/// `<ψ0|P|ψ0>` summed over the support of `ψ0` only.
pub fn term_expectation(p: &PauliString, psi0: &StateVector, support: &[usize]) -> C64 {
    let n = psi0.n_qubits();
    support
        .iter()
        .map(|&b| {
            let (b2, phase) = p.apply_to_index(b, n);
            psi0.amplitude(b2).conj() * phase * psi0.amplitude(b)
        })
        .sum()
}

/// Sorts each term of `Υ` by whether `<ψ0|P|ψ0>` vanishes.
pub fn preselect(y: &PauliSum, psi0: &StateVector) -> Result<SplitOperator> {
    psi0.check_dim(y.n_qubits())?;
    let support = psi0.support();
    let mut parallel = PauliSum::new(y.n_qubits());
    let mut perpendicular = PauliSum::new(y.n_qubits());
    for (s, c) in y.iter() {
        if term_expectation(s, psi0, &support).norm() > PARALLEL_TOL {
            parallel.add_term(*s, *c);
        } else {
            perpendicular.add_term(*s, *c);
        }
    }
    Ok(SplitOperator {
        l1_parallel: parallel.l1_norm(),
        l1_full: y.l1_norm(),
        parallel,
        perpendicular,
    })
}

/// Terms keyed by `x` mask and sign pattern over the support.
type Groups = BTreeMap<(u64, Vec<bool>), Vec<(PauliString, C64)>>;

/// Merges Υ∥ terms that act identically on the support of `ψ0`.
///
/// On a support state `|b>`, `P|b> = i^{|x∧z|} (−1)^{z·b} |b⊕x>`. Terms with
/// the same `x` and the same sign pattern `z·(b⊕b0)` over the support differ
/// there by the constant `i^{|x∧z|−|x∧z'|} (−1)^{(z⊕z')·b0}`, so each group
/// collapses onto its lexicographically smallest member.
pub fn merge_parallel_terms(split: &SplitOperator, psi0: &StateVector) -> Result<PauliSum> {
    let y = &split.parallel;
    psi0.check_dim(y.n_qubits())?;
    let n = y.n_qubits();
    let support = psi0.support();
    let b0 = support.first().copied().unwrap_or(0);
    let mut groups: Groups = BTreeMap::new();
    for (s, c) in y.iter() {
        let zi = index_mask(s.z, n);
        let signature = support
            .iter()
            .map(|&b| (zi & (b ^ b0)).count_ones() & 1 == 1)
            .collect();
        groups.entry((s.x, signature)).or_default().push((*s, *c));
    }
    let mut out = PauliSum::new(n);
    for members in groups.values() {
        let rep = members.iter().map(|(s, _)| *s).min().expect("nonempty group");
        let rep_y = rep.y_count();
        let rep_z = index_mask(rep.z, n);
        let mut total = C64::new(0.0, 0.0);
        for (s, c) in members {
            let e = 256 + s.y_count() - rep_y;
            let sign = (((index_mask(s.z, n) ^ rep_z) & b0).count_ones() & 1) * 2;
            total += c * i_pow(e + sign);
        }
        if total.norm() > MERGE_DROP_TOL {
            out.add_term(rep, total);
        }
    }
    Ok(out)
}

/// `(p∥ |α∥|₁² / denom) · sq_overlap_par`.
pub fn reduced_overlap_reconstruct(
    sq_overlap_par: f64,
    p_par: f64,
    l1_par: f64,
    denom: f64,
) -> Result<f64> {
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::Domain(format!("denominator must be positive, got {denom}")));
    }
    if sq_overlap_par < 0.0 || p_par < 0.0 || l1_par < 0.0 {
        return Err(Error::Domain("inputs must be nonnegative".into()));
    }
    Ok(p_par * l1_par * l1_par / denom * sq_overlap_par)
}

/// One JSON-lines record per time point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorRecord {
    pub t: f64,
    pub n_terms_full: usize,
    pub n_terms_parallel: usize,
    pub l1_full: f64,
    pub l1_parallel: f64,
    pub precision: f64,
}
