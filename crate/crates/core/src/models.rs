//! Jaynes-Cummings and Rabi-Hubbard Hamiltonians under binary boson encoding.
//!
//! Atom convention: `|e> = |0>`, `|g> = |1>`, so `σ+ = |0><1|` and `σz = Z`.
//! Jaynes-Cummings layout: `[boson qubits…, atom]`. Rabi-Hubbard layout: per
//! cavity `[atom, boson qubits…]`, cavities concatenated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, PauliSum};
use crate::sim::StateVector;
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitOrder {
    /// First boson qubit carries the least significant Fock bit.
    LittleEndian,
    /// First boson qubit carries the most significant Fock bit.
    #[default]
    BigEndian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BosonEncoding {
    pub n_levels: usize,
    pub n_qubits: usize,
    pub bit_order: BitOrder,
}

impl BosonEncoding {
    pub fn new(n_levels: usize, bit_order: BitOrder) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::InvalidSpec("a boson mode needs at least 2 levels".into()));
        }
        let n_qubits = n_levels.next_power_of_two().trailing_zeros() as usize;
        Ok(BosonEncoding {
            n_levels,
            n_qubits,
            bit_order,
        })
    }

    /// Encoding for Fock states `0..=max_photons`.
    pub fn for_max_photons(max_photons: usize, bit_order: BitOrder) -> Result<Self> {
        BosonEncoding::new(max_photons + 1, bit_order)
    }

    /// Register index (qubit 0 most significant) of Fock state `f`.
    pub fn register_index(&self, f: usize) -> usize {
        match self.bit_order {
            BitOrder::BigEndian => f,
            BitOrder::LittleEndian => {
                let mut r = 0;
                for j in 0..self.n_qubits {
                    r = (r << 1) | ((f >> j) & 1);
                }
                r
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BosonOp {
    Annihilate,
    Create,
    Number,
}

/// `|a><b|` on an `n`-qubit register as a Pauli sum.
pub fn ketbra(n: usize, a: usize, b: usize) -> PauliSum {
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let mut acc = vec![(PauliString::IDENTITY, C64::new(1.0, 0.0))];
    for q in 0..n {
        let abit = (a >> (n - 1 - q)) & 1;
        let bbit = (b >> (n - 1 - q)) & 1;
        let factors: [(Letter, C64); 2] = match (abit, bbit) {
            (0, 0) => [(Letter::I, half), (Letter::Z, half)],
            (1, 1) => [(Letter::I, half), (Letter::Z, -half)],
            (0, 1) => [(Letter::X, half), (Letter::Y, ihalf)],
            _ => [(Letter::X, half), (Letter::Y, -ihalf)],
        };
        acc = acc
            .into_iter()
            .flat_map(|(s, c)| {
                factors
                    .iter()
                    .map(move |&(l, f)| (s.with_letter(q, l), c * f))
            })
            .collect();
    }
    let mut out = PauliSum::new(n);
    for (s, c) in acc {
        out.add_term(s, c);
    }
    out
}

/// Truncated ladder or number operator on the encoding's own register.
pub fn encode_boson_op(kind: BosonOp, enc: &BosonEncoding) -> PauliSum {
    let mut out = PauliSum::new(enc.n_qubits);
    let n = enc.n_qubits;
    for f in 0..enc.n_levels {
        let (row, col, val) = match kind {
            BosonOp::Annihilate if f + 1 < enc.n_levels => (f, f + 1, ((f + 1) as f64).sqrt()),
            BosonOp::Create if f + 1 < enc.n_levels => (f + 1, f, ((f + 1) as f64).sqrt()),
            BosonOp::Number if f > 0 => (f, f, f as f64),
            _ => continue,
        };
        let term = ketbra(n, enc.register_index(row), enc.register_index(col));
        out.add(&term.scaled(C64::new(val, 0.0)))
            .expect("same register width");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    JaynesCummings,
    RabiHubbard,
}

/// Physical parameters, all frequencies in units of `ω_c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelKind,
    pub omega_c: f64,
    pub omega_a: f64,
    pub g: f64,
    #[serde(rename = "J", default)]
    pub j: f64,
    #[serde(default = "default_cavities")]
    pub n_cavities: usize,
    pub max_photons: usize,
    /// Mott angle; derived from `tan 2θ = 2g/δ` when absent.
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(rename = "N_start", default)]
    pub n_start: usize,
    #[serde(default)]
    pub bit_order: BitOrder,
}

fn default_cavities() -> usize {
    2
}

impl ModelSpec {
    /// Jaynes-Cummings with `ω_c = 1`, 8 Fock levels, starting in `|N, g>`.
    pub fn jaynes_cummings(g: f64, delta: f64, n_start: usize) -> Self {
        ModelSpec {
            model: ModelKind::JaynesCummings,
            omega_c: 1.0,
            omega_a: 1.0 + delta,
            g,
            j: 0.0,
            n_cavities: 1,
            max_photons: 7,
            theta: None,
            n_start,
            bit_order: BitOrder::BigEndian,
        }
    }

    /// Two-cavity Rabi-Hubbard with `J = g = δ = 0.1 ω_c`, 4 Fock levels per cavity.
    pub fn rabi_hubbard_default() -> Self {
        ModelSpec {
            model: ModelKind::RabiHubbard,
            omega_c: 1.0,
            omega_a: 1.1,
            g: 0.1,
            j: 0.1,
            n_cavities: 2,
            max_photons: 3,
            theta: None,
            n_start: 0,
            bit_order: BitOrder::BigEndian,
        }
    }

    pub fn delta(&self) -> f64 {
        self.omega_a - self.omega_c
    }

    /// Mott angle with `tan 2θ = 2g/δ`.
    pub fn mott_theta(&self) -> f64 {
        self.theta.unwrap_or_else(|| 0.5 * (2.0 * self.g).atan2(self.delta()))
    }

    /// `Ω_N = sqrt(4g²N + δ²)`.
    pub fn rabi_frequency(&self) -> f64 {
        (4.0 * self.g * self.g * self.n_start as f64 + self.delta().powi(2)).sqrt()
    }

    pub fn encoding(&self) -> Result<BosonEncoding> {
        BosonEncoding::for_max_photons(self.max_photons, self.bit_order)
    }

    pub fn n_qubits(&self) -> Result<usize> {
        let b = self.encoding()?.n_qubits;
        Ok(match self.model {
            ModelKind::JaynesCummings => b + 1,
            ModelKind::RabiHubbard => self.n_cavities * (b + 1),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_c, self.omega_a, self.g, self.j]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.theta.is_some_and(|t| !t.is_finite()) {
            return Err(Error::InvalidSpec("model parameters must be finite".into()));
        }
        if self.max_photons < 1 {
            return Err(Error::InvalidSpec("max_photons must be at least 1".into()));
        }
        match self.model {
            ModelKind::JaynesCummings if self.n_start > self.max_photons => Err(Error::InvalidSpec(
                format!("N_start {} exceeds max_photons {}", self.n_start, self.max_photons),
            )),
            ModelKind::RabiHubbard if self.n_cavities < 1 => {
                Err(Error::InvalidSpec("need at least one cavity".into()))
            }
            _ => Ok(()),
        }
    }

    fn expect(&self, kind: ModelKind) -> Result<()> {
        self.validate()?;
        if self.model != kind {
            return Err(Error::InvalidSpec(format!(
                "expected a {kind:?} model, got {:?}",
                self.model
            )));
        }
        Ok(())
    }
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn single(n: usize, q: usize, letter: Letter) -> PauliSum {
    let mut s = PauliSum::new(n);
    s.add_term(PauliString::single(q, letter), real(1.0));
    s
}

fn mul(a: &PauliSum, b: &PauliSum) -> PauliSum {
    a.sum_multiply(b).expect("operands share a register")
}

fn accumulate(h: &mut PauliSum, term: &PauliSum, scale: f64) {
    h.add(&term.scaled(real(scale))).expect("operands share a register");
}

/// `ω_c b†b + ω_a σz/2 + g(b σ+ + b† σ-)`.
pub fn build_jc_hamiltonian(spec: &ModelSpec) -> Result<PauliSum> {
    spec.expect(ModelKind::JaynesCummings)?;
    let enc = spec.encoding()?;
    let n = enc.n_qubits + 1;
    let atom = enc.n_qubits;
    let b = encode_boson_op(BosonOp::Annihilate, &enc).embed(n, 0)?;
    let bd = encode_boson_op(BosonOp::Create, &enc).embed(n, 0)?;
    let num = encode_boson_op(BosonOp::Number, &enc).embed(n, 0)?;
    let sp = ketbra(1, 0, 1).embed(n, atom)?;
    let sm = ketbra(1, 1, 0).embed(n, atom)?;
    let mut h = PauliSum::new(n);
    accumulate(&mut h, &num, spec.omega_c);
    accumulate(&mut h, &single(n, atom, Letter::Z), spec.omega_a / 2.0);
    accumulate(&mut h, &mul(&b, &sp), spec.g);
    accumulate(&mut h, &mul(&bd, &sm), spec.g);
    Ok(h)
}

/// `Σ_i [ω_c n_i + ω_a σ+σ- + g σx(b + b†)] − J Σ_{i<j} (b_i b_j† + b_i† b_j)`.
pub fn build_rh_hamiltonian(spec: &ModelSpec) -> Result<PauliSum> {
    spec.expect(ModelKind::RabiHubbard)?;
    let enc = spec.encoding()?;
    let site = enc.n_qubits + 1;
    let n = spec.n_cavities * site;
    let ops = |kind, i: usize| encode_boson_op(kind, &enc).embed(n, i * site + 1);
    let mut h = PauliSum::new(n);
    for i in 0..spec.n_cavities {
        let atom = i * site;
        let b = ops(BosonOp::Annihilate, i)?;
        let bd = ops(BosonOp::Create, i)?;
        accumulate(&mut h, &ops(BosonOp::Number, i)?, spec.omega_c);
        accumulate(&mut h, &ketbra(1, 0, 0).embed(n, atom)?, spec.omega_a);
        let mut field = b.clone();
        field.add(&bd)?;
        accumulate(&mut h, &mul(&single(n, atom, Letter::X), &field), spec.g);
    }
    for i in 0..spec.n_cavities {
        for j in i + 1..spec.n_cavities {
            let hop_ij = mul(&ops(BosonOp::Annihilate, i)?, &ops(BosonOp::Create, j)?);
            let hop_ji = mul(&ops(BosonOp::Create, i)?, &ops(BosonOp::Annihilate, j)?);
            accumulate(&mut h, &hop_ij, -spec.j);
            accumulate(&mut h, &hop_ji, -spec.j);
        }
    }
    Ok(h)
}

/// Register index of the Jaynes-Cummings basis state `|f photons, atom>`
/// (`excited = true` for `|e>`).
pub fn jc_index(spec: &ModelSpec, photons: usize, excited: bool) -> Result<usize> {
    let enc = spec.encoding()?;
    Ok((enc.register_index(photons) << 1) | usize::from(!excited))
}

/// Initial state: `|N, g>` for Jaynes-Cummings, the Mott product
/// `(cosθ|0,e> − sinθ|1,g>)^{⊗ cavities}` for Rabi-Hubbard.
pub fn build_initial_state(spec: &ModelSpec) -> Result<StateVector> {
    spec.validate()?;
    match spec.model {
        ModelKind::JaynesCummings => {
            let n = spec.n_qubits()?;
            Ok(StateVector::basis(n, jc_index(spec, spec.n_start, false)?))
        }
        ModelKind::RabiHubbard => {
            let enc = spec.encoding()?;
            let site_q = enc.n_qubits + 1;
            let (s, c) = spec.mott_theta().sin_cos();
            let mut site = vec![C64::new(0.0, 0.0); 1 << site_q];
            // atom is the leading qubit of a site: |e> = 0, |g> = 1
            site[enc.register_index(0)] = real(c);
            site[(1 << enc.n_qubits) | enc.register_index(1)] = real(-s);
            let site = StateVector::from_amplitudes(site)?;
            let mut psi = site.clone();
            for _ in 1..spec.n_cavities {
                psi = psi.tensor(&site);
            }
            Ok(psi)
        }
    }
}

/// Five-qubit symmetry-reduced Mott state:
/// `cos²θ|01011> + sin²θ|00000> − cosθ sinθ (|01000> + |00011>)`.
pub fn tapered_mott_state(theta: f64) -> StateVector {
    let (s, c) = theta.sin_cos();
    let mut amps = vec![C64::new(0.0, 0.0); 32];
    amps[0b01011] = real(c * c);
    amps[0b00000] = real(s * s);
    amps[0b01000] = real(-c * s);
    amps[0b00011] = real(-c * s);
    StateVector::from_amplitudes(amps).expect("32 amplitudes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn one_qubit_ladder_examples() {
        let enc = BosonEncoding::new(2, BitOrder::BigEndian).unwrap();
        let a = encode_boson_op(BosonOp::Annihilate, &enc);
        let want = PauliSum::from_letters(1, [(c(0.5, 0.0), "X"), (c(0.0, 0.5), "Y")]).unwrap();
        assert_eq!(a, want);
        let num = encode_boson_op(BosonOp::Number, &enc);
        let want = PauliSum::from_letters(1, [(c(0.5, 0.0), "I"), (c(-0.5, 0.0), "Z")]).unwrap();
        assert_eq!(num, want);
    }

    #[test]
    fn encoding_widths() {
        assert_eq!(BosonEncoding::new(4, BitOrder::BigEndian).unwrap().n_qubits, 2);
        assert_eq!(BosonEncoding::new(5, BitOrder::BigEndian).unwrap().n_qubits, 3);
        assert_eq!(BosonEncoding::new(8, BitOrder::BigEndian).unwrap().n_qubits, 3);
        assert!(BosonEncoding::new(1, BitOrder::BigEndian).is_err());
    }

    #[test]
    fn little_endian_reverses_register_bits() {
        let enc = BosonEncoding::new(8, BitOrder::LittleEndian).unwrap();
        assert_eq!(enc.register_index(1), 0b100);
        assert_eq!(enc.register_index(6), 0b011);
    }

    #[test]
    fn jc_layout() {
        let spec = ModelSpec::jaynes_cummings(0.01, 0.001, 4);
        assert_eq!(spec.n_qubits().unwrap(), 4);
        assert_eq!(jc_index(&spec, 4, false).unwrap(), 0b1001);
        let psi = build_initial_state(&spec).unwrap();
        assert_eq!(psi.amplitude(9), c(1.0, 0.0));
    }

    #[test]
    fn decoupled_rh_is_diagonal() {
        let mut spec = ModelSpec::rabi_hubbard_default();
        spec.j = 0.0;
        spec.g = 0.0;
        let h = build_rh_hamiltonian(&spec).unwrap();
        assert!(h.iter().all(|(s, _)| s.is_diagonal()));
    }

    #[test]
    fn wrong_model_is_rejected() {
        let spec = ModelSpec::rabi_hubbard_default();
        assert!(build_jc_hamiltonian(&spec).is_err());
        let mut bad = ModelSpec::jaynes_cummings(0.1, 0.0, 9);
        assert!(build_jc_hamiltonian(&bad).is_err());
        bad.n_start = 1;
        bad.g = f64::NAN;
        assert!(build_jc_hamiltonian(&bad).is_err());
    }

    #[test]
    fn mott_state_shapes() {
        let psi = tapered_mott_state(0.0);
        assert_eq!(psi.amplitude(0b01011), c(1.0, 0.0));
        for theta in [0.1, 0.7, 1.3] {
            assert!((tapered_mott_state(theta).norm() - 1.0).abs() < 1e-12);
        }
        let spec = ModelSpec::rabi_hubbard_default();
        let psi = build_initial_state(&spec).unwrap();
        assert_eq!(psi.n_qubits(), 6);
        assert_eq!(psi.support().len(), 4);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spec_json_keys() {
        let spec = ModelSpec::rabi_hubbard_default();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"J\":0.1"));
        assert!(text.contains("\"N_start\":0"));
        let back: ModelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
