//! Gate-level IR with an explicit global phase.
//!
//! Circuits apply left to right: `gates[0]` acts first. Every synthesis in
//! this crate is exact including the global phase, so [`Circuit::unitary_of`]
//! can be compared entry-wise against the target operator.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{check_dense, Matrix, C64};

/// Rotations with a smaller angle are dropped when lowering or simplifying.
pub const ANGLE_TOL: f64 = 1e-12;

/// Unitarity tolerance for `u2x2` payloads.
pub const UNITARY_TOL: f64 = 1e-10;

pub type Mat2 = [[C64; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    #[serde(rename = "u2x2")]
    U2 { qubit: usize, matrix: Mat2 },
    Cx { control: usize, target: usize },
    X { qubit: usize },
    H { qubit: usize },
    Measure { qubit: usize },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rx { .. } => "rx",
            Gate::Ry { .. } => "ry",
            Gate::Rz { .. } => "rz",
            Gate::U2 { .. } => "u2x2",
            Gate::Cx { .. } => "cx",
            Gate::X { .. } => "x",
            Gate::H { .. } => "h",
            Gate::Measure { .. } => "measure",
        }
    }

    /// Qubits touched, control first for `cx`.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Cx { control, target } => (control, Some(target)),
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::U2 { qubit, .. }
            | Gate::X { qubit }
            | Gate::H { qubit }
            | Gate::Measure { qubit } => (qubit, None),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        let (a, b) = self.qubits();
        a == q || b == Some(q)
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    /// 2x2 matrix of a single-qubit unitary gate.
    pub fn matrix(&self) -> Option<Mat2> {
        match *self {
            Gate::Rx { angle, .. } => Some(rx(angle)),
            Gate::Ry { angle, .. } => Some(ry(angle)),
            Gate::Rz { angle, .. } => Some(rz(angle)),
            Gate::U2 { matrix, .. } => Some(matrix),
            Gate::X { .. } => Some(pauli_x()),
            Gate::H { .. } => Some(hadamard()),
            Gate::Cx { .. } | Gate::Measure { .. } => None,
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rx { qubit, angle } => Gate::Rx { qubit, angle: -angle },
            Gate::Ry { qubit, angle } => Gate::Ry { qubit, angle: -angle },
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::U2 { qubit, matrix } => Gate::U2 {
                qubit,
                matrix: dagger(&matrix),
            },
            ref g => g.clone(),
        }
    }

    fn remap(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::Rx { qubit, angle } => Gate::Rx { qubit: map[qubit], angle },
            Gate::Ry { qubit, angle } => Gate::Ry { qubit: map[qubit], angle },
            Gate::Rz { qubit, angle } => Gate::Rz { qubit: map[qubit], angle },
            Gate::U2 { qubit, matrix } => Gate::U2 { qubit: map[qubit], matrix },
            Gate::Cx { control, target } => Gate::Cx {
                control: map[control],
                target: map[target],
            },
            Gate::X { qubit } => Gate::X { qubit: map[qubit] },
            Gate::H { qubit } => Gate::H { qubit: map[qubit] },
            Gate::Measure { qubit } => Gate::Measure { qubit: map[qubit] },
        }
    }
}

pub fn rz(angle: f64) -> Mat2 {
    let h = angle / 2.0;
    [
        [C64::from_polar(1.0, -h), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, h)],
    ]
}

pub fn ry(angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

pub fn rx(angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x() -> Mat2 {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    [[o, l], [l, o]]
}

pub fn identity2() -> Mat2 {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    [[l, o], [o, l]]
}

pub fn matmul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn dagger(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn scale2(a: &Mat2, s: C64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

/// Max-entry distance between two 2x2 matrices.
pub fn dist2(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

pub fn unitarity_residual(a: &Mat2) -> f64 {
    dist2(&matmul2(&dagger(a), a), &identity2())
}

/// Wraps an angle into `(-π, π]`.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// `Rz(a)` re-expressed with `a` wrapped into `(-π, π]`: returns the wrapped
/// angle and the global phase picked up (`Rz(a + 2π) = -Rz(a)`).
fn wrap_rz(a: f64) -> (f64, f64) {
    let w = wrap_angle(a);
    let turns = ((a - w) / (2.0 * PI)).round();
    let phase = if (turns as i64).rem_euclid(2) == 1 { PI } else { 0.0 };
    (w, phase)
}

/// ZYZ Euler angles: `U = e^{iφ} Rz(a) Ry(b) Rz(c)`, returned as `(φ, a, b, c)`.
pub fn zyz_decompose(u: &Mat2) -> (f64, f64, f64, f64) {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let mut phi = det.arg() / 2.0;
    let strip = C64::from_polar(1.0, -phi);
    let alpha = u[0][0] * strip;
    let beta = u[1][0] * strip;
    let b = 2.0 * beta.norm().atan2(alpha.norm());
    let (mut a, mut b, mut c) = if beta.norm() < 1e-14 {
        (-2.0 * alpha.arg(), 0.0, 0.0)
    } else if alpha.norm() < 1e-14 {
        (2.0 * beta.arg(), b, 0.0)
    } else {
        (beta.arg() - alpha.arg(), b, -alpha.arg() - beta.arg())
    };
    if b.abs() < ANGLE_TOL {
        a += c;
        c = 0.0;
        b = 0.0;
    }
    let (wa, pa) = wrap_rz(a);
    let (wc, pc) = wrap_rz(c);
    a = wa;
    c = wc;
    phi += pa + pc;
    // Rz(π) Ry(b) Rz(-π) = Ry(-b)
    if b != 0.0 && (a.abs() - PI).abs() < ANGLE_TOL && (c.abs() - PI).abs() < ANGLE_TOL {
        if a < 0.0 {
            phi += PI;
        }
        if c > 0.0 {
            phi += PI;
        }
        a = 0.0;
        c = 0.0;
        b = -b;
    }
    (wrap_angle(phi), a, b, c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub global_phase: f64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>, global_phase: f64) -> Result<Self> {
        let c = Circuit {
            n_qubits,
            gates,
            global_phase,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            let (a, b) = g.qubits();
            for q in std::iter::once(a).chain(b) {
                if q >= self.n_qubits {
                    return Err(Error::InvalidSpec(format!(
                        "{} on qubit {q} outside a {}-qubit circuit",
                        g.name(),
                        self.n_qubits
                    )));
                }
            }
            if b == Some(a) {
                return Err(Error::InvalidSpec("cx needs two distinct qubits".into()));
            }
            if let Gate::U2 { matrix, .. } = g {
                let r = unitarity_residual(matrix);
                if r > UNITARY_TOL {
                    return Err(Error::NonUnitary(r));
                }
            }
        }
        Ok(())
    }

    /// Appends a gate; panics on an out-of-range or malformed gate.
    pub fn push(&mut self, gate: Gate) {
        let (a, b) = gate.qubits();
        assert!(a < self.n_qubits, "qubit {a} out of range");
        if let Some(b) = b {
            assert!(b < self.n_qubits && b != a, "bad cx qubits ({a}, {b})");
        }
        self.gates.push(gate);
    }

    pub fn add_phase(&mut self, phase: f64) {
        self.global_phase = wrap_angle(self.global_phase + phase);
    }

    /// Appends `other` (same width) after `self`.
    pub fn append(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits, "width mismatch");
        self.gates.extend(other.gates.iter().cloned());
        self.add_phase(other.global_phase);
    }

    /// Appends `other` with its qubit `j` relabelled as `map[j]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) {
        assert_eq!(map.len(), other.n_qubits, "map must cover every qubit");
        for g in &other.gates {
            self.push(g.remap(map));
        }
        self.add_phase(other.global_phase);
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: wrap_angle(-self.global_phase),
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Greedy layered depth; gates on disjoint qubits share a layer.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let (a, b) = g.qubits();
            let l = 1 + b.map_or(level[a], |b| level[a].max(level[b]));
            level[a] = l;
            if let Some(b) = b {
                level[b] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    /// Dense unitary including the global phase.
    pub fn unitary_of(&self) -> Result<Matrix> {
        check_dense(self.n_qubits)?;
        let n = self.n_qubits;
        let dim = 1usize << n;
        let mut u = Matrix::identity(dim, dim);
        for g in &self.gates {
            match *g {
                Gate::Measure { .. } => {
                    return Err(Error::InvalidSpec(
                        "unitary_of is undefined for circuits with measurements".into(),
                    ))
                }
                Gate::Cx { control, target } => {
                    let cbit = 1usize << (n - 1 - control);
                    let tbit = 1usize << (n - 1 - target);
                    for r in 0..dim {
                        if r & cbit != 0 && r & tbit == 0 {
                            u.swap_rows(r, r | tbit);
                        }
                    }
                }
                _ => {
                    let (q, _) = g.qubits();
                    let m = g.matrix().expect("single-qubit gate");
                    let bit = 1usize << (n - 1 - q);
                    for r0 in (0..dim).filter(|r| r & bit == 0) {
                        let r1 = r0 | bit;
                        for col in 0..dim {
                            let a = u[(r0, col)];
                            let b = u[(r1, col)];
                            u[(r0, col)] = m[0][0] * a + m[0][1] * b;
                            u[(r1, col)] = m[1][0] * a + m[1][1] * b;
                        }
                    }
                }
            }
        }
        Ok(u * C64::from_polar(1.0, self.global_phase))
    }

    /// Replaces every `u2x2` by `rz·ry·rz` and moves its phase into the
    /// global phase. Rotations below [`ANGLE_TOL`] are dropped.
    pub fn lower(&self) -> Circuit {
        let mut out = Circuit::new(self.n_qubits);
        out.global_phase = self.global_phase;
        for g in &self.gates {
            match *g {
                Gate::U2 { qubit, matrix } => {
                    let (phi, a, b, c) = zyz_decompose(&matrix);
                    out.add_phase(phi);
                    for (kind, angle) in [('z', c), ('y', b), ('z', a)] {
                        if angle.abs() < ANGLE_TOL {
                            continue;
                        }
                        out.gates.push(match kind {
                            'z' => Gate::Rz { qubit, angle },
                            _ => Gate::Ry { qubit, angle },
                        });
                    }
                }
                Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. }
                    if angle.abs() < ANGLE_TOL => {}
                ref other => out.gates.push(other.clone()),
            }
        }
        out
    }

    /// Fuses runs of single-qubit gates into one `u2x2` each (dropping those
    /// equal to the identity up to phase) and cancels back-to-back identical
    /// `cx` pairs, repeating until nothing changes.
    pub fn simplified(&self) -> Circuit {
        let mut cur = self.clone();
        loop {
            let before = cur.gates.len();
            cur = cur.fuse_single_qubit_runs().cancel_cx_pairs();
            if cur.gates.len() == before {
                return cur;
            }
        }
    }

    /// [`Circuit::simplified`] followed by [`Circuit::lower`].
    pub fn compacted(&self) -> Circuit {
        self.simplified().lower()
    }

    fn fuse_single_qubit_runs(&self) -> Circuit {
        let mut out = Circuit::new(self.n_qubits);
        out.global_phase = self.global_phase;
        let mut pending: Vec<Option<Mat2>> = vec![None; self.n_qubits];
        let flush = |q: usize, pending: &mut Vec<Option<Mat2>>, out: &mut Circuit| {
            if let Some(m) = pending[q].take() {
                // identity up to phase: off-diagonals vanish and diagonals agree
                if m[0][1].norm() < 1e-13 && m[1][0].norm() < 1e-13 && (m[0][0] - m[1][1]).norm() < 1e-13
                {
                    out.add_phase(m[0][0].arg());
                } else {
                    out.gates.push(Gate::U2 { qubit: q, matrix: m });
                }
            }
        };
        for g in &self.gates {
            match g.matrix() {
                Some(m) => {
                    let (q, _) = g.qubits();
                    pending[q] = Some(match pending[q] {
                        Some(p) => matmul2(&m, &p),
                        None => m,
                    });
                }
                None => {
                    let (a, b) = g.qubits();
                    flush(a, &mut pending, &mut out);
                    if let Some(b) = b {
                        flush(b, &mut pending, &mut out);
                    }
                    out.gates.push(g.clone());
                }
            }
        }
        for q in 0..self.n_qubits {
            flush(q, &mut pending, &mut out);
        }
        out
    }

    fn cancel_cx_pairs(&self) -> Circuit {
        let mut slots: Vec<Option<Gate>> = Vec::with_capacity(self.gates.len());
        let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); self.n_qubits];
        for g in &self.gates {
            if let Gate::Cx { control, target } = *g {
                let top_c = stacks[control].last().copied();
                let top_t = stacks[target].last().copied();
                if let (Some(i), Some(j)) = (top_c, top_t) {
                    if i == j && slots[i].as_ref() == Some(g) {
                        slots[i] = None;
                        stacks[control].pop();
                        stacks[target].pop();
                        continue;
                    }
                }
            }
            let idx = slots.len();
            let (a, b) = g.qubits();
            stacks[a].push(idx);
            if let Some(b) = b {
                stacks[b].push(idx);
            }
            slots.push(Some(g.clone()));
        }
        Circuit {
            n_qubits: self.n_qubits,
            gates: slots.into_iter().flatten().collect(),
            global_phase: self.global_phase,
        }
    }

    /// OpenQASM 2.0 text. The global phase, which QASM cannot express, is
    /// carried in a `// global_phase` comment that [`Circuit::from_qasm`] reads back.
    pub fn to_qasm(&self) -> Result<String> {
        let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(s, "qreg q[{}];", self.n_qubits);
        let has_measure = self.gates.iter().any(|g| matches!(g, Gate::Measure { .. }));
        if has_measure {
            let _ = writeln!(s, "creg c[{}];", self.n_qubits);
        }
        if self.global_phase != 0.0 {
            let _ = writeln!(s, "// global_phase {}", self.global_phase);
        }
        for g in &self.gates {
            match *g {
                Gate::Rx { qubit, angle } => writeln!(s, "rx({angle}) q[{qubit}];"),
                Gate::Ry { qubit, angle } => writeln!(s, "ry({angle}) q[{qubit}];"),
                Gate::Rz { qubit, angle } => writeln!(s, "rz({angle}) q[{qubit}];"),
                Gate::X { qubit } => writeln!(s, "x q[{qubit}];"),
                Gate::H { qubit } => writeln!(s, "h q[{qubit}];"),
                Gate::Cx { control, target } => writeln!(s, "cx q[{control}],q[{target}];"),
                Gate::Measure { qubit } => writeln!(s, "measure q[{qubit}] -> c[{qubit}];"),
                Gate::U2 { .. } => return Err(Error::Unlowered("u2x2".into())),
            }
            .expect("writing to a String cannot fail");
        }
        Ok(s)
    }

    /// Parses the QASM subset written by [`Circuit::to_qasm`].
    pub fn from_qasm(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        let mut phase = 0.0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix("// global_phase") {
                phase = rest
                    .trim()
                    .parse()
                    .map_err(|e| perr(format!("global phase: {e}")))?;
                continue;
            }
            if line.is_empty()
                || line.starts_with("//")
                || line.starts_with("OPENQASM")
                || line.starts_with("include")
                || line.starts_with("creg")
            {
                continue;
            }
            let stmt = line
                .strip_suffix(';')
                .ok_or_else(|| perr("missing `;`".into()))?
                .trim();
            if let Some(rest) = stmt.strip_prefix("qreg") {
                let n = parse_index(rest.trim(), "q").map_err(perr)?;
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| perr("gate before qreg declaration".into()))?;
            let (head, args) = stmt
                .split_once(char::is_whitespace)
                .ok_or_else(|| perr(format!("cannot parse {stmt:?}")))?;
            let (name, param) = match head.split_once('(') {
                Some((name, p)) => {
                    let p = p
                        .strip_suffix(')')
                        .ok_or_else(|| perr("unclosed parameter list".into()))?;
                    let v: f64 = p
                        .trim()
                        .parse()
                        .map_err(|e| perr(format!("angle {p:?}: {e}")))?;
                    (name, Some(v))
                }
                None => (head, None),
            };
            let args = args.trim();
            let gate = match (name, param) {
                ("rx" | "ry" | "rz", Some(angle)) => {
                    let qubit = parse_index(args, "q").map_err(perr)?;
                    match name {
                        "rx" => Gate::Rx { qubit, angle },
                        "ry" => Gate::Ry { qubit, angle },
                        _ => Gate::Rz { qubit, angle },
                    }
                }
                ("x", None) => Gate::X {
                    qubit: parse_index(args, "q").map_err(perr)?,
                },
                ("h", None) => Gate::H {
                    qubit: parse_index(args, "q").map_err(perr)?,
                },
                ("cx", None) => {
                    let (a, b) = args
                        .split_once(',')
                        .ok_or_else(|| perr("cx needs two operands".into()))?;
                    Gate::Cx {
                        control: parse_index(a.trim(), "q").map_err(perr)?,
                        target: parse_index(b.trim(), "q").map_err(perr)?,
                    }
                }
                ("measure", None) => {
                    let (q, _) = args
                        .split_once("->")
                        .ok_or_else(|| perr("measure needs `->`".into()))?;
                    Gate::Measure {
                        qubit: parse_index(q.trim(), "q").map_err(perr)?,
                    }
                }
                _ => return Err(perr(format!("unsupported statement {stmt:?}"))),
            };
            c.gates.push(gate);
        }
        let mut c = circuit.ok_or(Error::Parse {
            line: 0,
            msg: "no qreg declaration".into(),
        })?;
        c.global_phase = phase;
        c.validate()?;
        Ok(c)
    }
}

fn parse_index(s: &str, reg: &str) -> std::result::Result<usize, String> {
    s.strip_prefix(reg)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| format!("expected {reg}[i], got {s:?}"))
}
