//! Phased Pauli strings and complex-weighted Pauli sums.
//!
//! Strings use the symplectic form: qubit `j` carries the letter given by bit
//! `j` of `(x, z)`, with `(0,0)=I`, `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`. The
//! unphased operator for a mask pair is `i^{|x&z|} X^x Z^z`, so every letter
//! is Hermitian and the `i` bookkeeping only shows up in products.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::{check_dense, Matrix, C64};

/// Widest register a [`PauliString`] can describe.
pub const MAX_QUBITS: usize = 64;

/// Coefficients whose magnitude falls below this after like-term collection
/// are discarded.
pub const COLLECT_TOL: f64 = 1e-14;

/// Largest register for which products use a flat `4^n` accumulator.
const FLAT_ACCUMULATOR_QUBITS: usize = 10;

const I_POWERS: [C64; 4] = [
    C64::new(1.0, 0.0),
    C64::new(0.0, 1.0),
    C64::new(-1.0, 0.0),
    C64::new(0.0, -1.0),
];

/// `i^e` for any integer exponent.
pub(crate) fn i_pow(e: u32) -> C64 {
    I_POWERS[(e & 3) as usize]
}

/// Maps a per-qubit mask (bit `q` = qubit `q`) onto basis-index bits, where
/// qubit 0 is the most significant bit of an `n`-qubit index.
pub(crate) fn index_mask(mask: u64, n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (mask.reverse_bits() >> (64 - n)) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' | 'i' => Some(Letter::I),
            'X' | 'x' => Some(Letter::X),
            'Y' | 'y' => Some(Letter::Y),
            'Z' | 'z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    /// 2x2 matrix of the letter.
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Letter::I => [[l, o], [o, l]],
            Letter::X => [[o, l], [l, o]],
            Letter::Y => [[o, -i], [i, o]],
            Letter::Z => [[l, o], [o, -l]],
        }
    }
}

/// Unphased Pauli letters over at most [`MAX_QUBITS`] qubits.
///
/// Ordering is lexicographic on the letter string read from qubit 0 with
/// `I < X < Y < Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x: u64, z: u64) -> Self {
        PauliString { x, z }
    }

    /// Single letter on qubit `q`.
    pub fn single(q: usize, letter: Letter) -> Self {
        PauliString::IDENTITY.with_letter(q, letter)
    }

    pub fn parse(letters: &str) -> Result<(Self, usize)> {
        let n = letters.chars().count();
        if n > MAX_QUBITS {
            return Err(Error::Guard {
                what: "Pauli string length",
                value: n,
                limit: MAX_QUBITS,
            });
        }
        let mut s = PauliString::IDENTITY;
        for (q, c) in letters.chars().enumerate() {
            let letter = Letter::from_char(c)
                .ok_or_else(|| Error::InvalidSpec(format!("bad Pauli letter {c:?}")))?;
            s = s.with_letter(q, letter);
        }
        Ok((s, n))
    }

    pub fn letter(&self, q: usize) -> Letter {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }

    pub fn with_letter(mut self, q: usize, letter: Letter) -> Self {
        let (x, z) = letter.bits();
        let bit = 1u64 << q;
        self.x = (self.x & !bit) | if x { bit } else { 0 };
        self.z = (self.z & !bit) | if z { bit } else { 0 };
        self
    }

    pub fn letters(&self, n: usize) -> String {
        (0..n).map(|q| self.letter(q).as_char()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when the string only contains I and Z.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Number of Y letters; the unphased operator carries `i^{n_y}`.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `self * other = i^e * (self ^ other)`; returns the product string and `e mod 4`.
    pub fn product(&self, other: &PauliString) -> (PauliString, u32) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        (PauliString { x, z }, e & 3)
    }

    /// Acts on basis index `b` of an `n`-qubit register: `P|b> = phase |b'>`.
    pub fn apply_to_index(&self, b: usize, n: usize) -> (usize, C64) {
        let xi = index_mask(self.x, n);
        let zi = index_mask(self.z, n);
        let sign = ((zi & b).count_ones() & 1) * 2;
        (b ^ xi, i_pow(self.y_count() + sign))
    }

    fn sort_key(&self, q: u32) -> u64 {
        let z = (self.z >> q) & 1;
        let xz = ((self.x ^ self.z) >> q) & 1;
        (z << 1) | xz
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.x ^ other.x) | (self.z ^ other.z);
        if diff == 0 {
            return Ordering::Equal;
        }
        let q = diff.trailing_zeros();
        self.sort_key(q).cmp(&other.sort_key(q))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Pauli string with an explicit unit phase `e^{iθ}`.
#[derive(Clone, Copy, Debug)]
pub struct PauliTerm {
    pub n_qubits: usize,
    pub string: PauliString,
    pub phase: C64,
}

impl PauliTerm {
    pub fn new(n_qubits: usize, string: PauliString, phase: C64) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Guard {
                what: "qubit count",
                value: n_qubits,
                limit: MAX_QUBITS,
            });
        }
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("phase {phase} is not a unit scalar")));
        }
        let used = string.x | string.z;
        if n_qubits < 64 && used >> n_qubits != 0 {
            return Err(Error::InvalidSpec("string acts outside the register".into()));
        }
        Ok(PauliTerm {
            n_qubits,
            string,
            phase,
        })
    }

    pub fn parse(letters: &str) -> Result<Self> {
        let (string, n) = PauliString::parse(letters)?;
        PauliTerm::new(n, string, C64::new(1.0, 0.0))
    }

    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        multiply(self, other)
    }

    pub fn to_dense(&self) -> Result<Matrix> {
        let mut sum = PauliSum::new(self.n_qubits);
        sum.add_term(self.string, self.phase);
        sum.to_dense()
    }
}

impl PartialEq for PauliTerm {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits
            && self.string == other.string
            && (self.phase - other.phase).norm() <= 1e-12
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*{}", self.phase, self.string.letters(self.n_qubits))
    }
}

/// Exact product of two phased Pauli strings.
pub fn multiply(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Dimension {
            expected: a.n_qubits,
            got: b.n_qubits,
        });
    }
    let (string, e) = a.string.product(&b.string);
    Ok(PauliTerm {
        n_qubits: a.n_qubits,
        string,
        phase: a.phase * b.phase * i_pow(e),
    })
}

/// `Σ_ℓ c_ℓ P_ℓ` with phases folded into the coefficients, one entry per string.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, C64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliSum {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let mut s = PauliSum::new(n_qubits);
        s.terms.insert(PauliString::IDENTITY, C64::new(1.0, 0.0));
        s
    }

    /// Builds a sum from `(coefficient, letters)` pairs, collecting repeats.
    pub fn from_letters<'a, I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C64, &'a str)>,
    {
        let mut s = PauliSum::new(n_qubits);
        for (c, letters) in terms {
            let (string, n) = PauliString::parse(letters)?;
            if n != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    got: n,
                });
            }
            s.add_term(string, c);
        }
        Ok(s)
    }

    pub fn from_term(term: &PauliTerm) -> Self {
        let mut s = PauliSum::new(term.n_qubits);
        s.add_term(term.string, term.phase);
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic letter order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&PauliString, &C64)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, string: &PauliString) -> C64 {
        self.terms.get(string).copied().unwrap_or_default()
    }

    /// Adds `c * P` and drops the entry if the collected coefficient vanishes.
    pub fn add_term(&mut self, string: PauliString, c: C64) {
        let entry = self.terms.entry(string).or_default();
        *entry += c;
        if entry.norm() < COLLECT_TOL {
            self.terms.remove(&string);
        }
    }

    pub fn add(&mut self, other: &PauliSum) -> Result<()> {
        self.check_same(other)?;
        for (s, c) in other.iter() {
            self.add_term(*s, *c);
        }
        Ok(())
    }

    pub fn scaled(&self, factor: C64) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for (s, c) in self.iter() {
            out.add_term(*s, c * factor);
        }
        out
    }

    /// Hermitian conjugate: every letter string is Hermitian, so only the
    /// coefficients are conjugated.
    pub fn dagger(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(s, c)| (*s, c.conj())).collect(),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// `|α|₁ = Σ |c_ℓ|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn sum_multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        sum_multiply(self, other)
    }

    pub fn power(&self, k: u32) -> Result<PauliSum> {
        sum_power(self, k)
    }

    pub fn truncate(&self, eps: f64) -> PauliSum {
        truncate(self, eps)
    }

    pub fn to_dense(&self) -> Result<Matrix> {
        check_dense(self.n_qubits)?;
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim, dim);
        for (s, c) in self.iter() {
            for b in 0..dim {
                let (row, phase) = s.apply_to_index(b, self.n_qubits);
                m[(row, b)] += c * phase;
            }
        }
        Ok(m)
    }

    /// Embeds the sum into a wider register, placing qubit `j` at `offset + j`.
    pub fn embed(&self, n_qubits: usize, offset: usize) -> Result<PauliSum> {
        if offset + self.n_qubits > n_qubits || n_qubits > MAX_QUBITS {
            return Err(Error::Dimension {
                expected: n_qubits,
                got: offset + self.n_qubits,
            });
        }
        let mut out = PauliSum::new(n_qubits);
        for (s, c) in self.iter() {
            out.add_term(PauliString::new(s.x << offset, s.z << offset), *c);
        }
        Ok(out)
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Reads the one-term-per-line text format `<re> <im> <letters>`.
    ///
    /// Blank lines and `#` comments are skipped; a `# qubits N` comment fixes
    /// the width of an otherwise empty file.
    pub fn read_text<R: BufRead>(reader: R) -> Result<PauliSum> {
        let mut n_qubits: Option<usize> = None;
        let mut entries = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if words.next() == Some("qubits") {
                    let n = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| Error::Parse {
                            line: lineno,
                            msg: "bad qubit count".into(),
                        })?;
                    n_qubits = Some(n);
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `<re> <im> <letters>`, got {} fields", fields.len()),
                });
            }
            let parse_f = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("{s:?}: {e}"),
                })
            };
            let c = C64::new(parse_f(fields[0])?, parse_f(fields[1])?);
            let (string, n) = PauliString::parse(fields[2]).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            match n_qubits {
                Some(m) if m != n => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("term has {n} letters, expected {m}"),
                    })
                }
                _ => n_qubits = Some(n),
            }
            entries.push((string, c));
        }
        let n = n_qubits.ok_or(Error::Parse {
            line: 0,
            msg: "empty Pauli sum without `# qubits N` header".into(),
        })?;
        let mut sum = PauliSum::new(n);
        for (s, c) in entries {
            sum.add_term(s, c);
        }
        Ok(sum)
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# qubits {}", self.n_qubits)?;
        for (s, c) in self.iter() {
            writeln!(w, "{} {} {}", c.re, c.im, s.letters(self.n_qubits))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", s.letters(self.n_qubits))?;
        }
        Ok(())
    }
}

/// Distributive product with like-term collection.
pub fn sum_multiply(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    a.check_same(b)?;
    let n = a.n_qubits;
    let mut out = PauliSum::new(n);
    if a.is_empty() || b.is_empty() {
        return Ok(out);
    }
    if n <= FLAT_ACCUMULATOR_QUBITS {
        let slot = |s: &PauliString| ((s.x as usize) << n) | s.z as usize;
        let mut acc = vec![C64::new(0.0, 0.0); 1usize << (2 * n)];
        let mut touched = Vec::new();
        let mut seen = vec![false; acc.len()];
        for (sa, ca) in a.iter() {
            for (sb, cb) in b.iter() {
                let (s, e) = sa.product(sb);
                let idx = slot(&s);
                if !seen[idx] {
                    seen[idx] = true;
                    touched.push(s);
                }
                acc[idx] += ca * cb * i_pow(e);
            }
        }
        for s in touched {
            let c = acc[slot(&s)];
            if c.norm() >= COLLECT_TOL {
                out.terms.insert(s, c);
            }
        }
    } else {
        let mut acc: HashMap<PauliString, C64> = HashMap::new();
        for (sa, ca) in a.iter() {
            for (sb, cb) in b.iter() {
                let (s, e) = sa.product(sb);
                *acc.entry(s).or_default() += ca * cb * i_pow(e);
            }
        }
        out.terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= COLLECT_TOL)
            .collect();
    }
    Ok(out)
}

/// `a^k` by binary exponentiation; `a^0` is the identity sum.
pub fn sum_power(a: &PauliSum, k: u32) -> Result<PauliSum> {
    let mut result = PauliSum::identity(a.n_qubits);
    if k == 0 {
        return Ok(result);
    }
    let mut base = a.clone();
    let mut e = k;
    let mut first = true;
    loop {
        if e & 1 == 1 {
            result = if first {
                base.clone()
            } else {
                sum_multiply(&result, &base)?
            };
            first = false;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = sum_multiply(&base, &base)?;
    }
    Ok(result)
}

/// Drops every term with `|c| < eps`.
pub fn truncate(a: &PauliSum, eps: f64) -> PauliSum {
    PauliSum {
        n_qubits: a.n_qubits,
        terms: a
            .terms
            .iter()
            .filter(|(_, c)| c.norm() >= eps)
            .map(|(s, c)| (*s, *c))
            .collect(),
    }
}
