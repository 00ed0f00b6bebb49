//! Pauli strings and weighted sums of them.
//!
//! A [`PauliString`] stores its factors as two bit masks (`x` and `z`, bit
//! `k - 1` for qubit `k`) with `Y = i X Z`, so the operator represented is
//! `i^{|x & z|} X^x Z^z`. This is the same little-endian convention the
//! statevector simulator uses.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result, C64};

/// Largest register a [`PauliString`] can describe.
pub const MAX_QUBITS: usize = 64;

/// Coefficients below this magnitude are dropped by [`PauliSum::canonicalize`].
pub const ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Single-qubit product `self * rhs` as `(i^k, P)`.
    fn mul(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// `i^k` as a complex number.
pub fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Tensor product of single-qubit Paulis on an `n_qubits` register.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self { n_qubits, x: 0, z: 0 })
    }

    /// Builds a string from `(qubit, pauli)` factors with 1-based qubits.
    pub fn from_factors(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(n_qubits)?;
        let mut seen = 0u64;
        for &(q, p) in factors {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            let bit = 1u64 << (q - 1);
            if seen & bit != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            seen |= bit;
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        Self::from_factors(n_qubits, &[(qubit, p)])
    }

    /// From raw masks; bits above `n_qubits` are rejected.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        check_width(n_qubits)?;
        let allowed = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        let stray = (x | z) & !allowed;
        if stray != 0 {
            return Err(Error::QubitOutOfRange {
                qubit: stray.trailing_zeros() as usize + 1,
                n_qubits,
            });
        }
        Ok(Self { n_qubits, x, z })
    }

    fn set(&mut self, q: usize, p: Pauli) {
        let bit = 1u64 << (q - 1);
        let (xb, zb) = p.bits();
        self.x = if xb { self.x | bit } else { self.x & !bit };
        self.z = if zb { self.z | bit } else { self.z & !bit };
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        let bit = 1u64 << (qubit - 1);
        Pauli::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    /// Non-identity factors in ascending qubit order (1-based).
    pub fn factors(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        let support = self.support();
        (1..=self.n_qubits)
            .filter(move |q| support & (1u64 << (q - 1)) != 0)
            .map(move |q| (q, self.get(q)))
    }

    /// Lowest qubit acted on, or 0 for the identity.
    pub fn first_qubit(&self) -> usize {
        let s = self.support();
        if s == 0 {
            0
        } else {
            s.trailing_zeros() as usize + 1
        }
    }

    /// `self * rhs` with the accumulated phase of the single-qubit products.
    pub fn multiply(&self, rhs: &PauliString) -> Result<(C64, PauliString)> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: rhs.n_qubits,
            });
        }
        let mut out = PauliString { n_qubits: self.n_qubits, x: 0, z: 0 };
        let mut phase = 0u8;
        let mut both = self.support() | rhs.support();
        while both != 0 {
            let q = both.trailing_zeros() as usize + 1;
            both &= both - 1;
            let (k, p) = self.get(q).mul(rhs.get(q));
            phase = (phase + k) % 4;
            out.set(q, p);
        }
        Ok((i_pow(phase), out))
    }

    pub fn commutes_with(&self, rhs: &PauliString) -> bool {
        let anti = (self.x & rhs.z).count_ones() + (self.z & rhs.x).count_ones();
        anti.is_multiple_of(2)
    }

    /// Phase picked up by basis state `b`: `P|b> = phase(b) |b ^ x>`.
    #[inline]
    pub fn basis_phase(&self, b: u64) -> C64 {
        let k = (self.x & self.z).count_ones() as u8 + 2 * ((b & self.z).count_ones() % 2) as u8;
        i_pow(k)
    }

    /// Accumulates `coeff * P |src>` into `dst`.
    pub fn apply_add(&self, coeff: C64, src: &[C64], dst: &mut [C64]) {
        let ny = (self.x & self.z).count_ones() as u8;
        let base = coeff * i_pow(ny);
        for (b, amp) in src.iter().enumerate() {
            let b = b as u64;
            let sign = if (b & self.z).count_ones().is_multiple_of(2) { base } else { -base };
            dst[(b ^ self.x) as usize] += sign * amp;
        }
    }

    /// Dense `2^N x 2^N` matrix, row-major. Intended for small oracles.
    pub fn to_matrix(&self) -> Vec<C64> {
        let dim = 1usize << self.n_qubits;
        let mut m = vec![C64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let row = (col as u64 ^ self.x) as usize;
            m[row * dim + col] = self.basis_phase(col as u64);
        }
        m
    }

    fn sort_key(&self) -> (usize, Vec<(usize, Pauli)>) {
        (self.first_qubit(), self.factors().collect())
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString[{}](", self.n_qubits)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, p) in self.factors() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}{}", p.symbol(), q)?;
        }
        Ok(())
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n_qubits));
    }
    Ok(())
}

/// Weighted sum of Pauli strings with distinct strings.
///
/// Terms keep their insertion order; adding a string that is already present
/// merges coefficients into the existing term.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(C64, PauliString)>,
    index: BTreeMap<(u64, u64), usize>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self { n_qubits, terms: Vec::new(), index: BTreeMap::new() })
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C64, PauliString)>,
    {
        let mut s = Self::new(n_qubits)?;
        for (c, p) in terms {
            s.add(c, p)?;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(C64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, coeff: C64, p: PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: p.n_qubits() });
        }
        match self.index.get(&(p.x, p.z)) {
            Some(&i) => self.terms[i].0 += coeff,
            None => {
                self.index.insert((p.x, p.z), self.terms.len());
                self.terms.push((coeff, p));
            }
        }
        Ok(())
    }

    pub fn add_real(&mut self, coeff: f64, p: PauliString) -> Result<()> {
        self.add(C64::new(coeff, 0.0), p)
    }

    pub fn add_sum(&mut self, other: &PauliSum) -> Result<()> {
        for &(c, p) in &other.terms {
            self.add(c, p)?;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: C64) {
        for t in &mut self.terms {
            t.0 *= factor;
        }
    }

    /// Operator product `self * rhs`, merged term by term.
    pub fn product(&self, rhs: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: rhs.n_qubits });
        }
        let mut out = PauliSum::new(self.n_qubits)?;
        for &(ca, pa) in &self.terms {
            for &(cb, pb) in &rhs.terms {
                let (phase, p) = pa.multiply(&pb)?;
                out.add(ca * cb * phase, p)?;
            }
        }
        Ok(out)
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.0 = t.0.conj();
        }
        out
    }

    /// Drops near-zero terms and sorts by (first qubit, factor list).
    pub fn canonicalize(&self) -> PauliSum {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .copied()
            .filter(|(c, _)| c.norm() > ZERO_TOL)
            .collect();
        terms.sort_by_key(|t| t.1);
        let mut out = PauliSum::new(self.n_qubits).expect("width already validated");
        for (c, p) in terms {
            out.add(c, p).expect("same width");
        }
        out
    }

    /// True when every coefficient has a negligible imaginary part.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| crate::math::abs(c.im) <= tol)
    }

    /// Accumulates `H |src>` into `dst` (which is zeroed first).
    pub fn apply(&self, src: &[C64], dst: &mut [C64]) {
        for d in dst.iter_mut() {
            *d = C64::new(0.0, 0.0);
        }
        for &(c, p) in &self.terms {
            p.apply_add(c, src, dst);
        }
    }

    pub fn to_matrix(&self) -> Vec<C64> {
        let dim = 1usize << self.n_qubits;
        let mut m = vec![C64::new(0.0, 0.0); dim * dim];
        for &(c, p) in &self.terms {
            for col in 0..dim {
                let row = (col as u64 ^ p.x) as usize;
                m[row * dim + col] += c * p.basis_phase(col as u64);
            }
        }
        m
    }

    /// Parses the line-oriented text form written by `Display`.
    ///
    /// Each non-empty line is `re im P1 P2 ...` where every `P` is a Pauli
    /// letter followed by a 1-based qubit index. `#` starts a comment.
    pub fn parse_text(n_qubits: usize, text: &str) -> Result<PauliSum> {
        let mut out = PauliSum::new(n_qubits)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason| Error::PauliText { line: lineno + 1, reason };
            let mut toks = line.split_whitespace();
            let re: f64 = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err("bad real part"))?;
            let im: f64 = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err("bad imaginary part"))?;
            let mut factors = Vec::new();
            for tok in toks {
                if tok == "I" {
                    continue;
                }
                let mut chars = tok.chars();
                let p = match chars.next() {
                    Some('X') => Pauli::X,
                    Some('Y') => Pauli::Y,
                    Some('Z') => Pauli::Z,
                    _ => return Err(err("expected X, Y or Z")),
                };
                let q: usize = chars.as_str().parse().map_err(|_| err("bad qubit index"))?;
                factors.push((q, p));
            }
            let p = PauliString::from_factors(n_qubits, &factors)?;
            out.add(C64::new(re, im), p)?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, p) in &self.terms {
            write!(f, "{:?} {:?}", c.re, c.im)?;
            for (q, s) in p.factors() {
                write!(f, " {}{}", s.symbol(), q)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
