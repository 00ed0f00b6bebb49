//! The ten ansatz families and the pair sets their entanglers run over.
//!
//! Operator products are read right to left: the rightmost factor acts first
//! on `|0...0>`. For a pair product over an ordered set `[p_1, ..., p_m]`
//! that means `p_m` is applied first. Commuting single-qubit layers are laid
//! out by ascending qubit. Every rotation gets its own parameter slot,
//! numbered in application order.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pauli::PauliSum;
use crate::statevector::{Circuit, CircuitBuilder};
use crate::{Error, Result};

pub const MIN_DEPTH: usize = 1;
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    Chain,
    Stair,
    Complete,
    Ladder,
    CrossLadder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    pub kind: PairKind,
    pub pairs: Vec<(usize, usize)>,
}

/// Ordered qubit pairs for `kind` on `n_qubits` qubits, with any pair that
/// falls outside `1..=n_qubits` removed.
///
/// The chain set is written with 0-based sites in its defining formula (its
/// raw indices run over `0..N`), so it is shifted by one here. Read 1-based
/// it would drop `(0, 1)` and leave qubit `N` without an entangler.
pub fn pair_set(kind: PairKind, n_qubits: usize) -> Result<PairSet> {
    let n = n_qubits as i64;
    let half = n / 2;
    let mut raw: Vec<(i64, i64)> = Vec::new();
    match kind {
        PairKind::Chain => {
            raw.extend((1..half).map(|j| (n - 2 * j, n - 2 * j + 1)));
            raw.extend((1..=half).map(|j| (n - 2 * j + 1, n - 2 * j + 2)));
        }
        PairKind::Stair => raw.extend((1..n).map(|k| (n - k, n - k + 1))),
        PairKind::Complete => {
            for k in 1..n {
                raw.extend((0..k).map(|kp| (n - k, n - kp)));
            }
        }
        PairKind::Ladder => raw.extend(ladder(n)),
        PairKind::CrossLadder => {
            raw.extend(ladder(n));
            for j in 1..half {
                raw.push((n - 2 * j, n - 2 * j + 1));
                raw.push((n - 2 * j - 1, n - 2 * j + 2));
            }
        }
    }
    // Complete is defined for any N >= 2; the brick patterns need even N.
    let needs_even = kind != PairKind::Complete;
    if n_qubits < 2 || (needs_even && !n_qubits.is_multiple_of(2)) || n_qubits > crate::pauli::MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n_qubits));
    }
    let pairs = raw
        .into_iter()
        .filter(|&(a, b)| (1..=n).contains(&a) && (1..=n).contains(&b))
        .map(|(a, b)| (a as usize, b as usize))
        .collect();
    Ok(PairSet { kind, pairs })
}

fn ladder(n: i64) -> Vec<(i64, i64)> {
    let half = n / 2;
    let mut v = Vec::new();
    v.extend((1..half).map(|j| (n - 2 * j - 1, n - 2 * j + 1)));
    v.extend((1..half).map(|j| (n - 2 * j, n - 2 * j + 2)));
    v.extend((1..=half).map(|j| (2 * j - 1, 2 * j)));
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Hamiltonian,
    He,
    CompleteHe,
    LadderHe,
    CrossLadderHe,
    OneDBb,
    StairBb,
    CompleteBb,
    LadderBb,
    CrossLadderBb,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Hamiltonian,
        Family::He,
        Family::CompleteHe,
        Family::LadderHe,
        Family::CrossLadderHe,
        Family::OneDBb,
        Family::StairBb,
        Family::CompleteBb,
        Family::LadderBb,
        Family::CrossLadderBb,
    ];

    /// Stable identifier used in manifests, file names and CLI flags.
    pub fn name(self) -> &'static str {
        match self {
            Family::Hamiltonian => "Hamiltonian",
            Family::He => "HE",
            Family::CompleteHe => "Complete-HE",
            Family::LadderHe => "Ladder-HE",
            Family::CrossLadderHe => "Cross-Ladder-HE",
            Family::OneDBb => "1D-BB",
            Family::StairBb => "Stair-BB",
            Family::CompleteBb => "Complete-BB",
            Family::LadderBb => "Ladder-BB",
            Family::CrossLadderBb => "Cross-Ladder-BB",
        }
    }

    fn pairs(self) -> Option<PairKind> {
        match self {
            Family::Hamiltonian => None,
            Family::He | Family::OneDBb => Some(PairKind::Chain),
            Family::StairBb => Some(PairKind::Stair),
            Family::CompleteHe | Family::CompleteBb => Some(PairKind::Complete),
            Family::LadderHe | Family::LadderBb => Some(PairKind::Ladder),
            Family::CrossLadderHe | Family::CrossLadderBb => Some(PairKind::CrossLadder),
        }
    }

    fn is_brick_block(self) -> bool {
        matches!(
            self,
            Family::OneDBb | Family::StairBb | Family::CompleteBb | Family::LadderBb | Family::CrossLadderBb
        )
    }

    /// Closed-form parameter count.
    ///
    /// * Hamiltonian: `D (|H| + 2N)` with identity terms excluded from `|H|`
    /// * hardware-efficient: `2N (D + 1)`
    /// * brick-block: `N + 4 |P| D`
    pub fn parameter_count(self, n_qubits: usize, depth: usize, hamiltonian_terms: usize) -> Result<usize> {
        Ok(match self.pairs() {
            None => depth * (hamiltonian_terms + 2 * n_qubits),
            Some(kind) if self.is_brick_block() => {
                n_qubits + 4 * pair_set(kind, n_qubits)?.pairs.len() * depth
            }
            Some(_) => 2 * n_qubits * (depth + 1),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    pub family: Family,
    pub n_qubits: usize,
    pub depth: usize,
    /// Required for [`Family::Hamiltonian`], ignored otherwise.
    pub hamiltonian: Option<PauliSum>,
}

impl AnsatzSpec {
    pub fn new(family: Family, n_qubits: usize, depth: usize) -> Self {
        Self { family, n_qubits, depth, hamiltonian: None }
    }

    pub fn with_hamiltonian(mut self, h: PauliSum) -> Self {
        self.hamiltonian = Some(h);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 || !self.n_qubits.is_multiple_of(2) || self.n_qubits > crate::pauli::MAX_QUBITS {
            return Err(Error::InvalidQubitCount(self.n_qubits));
        }
        if !(MIN_DEPTH..=MAX_DEPTH).contains(&self.depth) {
            return Err(Error::InvalidDepth(self.depth));
        }
        if self.family == Family::Hamiltonian {
            let h = self.hamiltonian.as_ref().ok_or(Error::MissingHamiltonian)?;
            if h.n_qubits() != self.n_qubits {
                return Err(Error::DimensionMismatch { expected: self.n_qubits, found: h.n_qubits() });
            }
        }
        Ok(())
    }

    pub fn parameter_count(&self) -> Result<usize> {
        let terms = self
            .hamiltonian
            .as_ref()
            .map(|h| h.terms().iter().filter(|t| !t.1.is_identity()).count())
            .unwrap_or(0);
        self.family.parameter_count(self.n_qubits, self.depth, terms)
    }
}

pub fn build_ansatz(spec: &AnsatzSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n_qubits;
    let mut b = CircuitBuilder::new(n);
    match spec.family.pairs() {
        None => {
            let h = spec.hamiltonian.as_ref().ok_or(Error::MissingHamiltonian)?;
            for _ in 0..spec.depth {
                for q in 1..=n {
                    b.rz(q).rx(q);
                }
                for (_, p) in h.terms() {
                    if !p.is_identity() {
                        b.pauli_rotation(*p);
                    }
                }
            }
        }
        Some(kind) if spec.family.is_brick_block() => {
            let pairs = pair_set(kind, n)?.pairs;
            for _ in 0..spec.depth {
                for &(a, c) in pairs.iter().rev() {
                    b.ry(a).ry(c).cnot(a, c).ry(a).ry(c).cnot(a, c);
                }
            }
            for q in 1..=n {
                b.ry(q);
            }
        }
        Some(kind) => {
            let pairs = pair_set(kind, n)?.pairs;
            for q in 1..=n {
                b.ry(q).rz(q);
            }
            for _ in 0..spec.depth {
                for &(a, c) in pairs.iter().rev() {
                    b.cz(a, c);
                }
                for q in 1..=n {
                    b.ry(q).rz(q);
                }
            }
        }
    }
    b.build()
}

/// Initial parameters: uniform on `[0, 0.1)` for the Hamiltonian ansatz and
/// on `[-2 pi, 2 pi)` otherwise.
pub fn parameter_init(spec: &AnsatzSpec, seed: u64) -> Result<Vec<f64>> {
    let count = spec.parameter_count()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = if spec.family == Family::Hamiltonian { (0.0, 0.1) } else { (-2.0 * PI, 2.0 * PI) };
    Ok((0..count).map(|_| rng.gen_range(lo..hi)).collect())
}

/// Family names joined with commas, for help text.
pub fn family_names() -> String {
    Family::ALL.iter().map(|f| f.name()).collect::<Vec<_>>().join(", ")
}
