//! Fermionic ladder-operator products and their Jordan-Wigner image.
//!
//! Mode `i` (1-based) maps to `a_i -> (X_i + i Y_i)/2 Z_{i-1} ... Z_1`, and
//! the creation operator to its Hermitian conjugate.

use alloc::vec::Vec;

use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    /// 1-based mode index.
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }
}

/// `coeff * op_1 op_2 ... op_k`, leftmost operator outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionProduct {
    pub n_modes: usize,
    pub ops: Vec<Ladder>,
    pub coeff: C64,
}

impl FermionProduct {
    pub fn new(n_modes: usize, coeff: C64, ops: &[Ladder]) -> Result<Self> {
        for op in ops {
            if op.mode == 0 || op.mode > n_modes {
                return Err(Error::ModeOutOfRange { mode: op.mode, n_modes });
            }
        }
        Ok(Self { n_modes, ops: ops.to_vec(), coeff })
    }

    /// `coeff * a_p^dagger a_q`.
    pub fn hopping(n_modes: usize, coeff: f64, p: usize, q: usize) -> Result<Self> {
        Self::new(n_modes, C64::new(coeff, 0.0), &[Ladder::create(p), Ladder::annihilate(q)])
    }

    /// `coeff * a_p^dagger a_p`.
    pub fn number(n_modes: usize, coeff: f64, p: usize) -> Result<Self> {
        Self::hopping(n_modes, coeff, p, p)
    }

    /// Constant `coeff * I`.
    pub fn scalar(n_modes: usize, coeff: f64) -> Result<Self> {
        Self::new(n_modes, C64::new(coeff, 0.0), &[])
    }
}

fn ladder_image(op: Ladder, n_qubits: usize) -> Result<PauliSum> {
    let mut tail: Vec<(usize, Pauli)> = (1..op.mode).map(|q| (q, Pauli::Z)).collect();
    tail.push((op.mode, Pauli::X));
    let x_part = PauliString::from_factors(n_qubits, &tail)?;
    tail.last_mut().expect("non-empty").1 = Pauli::Y;
    let y_part = PauliString::from_factors(n_qubits, &tail)?;
    let y_coeff = if op.dagger { -0.5 } else { 0.5 };
    PauliSum::from_terms(
        n_qubits,
        [(C64::new(0.5, 0.0), x_part), (C64::new(0.0, y_coeff), y_part)],
    )
}

/// Jordan-Wigner image of a single ladder product, canonicalised.
pub fn jordan_wigner(op: &FermionProduct, n_modes: usize) -> Result<PauliSum> {
    if op.n_modes != n_modes {
        return Err(Error::DimensionMismatch { expected: n_modes, found: op.n_modes });
    }
    for l in &op.ops {
        if l.mode == 0 || l.mode > n_modes {
            return Err(Error::ModeOutOfRange { mode: l.mode, n_modes });
        }
    }
    let mut acc = PauliSum::from_terms(n_modes, [(op.coeff, PauliString::identity(n_modes)?)])?;
    for &l in &op.ops {
        acc = acc.product(&ladder_image(l, n_modes)?)?;
    }
    Ok(acc.canonicalize())
}

/// Jordan-Wigner image of a sum of products.
pub fn jordan_wigner_sum(ops: &[FermionProduct], n_modes: usize) -> Result<PauliSum> {
    let mut out = PauliSum::new(n_modes)?;
    for op in ops {
        out.add_sum(&jordan_wigner(op, n_modes)?)?;
    }
    Ok(out.canonicalize())
}
