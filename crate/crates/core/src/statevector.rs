//! Dense statevector simulation.
//!
//! Qubit `k` (1-based) is bit `k - 1` of the amplitude index. Rotations follow
//! `R_P(theta) = exp(-i theta P / 2)`; Pauli rotations of any weight are
//! applied directly on the `+-1` eigenspaces rather than decomposed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::{cos, sin, sqrt};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Where a rotation angle comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Fixed(f64),
    /// Entry `index` of the parameter vector, negated when `negated` is set.
    Slot { index: usize, negated: bool },
}

impl Param {
    pub fn slot(index: usize) -> Self {
        Param::Slot { index, negated: false }
    }

    pub fn bind(&self, params: &[f64]) -> Result<f64> {
        match *self {
            Param::Fixed(a) => Ok(a),
            Param::Slot { index, negated } => {
                let v = *params
                    .get(index)
                    .ok_or(Error::UnboundParameter { slot: index, len: params.len() })?;
                Ok(if negated { -v } else { v })
            }
        }
    }

    fn inverse(&self) -> Self {
        match *self {
            Param::Fixed(a) => Param::Fixed(-a),
            Param::Slot { index, negated } => Param::Slot { index, negated: !negated },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx(usize, Param),
    Ry(usize, Param),
    Rz(usize, Param),
    PauliRotation(PauliString, Param),
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
    H(usize),
    X(usize),
    Z(usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rx(..) => "rx",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
            Gate::PauliRotation(..) => "pauli_rotation",
            Gate::Cz(..) => "cz",
            Gate::Cnot { .. } => "cx",
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
        }
    }

    pub fn param(&self) -> Option<Param> {
        match self {
            Gate::Rx(_, p) | Gate::Ry(_, p) | Gate::Rz(_, p) | Gate::PauliRotation(_, p) => Some(*p),
            _ => None,
        }
    }

    fn param_mut(&mut self) -> Option<&mut Param> {
        match self {
            Gate::Rx(_, p) | Gate::Ry(_, p) | Gate::Rz(_, p) | Gate::PauliRotation(_, p) => Some(p),
            _ => None,
        }
    }

    /// Rotation generator `P` of `exp(-i theta P / 2)`.
    pub fn generator(&self, n_qubits: usize) -> Option<PauliString> {
        let single = |q: usize, p: Pauli| PauliString::single(n_qubits, q, p).ok();
        match self {
            Gate::Rx(q, _) => single(*q, Pauli::X),
            Gate::Ry(q, _) => single(*q, Pauli::Y),
            Gate::Rz(q, _) => single(*q, Pauli::Z),
            Gate::PauliRotation(p, _) => Some(*p),
            _ => None,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) | Gate::H(q) | Gate::X(q) | Gate::Z(q) => {
                vec![*q]
            }
            Gate::PauliRotation(p, _) => p.factors().map(|(q, _)| q).collect(),
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Cnot { control, target } => vec![*control, *target],
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if let Gate::PauliRotation(p, _) = self {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch { expected: n_qubits, found: p.n_qubits() });
            }
        }
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    /// Inverse gate: rotations negate their angle, Cliffords are self-inverse.
    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        if let Some(p) = g.param_mut() {
            *p = p.inverse();
        }
        g
    }

    fn bound(&self, params: &[f64]) -> Result<Gate> {
        let mut g = self.clone();
        if let Some(p) = g.param_mut() {
            *p = Param::Fixed(p.bind(params)?);
        }
        Ok(g)
    }
}

/// Ordered gate list; the first gate acts first on `|0...0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    /// Validates operands and that every slot in `0..n_params` is used.
    pub fn new(n_qubits: usize, gates: Vec<Gate>, n_params: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::pauli::MAX_QUBITS {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        let mut used = vec![false; n_params];
        for g in &gates {
            g.validate(n_qubits)?;
            if let Some(Param::Slot { index, .. }) = g.param() {
                if index >= n_params {
                    return Err(Error::UnboundParameter { slot: index, len: n_params });
                }
                used[index] = true;
            }
        }
        if let Some(slot) = used.iter().position(|u| !u) {
            return Err(Error::UnusedSlot(slot));
        }
        Ok(Self { n_qubits, gates, n_params })
    }

    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new(), 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    /// Same circuit with every symbolic angle replaced by its bound value.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        self.check_params(params)?;
        let gates = self.gates.iter().map(|g| g.bound(params)).collect::<Result<_>>()?;
        Ok(Circuit { n_qubits: self.n_qubits, gates, n_params: 0 })
    }

    /// `U^dagger`: reversed order, rotation angles negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            n_params: self.n_params,
        }
    }

    /// `self` followed by `other`; both must be fully bound.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        if self.n_params != 0 || other.n_params != 0 {
            return Err(Error::UnboundParameter { slot: 0, len: 0 });
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit { n_qubits: self.n_qubits, gates, n_params: 0 })
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::ParameterLength { expected: self.n_params, found: params.len() });
        }
        Ok(())
    }

    /// `U(params) |0...0>`.
    pub fn run(&self, params: &[f64]) -> Result<StateVector> {
        self.check_params(params)?;
        let mut s = StateVector::zero(self.n_qubits)?;
        for g in &self.gates {
            s.apply(g, params)?;
        }
        Ok(s)
    }
}

/// Gate list builder that hands out parameter slots in application order.
#[derive(Debug)]
pub struct CircuitBuilder {
    n_qubits: usize,
    gates: Vec<Gate>,
    next_slot: usize,
}

impl CircuitBuilder {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), next_slot: 0 }
    }

    fn fresh(&mut self) -> Param {
        let p = Param::slot(self.next_slot);
        self.next_slot += 1;
        p
    }

    pub fn rx(&mut self, q: usize) -> &mut Self {
        let p = self.fresh();
        self.gates.push(Gate::Rx(q, p));
        self
    }

    pub fn ry(&mut self, q: usize) -> &mut Self {
        let p = self.fresh();
        self.gates.push(Gate::Ry(q, p));
        self
    }

    pub fn rz(&mut self, q: usize) -> &mut Self {
        let p = self.fresh();
        self.gates.push(Gate::Rz(q, p));
        self
    }

    pub fn pauli_rotation(&mut self, p: PauliString) -> &mut Self {
        let slot = self.fresh();
        self.gates.push(Gate::PauliRotation(p, slot));
        self
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.gates.push(Gate::Cz(a, b));
        self
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.gates.push(Gate::Cnot { control, target });
        self
    }

    pub fn gate(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn build(self) -> Result<Circuit> {
        Circuit::new(self.n_qubits, self.gates, self.next_slot)
    }
}

/// `2^N` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::LengthMismatch(index, s.amps.len()));
        }
        s.amps[0] = ZERO;
        s.amps[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::LengthMismatch(amps.len(), 1 << n_qubits));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.same_width(other.n_qubits)?;
        Ok(crate::spectrum::inner(&self.amps, &other.amps))
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn same_width(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: n });
        }
        Ok(())
    }

    /// Applies `gate`, binding a symbolic angle from `params`.
    pub fn apply(&mut self, gate: &Gate, params: &[f64]) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let angle = gate.param().map(|p| p.bind(params)).transpose()?;
        self.apply_validated(gate, angle.unwrap_or(0.0));
        Ok(())
    }

    fn apply_validated(&mut self, gate: &Gate, angle: f64) {
        match *gate {
            Gate::Rx(q, _) => {
                let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
                let m = [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]];
                self.apply_1q(q, m);
            }
            Gate::Ry(q, _) => {
                let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
                let m = [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]];
                self.apply_1q(q, m);
            }
            Gate::Rz(q, _) => {
                let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
                let m = [[C64::new(c, -s), ZERO], [ZERO, C64::new(c, s)]];
                self.apply_1q(q, m);
            }
            Gate::PauliRotation(p, _) => self.apply_pauli_rotation(&p, angle),
            Gate::H(q) => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q, [[h, h], [h, -h]]);
            }
            Gate::X(q) => {
                let bit = 1usize << (q - 1);
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        self.amps.swap(i, i | bit);
                    }
                }
            }
            Gate::Z(q) => {
                let bit = 1usize << (q - 1);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << (a - 1)) | (1usize << (b - 1));
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let c = 1usize << (control - 1);
                let t = 1usize << (target - 1);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[C64; 2]; 2]) {
        let bit = 1usize << (q - 1);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// `exp(-i theta P / 2) = cos(theta/2) I - i sin(theta/2) P`.
    fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) {
        let (c, s) = (cos(theta / 2.0), sin(theta / 2.0));
        let minus_i_s = C64::new(0.0, -s);
        let x = p.x_mask() as usize;
        if x == 0 {
            // Diagonal: phase e^{-i theta/2} on the +1 eigenspace, e^{+i theta/2} on -1.
            let ny = (p.x_mask() & p.z_mask()).count_ones();
            debug_assert_eq!(ny, 0);
            let plus = C64::new(c, -s);
            let minus = C64::new(c, s);
            let z = p.z_mask();
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a *= if (i as u64 & z).count_ones().is_multiple_of(2) { plus } else { minus };
            }
            return;
        }
        let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for i in 0..self.amps.len() {
            if i & pivot != 0 {
                continue;
            }
            let j = i ^ x;
            // P|i> = ph_i |j>, P|j> = ph_j |i>.
            let ph_i = p.basis_phase(i as u64);
            let ph_j = p.basis_phase(j as u64);
            let (ai, aj) = (self.amps[i], self.amps[j]);
            self.amps[i] = ai * c + minus_i_s * ph_j * aj;
            self.amps[j] = aj * c + minus_i_s * ph_i * ai;
        }
    }

    /// `<psi|P|psi>`-style matrix element `<self|P|other>`.
    pub fn pauli_element(&self, p: &PauliString, other: &StateVector) -> C64 {
        let x = p.x_mask() as usize;
        let mut acc = ZERO;
        for (b, amp) in other.amps.iter().enumerate() {
            acc += self.amps[b ^ x].conj() * p.basis_phase(b as u64) * amp;
        }
        acc
    }

    /// `Re <psi|H|psi>`; the imaginary residual of a Hermitian `H` is
    /// checked in debug builds.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        self.same_width(h.n_qubits())?;
        let mut acc = ZERO;
        for &(c, p) in h.terms() {
            acc += c * self.pauli_element(&p, self);
        }
        debug_assert!(
            !h.is_real(0.0) || crate::math::abs(acc.im) <= 1e-10 * (1.0 + crate::math::abs(acc.re)),
            "non-Hermitian expectation {acc}"
        );
        Ok(acc.re)
    }

    /// `shots` i.i.d. computational-basis samples, keyed by basis index.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> BTreeMap<u64, u64> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let last_nonzero = self.amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.gen::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            *counts.entry(idx as u64).or_insert(0) += 1;
        }
        counts
    }
}

/// Bitstring for a basis index, qubit `N` leftmost and qubit 1 rightmost.
pub fn bitstring(index: u64, n_qubits: usize) -> String {
    (0..n_qubits).rev().map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// `|<0|U_a(pa)^dagger U_b(pb)|0>|^2` from the two output statevectors.
pub fn overlap_fidelity(a: &Circuit, pa: &[f64], b: &Circuit, pb: &[f64]) -> Result<f64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch { expected: a.n_qubits(), found: b.n_qubits() });
    }
    a.run(pa)?.fidelity(&b.run(pb)?)
}

/// `<H>` at `params`.
pub fn energy(circuit: &Circuit, params: &[f64], h: &PauliSum) -> Result<f64> {
    if h.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), found: h.n_qubits() });
    }
    circuit.run(params)?.expectation(h)
}

/// `<H>` and its gradient by a single reverse (adjoint) sweep.
///
/// With `psi_k` the state after gate `k` and `lambda_k` the back-propagated
/// `H psi`, a gate `exp(-i a P/2)` contributes `Im <lambda_k|P|psi_k>` to
/// `dE/da`; negated slots flip the sign.
pub fn energy_gradient(circuit: &Circuit, params: &[f64], h: &PauliSum) -> Result<(f64, Vec<f64>)> {
    let n = circuit.n_qubits();
    if h.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h.n_qubits() });
    }
    let mut psi = circuit.run(params)?;
    let mut lambda_amps = vec![ZERO; psi.amps.len()];
    h.apply(&psi.amps, &mut lambda_amps);
    let energy = crate::spectrum::inner(&psi.amps, &lambda_amps).re;
    let mut lambda = StateVector { n_qubits: n, amps: lambda_amps };
    let mut grad = vec![0.0; circuit.n_params()];
    for gate in circuit.gates().iter().rev() {
        let angle = gate.param().map(|p| p.bind(params)).transpose()?.unwrap_or(0.0);
        if let Some(Param::Slot { index, negated }) = gate.param() {
            let gen = gate.generator(n).ok_or(Error::NotDifferentiable(gate.name()))?;
            let d = lambda.pauli_element(&gen, &psi).im;
            grad[index] += if negated { -d } else { d };
        }
        let inv = gate.inverse();
        psi.apply_validated(&inv, -angle);
        lambda.apply_validated(&inv, -angle);
    }
    Ok((energy, grad))
}

/// `sqrt(sum x^2)`.
pub fn l2_norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}
