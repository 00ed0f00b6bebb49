//! One dataset element: an optimised circuit and its label.

use alloc::vec::Vec;

use crate::ansatz::{build_ansatz, AnsatzSpec, Family};
use crate::hamiltonian::build_hamiltonian;
use crate::statevector::{Circuit, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRecord {
    pub label: u8,
    pub family: Family,
    pub n_qubits: usize,
    pub depth: usize,
    /// Optimised angles in radians, one per parameter slot.
    pub params: Vec<f64>,
    pub energy: f64,
    pub ground_energy: Option<f64>,
}

impl CircuitRecord {
    /// Ansatz spec this record was optimised with.
    pub fn spec(&self) -> Result<AnsatzSpec> {
        let spec = AnsatzSpec::new(self.family, self.n_qubits, self.depth);
        Ok(if self.family == Family::Hamiltonian {
            spec.with_hamiltonian(build_hamiltonian(self.label, self.n_qubits)?)
        } else {
            spec
        })
    }

    /// The parameterised circuit; `params` must match its slot count.
    pub fn circuit(&self) -> Result<Circuit> {
        let c = build_ansatz(&self.spec()?)?;
        if c.n_params() != self.params.len() {
            return Err(Error::ParameterLength { expected: c.n_params(), found: self.params.len() });
        }
        Ok(c)
    }

    /// Circuit with the stored angles bound in.
    pub fn bound_circuit(&self) -> Result<Circuit> {
        self.circuit()?.bind(&self.params)
    }

    /// `U_m |0...0>`.
    pub fn state(&self) -> Result<StateVector> {
        self.circuit()?.run(&self.params)
    }
}
