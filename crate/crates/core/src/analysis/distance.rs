use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::record::CircuitRecord;
use crate::seed::derive;
use crate::spectrum::GroundSpace;
use crate::statevector::{Circuit, StateVector};
use crate::{Error, Result};

/// Symmetric matrix of `d = 1 - |<psi_m|psi_m'>|^2` with labelled rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    ids: Vec<String>,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Checks shape, zero diagonal, symmetry and the `[0, 1 + 1e-9]` range.
    pub fn new(ids: Vec<String>, data: Vec<f64>) -> Result<Self> {
        let m = ids.len();
        if data.len() != m * m {
            return Err(Error::LengthMismatch(data.len(), m * m));
        }
        for i in 0..m {
            if data[i * m + i] != 0.0 {
                return Err(Error::InvalidDistance { row: i, col: i });
            }
            for j in 0..i {
                let v = data[i * m + j];
                if v != data[j * m + i] || !(0.0..=1.0 + 1e-9).contains(&v) {
                    return Err(Error::InvalidDistance { row: i, col: j });
                }
            }
        }
        Ok(Self { ids, data })
    }

    /// Fills the upper triangle from `f(i, j)` (for `i < j`) and mirrors it.
    /// Values are clamped into `[0, 1]` to absorb rounding.
    pub fn from_fn(ids: Vec<String>, mut f: impl FnMut(usize, usize) -> Result<f64>) -> Result<Self> {
        let m = ids.len();
        let mut data = vec![0.0; m * m];
        for i in 0..m {
            for j in i + 1..m {
                let v = f(i, j)?.clamp(0.0, 1.0);
                data[i * m + j] = v;
                data[j * m + i] = v;
            }
        }
        Ok(Self { ids, data })
    }

    /// Distances between already simulated output states.
    pub fn from_states(ids: Vec<String>, states: &[StateVector]) -> Result<Self> {
        if ids.len() != states.len() {
            return Err(Error::LengthMismatch(ids.len(), states.len()));
        }
        check_widths(states.iter().map(|s| s.n_qubits()))?;
        Self::from_fn(ids, |i, j| Ok(1.0 - states[i].fidelity(&states[j])?))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ids.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.ids.len();
        &self.data[i * m..(i + 1) * m]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Restriction to the given rows/columns, in that order.
    pub fn subset(&self, indices: &[usize]) -> DistanceMatrix {
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        let mut data = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j));
            }
        }
        DistanceMatrix { ids, data }
    }
}

fn check_widths(mut widths: impl Iterator<Item = usize>) -> Result<()> {
    if let Some(first) = widths.next() {
        for w in widths {
            if w != first {
                return Err(Error::DimensionMismatch { expected: first, found: w });
            }
        }
    }
    Ok(())
}

/// Exact fidelity distances; each record is simulated once.
pub fn distance_matrix_exact(ids: Vec<String>, records: &[CircuitRecord]) -> Result<DistanceMatrix> {
    check_widths(records.iter().map(|r| r.n_qubits))?;
    let states = records.iter().map(CircuitRecord::state).collect::<Result<Vec<_>>>()?;
    DistanceMatrix::from_states(ids, &states)
}

/// Compute-uncompute estimate of `|<0|U_a^dagger U_b|0>|^2`: run `U_b`,
/// then `U_a^dagger`, and report the frequency of the all-zeros outcome.
/// Both circuits must be bound.
pub fn shot_fidelity(a: &Circuit, b: &Circuit, shots: u64, seed: u64) -> Result<f64> {
    let circuit = b.then(&a.inverse())?;
    let state = circuit.run(&[])?;
    let counts = state.sample_counts(shots, seed);
    Ok(*counts.get(&0).unwrap_or(&0) as f64 / shots as f64)
}

/// Shot-estimated distances; pair `(i, j)` samples with seed `derive(seed, [i, j])`.
pub fn distance_matrix_shots(
    ids: Vec<String>,
    records: &[CircuitRecord],
    shots: u64,
    seed: u64,
) -> Result<DistanceMatrix> {
    check_widths(records.iter().map(|r| r.n_qubits))?;
    let circuits = records.iter().map(CircuitRecord::bound_circuit).collect::<Result<Vec<_>>>()?;
    DistanceMatrix::from_fn(ids, |i, j| {
        Ok(1.0 - shot_fidelity(&circuits[i], &circuits[j], shots, derive(seed, &[i as u64, j as u64]))?)
    })
}

/// `||P_g |psi>||^2` for the projector onto `ground`.
pub fn ground_state_fidelity(state: &StateVector, ground: &GroundSpace) -> Result<f64> {
    if state.n_qubits() != ground.n_qubits {
        return Err(Error::DimensionMismatch { expected: ground.n_qubits, found: state.n_qubits() });
    }
    Ok(ground.projection_weight(state.amplitudes()))
}
