//! Multi-restart VQE: BFGS on the exact energy with adjoint gradients.

use alloc::vec::Vec;

use crate::ansatz::{build_ansatz, parameter_init, AnsatzSpec};
use crate::optimize::{bfgs_minimize, BfgsConfig, OptimizationTrace};
use crate::pauli::PauliSum;
use crate::record::CircuitRecord;
use crate::seed::restart_seed;
use crate::statevector::energy_gradient;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqeConfig {
    pub bfgs: BfgsConfig,
    pub restarts: usize,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self { bfgs: BfgsConfig::default(), restarts: 10 }
    }
}

#[derive(Debug, Clone)]
pub struct VqeOutcome {
    pub record: CircuitRecord,
    pub best_restart: usize,
    pub traces: Vec<OptimizationTrace>,
}

/// Index of the lowest energy; ties keep the earliest restart.
pub fn select_best(energies: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &e) in energies.iter().enumerate() {
        if best.is_none_or(|b| e < energies[b]) {
            best = Some(i);
        }
    }
    best
}

/// Optimises `spec` against `h` from `config.restarts` seeded starting points
/// and keeps the lowest-energy result.
pub fn vqe_optimize(
    label: u8,
    h: &PauliSum,
    spec: &AnsatzSpec,
    config: &VqeConfig,
    seed: u64,
) -> Result<VqeOutcome> {
    if spec.n_qubits != h.n_qubits() {
        return Err(Error::DimensionMismatch { expected: spec.n_qubits, found: h.n_qubits() });
    }
    if config.restarts == 0 {
        return Err(Error::LengthMismatch(0, 1));
    }
    let circuit = build_ansatz(spec)?;
    let mut runs = Vec::with_capacity(config.restarts);
    for r in 0..config.restarts {
        let x0 = parameter_init(spec, restart_seed(seed, r))?;
        let mut objective = |x: &[f64], g: &mut [f64]| match energy_gradient(&circuit, x, h) {
            Ok((e, grad)) => {
                g.copy_from_slice(&grad);
                e
            }
            Err(_) => f64::INFINITY,
        };
        runs.push(bfgs_minimize(&mut objective, &x0, &config.bfgs));
    }
    let energies: Vec<f64> = runs.iter().map(|r| r.1.final_value).collect();
    let best = select_best(&energies).expect("at least one restart");
    let params = runs[best].0.clone();
    let traces = runs.into_iter().map(|r| r.1).collect();
    Ok(VqeOutcome {
        record: CircuitRecord {
            label,
            family: spec.family,
            n_qubits: spec.n_qubits,
            depth: spec.depth,
            params,
            energy: energies[best],
            ground_energy: None,
        },
        best_restart: best,
        traces,
    })
}
