use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit {qubit} is outside 1..={n_qubits}")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} appears twice in one operand list")]
    DuplicateQubit(usize),
    #[error("fermionic mode {mode} is outside 1..={n_modes}")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("unsupported qubit count {0}")]
    InvalidQubitCount(usize),
    #[error("label {label} is not available at {n_qubits} qubits")]
    InvalidLabel { label: u8, n_qubits: usize },
    #[error("depth {0} is outside the supported range")]
    InvalidDepth(usize),
    #[error("the Hamiltonian ansatz needs a source Hamiltonian")]
    MissingHamiltonian,
    #[error("parameter slot {slot} is unbound (parameter vector has {len} entries)")]
    UnboundParameter { slot: usize, len: usize },
    #[error("expected {expected} parameters, got {found}")]
    ParameterLength { expected: usize, found: usize },
    #[error("gate {0} carries a symbolic parameter but has no generator")]
    NotDifferentiable(&'static str),
    #[error("parameter slot {0} is never referenced by a gate")]
    UnusedSlot(usize),
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("cannot form {k} clusters from {m} points")]
    InvalidClusterCount { k: usize, m: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("distance entry ({row}, {col}) breaks symmetry, the zero diagonal or the [0, 1] range")]
    InvalidDistance { row: usize, col: usize },
    #[error("unknown ansatz family {0:?}")]
    UnknownFamily(alloc::string::String),
    #[error("malformed Pauli term on line {line}: {reason}")]
    PauliText { line: usize, reason: &'static str },
}
