//! Core algorithms for building and analysing datasets of VQE-optimised
//! quantum circuits.
//!
//! Everything in this crate is a pure function of its inputs and only needs
//! `alloc`: Pauli-operator algebra and the Jordan-Wigner mapping, the labelled
//! model Hamiltonians, dense and Lanczos spectra, a statevector simulator with
//! adjoint gradients, the ten ansatz families, a BFGS optimiser, and the
//! fidelity-distance clustering toolkit (k-medoids, adjusted Rand index,
//! classical MDS).
//!
//! File formats, the command line and parallel orchestration live in the
//! `vqeset` companion crate.

#![no_std]
// Dense linear algebra below is written with explicit index loops.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod analysis;
pub mod ansatz;
mod error;
pub mod fermion;
pub mod hamiltonian;
pub mod linalg;
mod math;
pub mod optimize;
pub mod pauli;
pub mod record;
pub mod seed;
pub mod spectrum;
pub mod statevector;
pub mod vqe;

pub use error::Error;

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
