//! Dataset generation, analysis and reporting for VQE-optimised circuits.
//!
//! Numerics live in `vqeset-core`; this crate adds file formats, the worker
//! pool and the `vqeset` command line.

pub mod analyze;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod io;
pub mod qasm;
pub mod report;

pub use error::{Error, Result};
