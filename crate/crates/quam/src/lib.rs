//! Associative memory on a simulated quantum register.
//!
//! A set of m distinct n-bit patterns is stored as an equal superposition of
//! basis states, so n qubits hold up to 2ⁿ patterns. A partial pattern (a
//! query with wildcard positions) is completed by amplitude amplification
//! adapted to the sparse start: a priming double-reflection aligns the
//! phases of the non-target states, then the usual flip-and-diffuse rounds
//! run for a closed-form optimal count. The [`analysis`] module carries that
//! closed-form accuracy model, and [`hopfield`] provides the classical
//! baseline the memory's capacity is compared against.
//!
//! The `quam` binary exposes storage, recall, theory reports, iteration
//! sweeps, and the Hopfield comparison; see the crate README.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod gates;
pub mod hopfield;
pub mod recall;
pub mod state;
pub mod storage;

pub use error::{Error, Result};
pub use gates::{GateMatrix, MarkSet};
pub use state::{BasisPattern, ControlSpec, QuantumState, Query};
pub use storage::PatternSet;
