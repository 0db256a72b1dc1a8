//! Simulator and training toolkit for binary-valued quantum artificial
//! neurons.
//!
//! A classical ±1 vector of length m = 2^N is stored in the sign pattern of an
//! equal-weight N-qubit superposition (a hypergraph state). The neuron
//! computes the squared normalized inner product between an input vector and a
//! weight vector: an input-encoding unitary prepares |ψ_i⟩, a weight unitary
//! U_w rotates |ψ_w⟩ onto |1…1⟩, and the activation probability is read off
//! the |1…1⟩ component, optionally through an ancilla synapse.
//!
//! The crate provides:
//!
//! - [`simcore`]: dense statevector simulation, a gate set, circuit depth
//!   accounting and seeded measurement sampling;
//! - [`encoding`]: pattern ↔ label conversions, exact hypergraph-state
//!   preparation circuits for U_i and U_w, and an ancilla-free decomposition
//!   of multi-controlled gates into CNOTs and single-qubit rotations;
//! - [`neuron`]: classical reference activation and circuit-based activation,
//!   with exact or variationally trained weight unitaries;
//! - [`ansatz`]: hardware-efficient variational circuits (rotation cycles,
//!   all-to-all or nearest-neighbour entanglers, global and layered local
//!   forms) and their parameter-count formulas;
//! - [`training`]: global and qubit-by-qubit unsampling costs, exact and
//!   shot-sampled estimators, Nelder-Mead and SPSA optimizers;
//! - [`experiments`]: reproducible experiment runners emitting CSV tables and
//!   JSON metadata, driven by the `qneuron` command-line tool.

pub mod ansatz;
pub mod encoding;
pub mod error;
pub mod experiments;
pub mod neuron;
pub mod simcore;
pub mod training;

pub use error::{Error, Result};
