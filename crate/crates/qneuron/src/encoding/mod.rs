//! Classical ±1 vectors ↔ hypergraph states: amplitude encoding, exact
//! preparation circuits for the input and weight unitaries, and ancilla-free
//! multi-controlled gate decomposition.

mod hypergraph;
mod mcz;
mod pattern;

pub use hypergraph::{build_ui_circuit, build_uw_circuit, HypergraphCircuitPlan};
pub use mcz::{decompose_mcz, expand_to_decomposed, MAX_MCZ_SIZE};
pub use pattern::{parse_pattern_file, BinaryPattern};
