//! Exact statevector simulation: gate application, inner products, marginals
//! and shot sampling. The numerical substrate for every other module.

mod circuit;
mod gate;
mod state;

pub use circuit::Circuit;
pub use gate::Gate;
pub use state::{StateVector, MAX_QUBITS};
