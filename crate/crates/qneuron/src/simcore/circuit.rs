//! Ordered gate lists with simulation and a deterministic depth metric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::simcore::gate::Gate;
use crate::simcore::state::StateVector;

/// An ordered list of gates on an `n_qubits` register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after validating its qubit indices.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must act on the same register size.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// The same gate list viewed as a circuit on a larger register; qubit
    /// indices are unchanged.
    pub fn embedded(&self, n_total: usize) -> Result<Circuit> {
        if n_total < self.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot embed {} qubits into {}",
                self.n_qubits, n_total
            )));
        }
        Ok(Circuit {
            n_qubits: n_total,
            gates: self.gates.clone(),
        })
    }

    /// The inverse circuit: adjoint gates in reverse order.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Number of parallel gate layers under greedy as-soon-as-possible
    /// scheduling: each gate lands on layer 1 + max(layer of any earlier gate
    /// sharing a qubit). Gates on disjoint qubit sets may share a layer.
    pub fn depth(&self) -> usize {
        let mut qubit_layer = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let layer = 1 + gate
                .qubits()
                .iter()
                .map(|&q| qubit_layer[q])
                .max()
                .unwrap_or(0);
            for q in gate.qubits() {
                qubit_layer[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Applies the gates in list order to `input` and returns the final state.
    pub fn simulate(&self, input: &StateVector) -> Result<StateVector> {
        if input.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "circuit on {} qubits applied to a {}-qubit state",
                self.n_qubits,
                input.n_qubits()
            )));
        }
        let mut amps = input.amplitudes().to_vec();
        for gate in &self.gates {
            gate.apply_to(&mut amps, self.n_qubits);
        }
        // Amplitudes stay normalized because every gate is unitary; re-wrap
        // without renormalizing so drift is observable in tests.
        Ok(StateVector::from_amplitudes(amps).expect("unitary evolution preserves the norm"))
    }

    /// Runs the circuit on |0…0⟩.
    pub fn run_from_zero(&self) -> Result<StateVector> {
        self.simulate(&StateVector::zero(self.n_qubits)?)
    }

    /// Dense 2^N × 2^N matrix of the whole circuit (column j is the image of
    /// |j⟩). Exponential in N; intended for verification at small sizes.
    pub fn dense_matrix(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut columns = Vec::with_capacity(dim);
        for j in 0..dim {
            let basis = StateVector::basis(self.n_qubits, j).expect("valid basis index");
            let out = self.simulate(&basis).expect("matching sizes");
            columns.push(out.amplitudes().to_vec());
        }
        // Transpose column images into row-major storage.
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                rows[i][j] = *v;
            }
        }
        rows
    }
}
