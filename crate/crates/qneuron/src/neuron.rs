//! The binary-valued artificial neuron: classical reference activation and
//! circuit-based activation through an exact or variationally trained weight
//! unitary, with an optional ancilla readout.

use crate::ansatz::{build_global, build_local_full, AnsatzSpec};
use crate::encoding::{build_ui_circuit, build_uw_circuit, BinaryPattern};
use crate::error::{Error, Result};
use crate::simcore::{Circuit, Gate, StateVector};

/// How the weight unitary is realized.
#[derive(Clone, Debug)]
pub enum UwImplementation {
    /// Exact hypergraph-state construction.
    ExactHypergraph,
    /// Trained global ansatz.
    VariationalGlobal { spec: AnsatzSpec, params: Vec<f64> },
    /// Trained layered ansatz plus final rotation.
    VariationalLocal {
        spec: AnsatzSpec,
        layer_params: Vec<Vec<f64>>,
        final_rotation: [f64; 3],
    },
}

/// A fully specified neuron: weights plus the chosen weight-unitary
/// implementation. `ancilla_mode` enables the ancilla-synapse readout.
#[derive(Clone, Debug)]
pub struct NeuronConfig {
    weights: BinaryPattern,
    uw: UwImplementation,
    ancilla_mode: bool,
}

impl NeuronConfig {
    /// Validates that trained parameter lengths match the ansatz counts.
    pub fn new(weights: BinaryPattern, uw: UwImplementation, ancilla_mode: bool) -> Result<Self> {
        let n = weights.n_qubits();
        match &uw {
            UwImplementation::ExactHypergraph => {}
            UwImplementation::VariationalGlobal { spec, params } => {
                if spec.n_qubits() != n {
                    return Err(Error::Config(format!(
                        "ansatz on {} qubits for {n}-qubit weights",
                        spec.n_qubits()
                    )));
                }
                if params.len() != spec.parameter_count() {
                    return Err(Error::Config(format!(
                        "{} trained parameters where the ansatz takes {}",
                        params.len(),
                        spec.parameter_count()
                    )));
                }
            }
            UwImplementation::VariationalLocal {
                spec, layer_params, ..
            } => {
                if spec.n_qubits() != n {
                    return Err(Error::Config(format!(
                        "ansatz on {} qubits for {n}-qubit weights",
                        spec.n_qubits()
                    )));
                }
                let total: usize = layer_params.iter().map(Vec::len).sum::<usize>() + 3;
                if total != spec.parameter_count() {
                    return Err(Error::Config(format!(
                        "{total} trained parameters where the ansatz takes {}",
                        spec.parameter_count()
                    )));
                }
            }
        }
        Ok(NeuronConfig {
            weights,
            uw,
            ancilla_mode,
        })
    }

    pub fn exact(weights: BinaryPattern) -> Self {
        NeuronConfig {
            weights,
            uw: UwImplementation::ExactHypergraph,
            ancilla_mode: false,
        }
    }

    pub fn with_ancilla(mut self) -> Self {
        self.ancilla_mode = true;
        self
    }

    pub fn weights(&self) -> &BinaryPattern {
        &self.weights
    }

    /// The circuit realizing this neuron's weight unitary.
    pub fn uw_circuit(&self) -> Result<Circuit> {
        match &self.uw {
            UwImplementation::ExactHypergraph => Ok(build_uw_circuit(&self.weights)),
            UwImplementation::VariationalGlobal { spec, params } => build_global(spec, params),
            UwImplementation::VariationalLocal {
                spec,
                layer_params,
                final_rotation,
            } => build_local_full(spec, layer_params, *final_rotation),
        }
    }
}

/// The exact activation probability (i⃗·w⃗ / m)², the classical oracle every
/// circuit implementation is checked against.
pub fn classical_activation_probability(
    input: &BinaryPattern,
    weights: &BinaryPattern,
) -> Result<f64> {
    let dot = input.dot(weights)? as f64;
    let m = input.len() as f64;
    Ok((dot / m) * (dot / m))
}

/// Activation probability read from the register: the |1…1⟩ component of
/// U_w applied to the encoded input.
pub fn circuit_activation_probability(input: &BinaryPattern, cfg: &NeuronConfig) -> Result<f64> {
    if input.len() != cfg.weights.len() {
        return Err(Error::Dimension(format!(
            "input of {} entries against weights of {}",
            input.len(),
            cfg.weights.len()
        )));
    }
    let state = cfg.uw_circuit()?.simulate(&input.encode())?;
    state.basis_probability(input.len() - 1)
}

/// The full neuron circuit on N+1 qubits: input preparation, weight unitary,
/// then a multi-controlled NOT writing the |1…1⟩ component onto the ancilla
/// (qubit N).
pub fn ancilla_circuit(input: &BinaryPattern, cfg: &NeuronConfig) -> Result<Circuit> {
    let n = input.n_qubits();
    let mut circuit = build_ui_circuit(input).embedded(n + 1)?;
    circuit.append(&cfg.uw_circuit()?.embedded(n + 1)?)?;
    circuit.push(Gate::Mcx((0..n).collect(), n))?;
    Ok(circuit)
}

/// Exact probability of finding the ancilla in |1⟩, before any sampling.
pub fn ancilla_activation_expectation(input: &BinaryPattern, cfg: &NeuronConfig) -> Result<f64> {
    if !cfg.ancilla_mode {
        return Err(Error::Config("ancilla mode is not enabled".into()));
    }
    let n = input.n_qubits();
    let state = ancilla_circuit(input, cfg)?.simulate(&StateVector::zero(n + 1)?)?;
    state.marginal_one_probability(n)
}

/// Shot-based estimate of the activation probability from ancilla
/// measurements: count(ancilla = 1) / shots.
pub fn ancilla_activation(
    input: &BinaryPattern,
    cfg: &NeuronConfig,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    if !cfg.ancilla_mode {
        return Err(Error::Config("ancilla mode is not enabled".into()));
    }
    let n = input.n_qubits();
    let state = ancilla_circuit(input, cfg)?.simulate(&StateVector::zero(n + 1)?)?;
    let counts = state.sample_counts(shots, seed)?;
    // The ancilla is the least significant bit of the basis index.
    let ones: u64 = counts
        .iter()
        .filter(|(idx, _)| *idx & 1 != 0)
        .map(|(_, c)| c)
        .sum();
    Ok(ones as f64 / shots as f64)
}

/// Thresholded output: +1 when the activation reaches `threshold`, else -1.
pub fn threshold_output(activation: f64, threshold: f64) -> i8 {
    if activation >= threshold {
        1
    } else {
        -1
    }
}
