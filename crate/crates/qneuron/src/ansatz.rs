//! Parameterized circuit builders: rotation cycles, entangling cycles, the
//! global ansatz, the layered qubit-by-qubit ansatz with per-layer structure
//! strings, and the closed-form parameter counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simcore::{Circuit, Gate};

/// Fixed CNOT pattern of an entangling cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// One CNOT for every ordered pair (q, q') with q < q'.
    AllToAll,
    /// A linear chain: CNOT between adjacent qubits.
    NearestNeighbour,
}

impl Entangler {
    /// Short CLI name.
    pub fn as_str(&self) -> &'static str {
        match self {
            Entangler::AllToAll => "a2a",
            Entangler::NearestNeighbour => "nn",
        }
    }
}

impl std::str::FromStr for Entangler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a2a" | "all_to_all" | "all-to-all" => Ok(Entangler::AllToAll),
            "nn" | "nearest_neighbour" | "nearest-neighbour" => Ok(Entangler::NearestNeighbour),
            other => Err(Error::Parse(format!("unknown entangler '{other}'"))),
        }
    }
}

/// Shape of a variational circuit.
///
/// The global form is one rotation layer followed by `cycles` repetitions of
/// an entangling cycle plus a rotation layer, all on the full register. The
/// local form is a sequence of shrinking layers: layer j (1-based) acts on
/// qubits j-1..N-1 with its own cycle count from `structure`, and a final
/// three-parameter rotation acts on the last qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnsatzSpec {
    Global {
        n_qubits: usize,
        entangler: Entangler,
        cycles: usize,
    },
    Local {
        n_qubits: usize,
        entangler: Entangler,
        /// Cycle counts per layer; entry 0 is the layer on all N qubits and
        /// the list has N-1 entries.
        structure: Vec<usize>,
    },
}

impl AnsatzSpec {
    pub fn n_qubits(&self) -> usize {
        match self {
            AnsatzSpec::Global { n_qubits, .. } | AnsatzSpec::Local { n_qubits, .. } => *n_qubits,
        }
    }

    pub fn entangler(&self) -> Entangler {
        match self {
            AnsatzSpec::Global { entangler, .. } | AnsatzSpec::Local { entangler, .. } => {
                *entangler
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnsatzSpec::Global { n_qubits, cycles, .. } => {
                if *n_qubits == 0 {
                    return Err(Error::Argument("ansatz needs at least one qubit".into()));
                }
                if *cycles > 0 && *n_qubits < 2 {
                    return Err(Error::Argument(
                        "entangling cycles need at least two qubits".into(),
                    ));
                }
                Ok(())
            }
            AnsatzSpec::Local {
                n_qubits,
                structure,
                ..
            } => {
                if *n_qubits < 2 {
                    return Err(Error::Argument(
                        "the layered ansatz needs at least two qubits".into(),
                    ));
                }
                if structure.len() != n_qubits - 1 {
                    return Err(Error::Dimension(format!(
                        "structure has {} entries where {} layers are expected",
                        structure.len(),
                        n_qubits - 1
                    )));
                }
                Ok(())
            }
        }
    }

    /// Exact number of rotation angles the builders consume.
    ///
    /// Global: N(1+n). Local: Σ over layer sizes q = 2..N of q(1+n'_q), plus 3
    /// for the final rotation, where n'_q is the cycle count of the layer
    /// acting on q qubits.
    pub fn parameter_count(&self) -> usize {
        match self {
            AnsatzSpec::Global {
                n_qubits, cycles, ..
            } => n_qubits * (1 + cycles),
            AnsatzSpec::Local {
                n_qubits,
                structure,
                ..
            } => {
                let layered: usize = structure
                    .iter()
                    .enumerate()
                    .map(|(idx, &cycles)| {
                        let size = n_qubits - idx; // layer idx acts on N-idx qubits
                        size * (1 + cycles)
                    })
                    .sum();
                layered + 3
            }
        }
    }
}

/// One rotation about y per listed qubit, angle for angle.
pub fn rotation_cycle(angles: &[f64], qubits: &[usize]) -> Result<Vec<Gate>> {
    if angles.len() != qubits.len() {
        return Err(Error::Dimension(format!(
            "{} angles for {} qubits",
            angles.len(),
            qubits.len()
        )));
    }
    Ok(angles
        .iter()
        .zip(qubits)
        .map(|(&theta, &q)| Gate::Ry(q, theta))
        .collect())
}

/// The CNOT gates of one entangling cycle over `qubits`, in a fixed order:
/// all-to-all emits every ordered pair (outer control ascending, inner target
/// ascending), nearest-neighbour walks the chain.
pub fn entangler_cycle(scheme: Entangler, qubits: &[usize]) -> Result<Vec<Gate>> {
    if qubits.len() < 2 {
        return Err(Error::Argument(
            "an entangling cycle needs at least two qubits".into(),
        ));
    }
    let mut gates = Vec::new();
    match scheme {
        Entangler::AllToAll => {
            for i in 0..qubits.len() {
                for j in (i + 1)..qubits.len() {
                    gates.push(Gate::Cnot(qubits[i], qubits[j]));
                }
            }
        }
        Entangler::NearestNeighbour => {
            for pair in qubits.windows(2) {
                gates.push(Gate::Cnot(pair[0], pair[1]));
            }
        }
    }
    Ok(gates)
}

/// Appends a rotation layer then `cycles` repetitions of entangler + rotation
/// layer on `qubits`, consuming `(cycles+1)·qubits.len()` angles.
fn push_block(
    circuit: &mut Circuit,
    entangler: Entangler,
    qubits: &[usize],
    cycles: usize,
    params: &[f64],
) -> Result<()> {
    let width = qubits.len();
    let expected = width * (cycles + 1);
    if params.len() != expected {
        return Err(Error::Dimension(format!(
            "{} parameters where {expected} are expected",
            params.len()
        )));
    }
    let mut chunks = params.chunks(width);
    for gate in rotation_cycle(chunks.next().expect("first rotation layer"), qubits)? {
        circuit.push(gate)?;
    }
    for _ in 0..cycles {
        for gate in entangler_cycle(entangler, qubits)? {
            circuit.push(gate)?;
        }
        for gate in rotation_cycle(chunks.next().expect("cycle rotation layer"), qubits)? {
            circuit.push(gate)?;
        }
    }
    Ok(())
}

/// Builds the global ansatz circuit; `params` length must equal
/// `spec.parameter_count()`.
pub fn build_global(spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    spec.validate()?;
    let AnsatzSpec::Global {
        n_qubits,
        entangler,
        cycles,
    } = spec
    else {
        return Err(Error::Config("expected a global ansatz".into()));
    };
    if params.len() != spec.parameter_count() {
        return Err(Error::Dimension(format!(
            "{} parameters where {} are expected",
            params.len(),
            spec.parameter_count()
        )));
    }
    let qubits: Vec<usize> = (0..*n_qubits).collect();
    let mut circuit = Circuit::new(*n_qubits);
    push_block(&mut circuit, *entangler, &qubits, *cycles, params)?;
    Ok(circuit)
}

/// Builds layer `layer` (1-based, 1..=N-1) of the local ansatz: it acts on
/// qubits layer-1..N-1 and consumes `(N-layer+1)·(structure[layer-1]+1)`
/// angles. The returned circuit spans the full register.
pub fn build_local_layer(spec: &AnsatzSpec, layer: usize, params: &[f64]) -> Result<Circuit> {
    spec.validate()?;
    let AnsatzSpec::Local {
        n_qubits,
        entangler,
        structure,
    } = spec
    else {
        return Err(Error::Config("expected a local ansatz".into()));
    };
    if layer == 0 || layer > n_qubits - 1 {
        return Err(Error::Argument(format!(
            "layer {layer} out of range 1..={}",
            n_qubits - 1
        )));
    }
    let cycles = structure[layer - 1];
    let qubits: Vec<usize> = (layer - 1..*n_qubits).collect();
    let expected = qubits.len() * (cycles + 1);
    if params.len() != expected {
        return Err(Error::Dimension(format!(
            "{} parameters where {expected} are expected for layer {layer}",
            params.len()
        )));
    }
    let mut circuit = Circuit::new(*n_qubits);
    push_block(&mut circuit, *entangler, &qubits, cycles, params)?;
    Ok(circuit)
}

/// The final stage of the local ansatz: a general rotation
/// exp(-i (α,β,γ)·σ⃗/2) on `qubit`.
pub fn final_rotation_gate(qubit: usize, alpha: f64, beta: f64, gamma: f64) -> Gate {
    Gate::Rv(qubit, alpha, beta, gamma)
}

/// Composes every local layer plus the final rotation into one circuit.
pub fn build_local_full(
    spec: &AnsatzSpec,
    layer_params: &[Vec<f64>],
    final_rotation: [f64; 3],
) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n_qubits();
    if layer_params.len() != n - 1 {
        return Err(Error::Dimension(format!(
            "{} layer parameter vectors where {} are expected",
            layer_params.len(),
            n - 1
        )));
    }
    let mut circuit = Circuit::new(n);
    for (idx, params) in layer_params.iter().enumerate() {
        circuit.append(&build_local_layer(spec, idx + 1, params)?)?;
    }
    circuit.push(final_rotation_gate(
        n - 1,
        final_rotation[0],
        final_rotation[1],
        final_rotation[2],
    ))?;
    Ok(circuit)
}

/// Parses a structure string: either digits (`"321"`) or a comma list
/// (`"3,2,1"`, needed for entries above 9).
pub fn parse_structure(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty structure string".into()));
    }
    if text.contains(',') {
        text.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad structure entry '{part}'")))
            })
            .collect()
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse(format!("bad structure digit '{c}'")))
            })
            .collect()
    }
}

/// The stepwise decreasing structure [N-1, N-2, …, 1].
pub fn stepwise_structure(n_qubits: usize) -> Vec<usize> {
    (1..n_qubits).rev().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::StateVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotation_cycle_basics() {
        let gates = rotation_cycle(&[0.0, 0.0], &[0, 1]).unwrap();
        let c = Circuit::from_gates(2, gates).unwrap();
        let s = StateVector::basis(2, 2).unwrap();
        assert!(c.simulate(&s).unwrap().approx_eq(&s, 1e-12));

        let gates = rotation_cycle(&[std::f64::consts::PI], &[0]).unwrap();
        let c = Circuit::from_gates(1, gates).unwrap();
        let out = c.run_from_zero().unwrap();
        assert!((out.basis_probability(1).unwrap() - 1.0).abs() < 1e-12);

        let gates = rotation_cycle(&[std::f64::consts::FRAC_PI_2], &[0]).unwrap();
        let c = Circuit::from_gates(1, gates).unwrap();
        let out = c.run_from_zero().unwrap();
        assert!((out.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((out.amplitudes()[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        assert!(rotation_cycle(&[0.0], &[0, 1]).is_err());
    }

    #[test]
    fn entangler_gate_counts_and_depths() {
        let nn = entangler_cycle(Entangler::NearestNeighbour, &[0, 1, 2, 3]).unwrap();
        assert_eq!(nn.len(), 3);
        assert_eq!(Circuit::from_gates(4, nn).unwrap().depth(), 3);

        let a2a = entangler_cycle(Entangler::AllToAll, &[0, 1, 2, 3]).unwrap();
        assert_eq!(a2a.len(), 6);

        let single = entangler_cycle(Entangler::NearestNeighbour, &[0, 1]).unwrap();
        assert_eq!(single, vec![Gate::Cnot(0, 1)]);

        assert!(entangler_cycle(Entangler::AllToAll, &[0]).is_err());
    }

    #[test]
    fn global_parameter_counts() {
        let spec = AnsatzSpec::Global {
            n_qubits: 4,
            entangler: Entangler::AllToAll,
            cycles: 3,
        };
        assert_eq!(spec.parameter_count(), 16);

        let spec = AnsatzSpec::Global {
            n_qubits: 3,
            entangler: Entangler::NearestNeighbour,
            cycles: 0,
        };
        assert_eq!(spec.parameter_count(), 3);
        let c = build_global(&spec, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn zero_angles_leave_pure_cnot_cascade() {
        let spec = AnsatzSpec::Global {
            n_qubits: 3,
            entangler: Entangler::NearestNeighbour,
            cycles: 2,
        };
        let params = vec![0.0; spec.parameter_count()];
        let ansatz = build_global(&spec, &params).unwrap();

        let mut cascade = Circuit::new(3);
        for _ in 0..2 {
            for g in entangler_cycle(Entangler::NearestNeighbour, &[0, 1, 2]).unwrap() {
                cascade.push(g).unwrap();
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let idx = rng.random_range(0..8);
            let s = StateVector::basis(3, idx).unwrap();
            assert!(ansatz
                .simulate(&s)
                .unwrap()
                .approx_eq(&cascade.simulate(&s).unwrap(), 1e-12));
        }
    }

    #[test]
    fn local_layer_parameter_counts() {
        let spec = AnsatzSpec::Local {
            n_qubits: 4,
            entangler: Entangler::NearestNeighbour,
            structure: vec![2, 1, 1],
        };
        // Layer 1 on 4 qubits with 2 cycles: 12 angles.
        assert!(build_local_layer(&spec, 1, &[0.0; 12]).is_ok());
        assert!(build_local_layer(&spec, 1, &[0.0; 11]).is_err());
        // Layer 3 on 2 qubits with 1 cycle: 4 angles.
        assert!(build_local_layer(&spec, 3, &[0.0; 4]).is_ok());
        assert!(build_local_layer(&spec, 4, &[0.0; 4]).is_err());

        let zero_cycles = AnsatzSpec::Local {
            n_qubits: 4,
            entangler: Entangler::NearestNeighbour,
            structure: vec![0, 0, 0],
        };
        let layer = build_local_layer(&zero_cycles, 2, &[0.0; 3]).unwrap();
        assert_eq!(layer.len(), 3);
        assert!(layer.gates().iter().all(|g| matches!(g, Gate::Ry(_, _))));
    }

    #[test]
    fn zero_angle_local_layer_acts_as_entangler_cascade() {
        let spec = AnsatzSpec::Local {
            n_qubits: 4,
            entangler: Entangler::NearestNeighbour,
            structure: vec![1, 2, 1],
        };
        let layer = build_local_layer(&spec, 2, &[0.0; 9]).unwrap();
        let mut cascade = Circuit::new(4);
        for _ in 0..2 {
            for g in entangler_cycle(Entangler::NearestNeighbour, &[1, 2, 3]).unwrap() {
                cascade.push(g).unwrap();
            }
        }
        for idx in 0..16 {
            let s = StateVector::basis(4, idx).unwrap();
            assert!(layer
                .simulate(&s)
                .unwrap()
                .approx_eq(&cascade.simulate(&s).unwrap(), 1e-12));
        }
    }

    #[test]
    fn local_parameter_count_formula() {
        let stepwise = AnsatzSpec::Local {
            n_qubits: 4,
            entangler: Entangler::NearestNeighbour,
            structure: vec![3, 2, 1],
        };
        assert_eq!(stepwise.parameter_count(), 32); // 16 + 9 + 4 + 3

        let flat = AnsatzSpec::Local {
            n_qubits: 4,
            entangler: Entangler::NearestNeighbour,
            structure: vec![0, 0, 0],
        };
        assert_eq!(flat.parameter_count(), 12); // (4 + 3 + 2) + 3
    }

    #[test]
    fn builders_consume_exactly_the_declared_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in 2..=7usize {
            for cycles in 0..=6usize {
                let spec = AnsatzSpec::Global {
                    n_qubits: n,
                    entangler: Entangler::AllToAll,
                    cycles,
                };
                let count = spec.parameter_count();
                let params: Vec<f64> = (0..count).map(|_| rng.random::<f64>()).collect();
                assert!(build_global(&spec, &params).is_ok());
                let mut too_many = params.clone();
                too_many.push(0.0);
                assert!(build_global(&spec, &too_many).is_err());
            }
            let structure: Vec<usize> = (0..n - 1).map(|_| rng.random_range(0..=6)).collect();
            let spec = AnsatzSpec::Local {
                n_qubits: n,
                entangler: Entangler::NearestNeighbour,
                structure: structure.clone(),
            };
            let per_layer: Vec<Vec<f64>> = (0..n - 1)
                .map(|idx| vec![0.3; (n - idx) * (1 + structure[idx])])
                .collect();
            let total: usize = per_layer.iter().map(Vec::len).sum::<usize>() + 3;
            assert_eq!(spec.parameter_count(), total);
            assert!(build_local_full(&spec, &per_layer, [0.1, 0.2, 0.3]).is_ok());
        }
    }

    #[test]
    fn parameter_growth_matches_closed_forms() {
        // Stepwise local count is Σ_{q=2}^N q² + 3; global with n = N-1 is N².
        for n in 4..=7usize {
            let local = AnsatzSpec::Local {
                n_qubits: n,
                entangler: Entangler::NearestNeighbour,
                structure: stepwise_structure(n),
            };
            let sum_of_squares: usize = (2..=n).map(|q| q * q).sum();
            assert_eq!(local.parameter_count(), sum_of_squares + 3);

            let global = AnsatzSpec::Global {
                n_qubits: n,
                entangler: Entangler::NearestNeighbour,
                cycles: n - 1,
            };
            assert_eq!(global.parameter_count(), n * n);
        }
    }

    #[test]
    fn final_rotation_examples() {
        let s = StateVector::zero(1).unwrap();
        let id = s.apply_gate(&final_rotation_gate(0, 0.0, 0.0, 0.0)).unwrap();
        assert!(id.approx_eq(&s, 1e-15));

        let flipped = s
            .apply_gate(&final_rotation_gate(0, 0.0, std::f64::consts::PI, 0.0))
            .unwrap();
        assert!((flipped.basis_probability(1).unwrap() - 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let g = final_rotation_gate(
                0,
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            );
            let out = s.apply_gate(&g).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn built_circuits_preserve_norm_for_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = AnsatzSpec::Global {
            n_qubits: 4,
            entangler: Entangler::AllToAll,
            cycles: 3,
        };
        for _ in 0..25 {
            let params: Vec<f64> = (0..spec.parameter_count())
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            let out = build_global(&spec, &params)
                .unwrap()
                .run_from_zero()
                .unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn structure_parsing() {
        assert_eq!(parse_structure("321").unwrap(), vec![3, 2, 1]);
        assert_eq!(parse_structure("3,2,1").unwrap(), vec![3, 2, 1]);
        assert_eq!(parse_structure("12,3").unwrap(), vec![12, 3]);
        assert!(parse_structure("3x1").is_err());
        assert!(parse_structure("").is_err());
        assert_eq!(stepwise_structure(5), vec![4, 3, 2, 1]);
    }
}
