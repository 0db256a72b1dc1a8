//! Unsampling cost functions with exact and shot-sampled estimators.

use crate::ansatz::{build_global, build_local_layer, AnsatzSpec};
use crate::error::{Error, Result};
use crate::simcore::StateVector;

/// How a cost value is extracted from the simulated state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostEstimator {
    /// Read probabilities from the statevector.
    Exact,
    /// Reconstruct probabilities from `shots` seeded measurement samples.
    Shots { shots: u64, seed: u64 },
}

impl CostEstimator {
    pub fn validate(&self) -> Result<()> {
        if let CostEstimator::Shots { shots, .. } = self {
            if *shots == 0 {
                return Err(Error::Config("shot estimator needs shots ≥ 1".into()));
            }
        }
        Ok(())
    }

    /// Same estimator with a different sample seed (exact mode is unchanged).
    pub fn reseeded(&self, new_seed: u64) -> CostEstimator {
        match self {
            CostEstimator::Exact => CostEstimator::Exact,
            CostEstimator::Shots { shots, .. } => CostEstimator::Shots {
                shots: *shots,
                seed: new_seed,
            },
        }
    }

    /// Probability of the all-ones basis state under this estimator.
    fn all_ones_probability(&self, state: &StateVector) -> Result<f64> {
        let target = state.dim() - 1;
        match self {
            CostEstimator::Exact => state.basis_probability(target),
            CostEstimator::Shots { shots, seed } => {
                let counts = state.sample_counts(*shots, *seed)?;
                Ok(counts.get(&target).copied().unwrap_or(0) as f64 / *shots as f64)
            }
        }
    }

    /// Probability that `qubit` reads 1 under this estimator.
    fn marginal_probability(&self, state: &StateVector, qubit: usize) -> Result<f64> {
        match self {
            CostEstimator::Exact => state.marginal_one_probability(qubit),
            CostEstimator::Shots { shots, seed } => {
                let counts = state.sample_counts(*shots, *seed)?;
                let mask = 1usize << (state.n_qubits() - 1 - qubit);
                let ones: u64 = counts
                    .iter()
                    .filter(|(idx, _)| *idx & mask != 0)
                    .map(|(_, c)| c)
                    .sum();
                Ok(ones as f64 / *shots as f64)
            }
        }
    }
}

/// Global unsampling cost 1 - P(|1…1⟩) after applying the global ansatz with
/// `params` to `psi_w`.
pub fn global_cost(
    params: &[f64],
    spec: &AnsatzSpec,
    psi_w: &StateVector,
    estimator: &CostEstimator,
) -> Result<f64> {
    estimator.validate()?;
    let circuit = build_global(spec, params)?;
    let state = circuit.simulate(psi_w)?;
    Ok(1.0 - estimator.all_ones_probability(&state)?)
}

/// Local unsampling cost for layer `layer` (1-based): 1 - P(qubit layer-1
/// reads 1) after applying the layer to the frozen state `rho_input`.
pub fn local_cost(
    layer: usize,
    params: &[f64],
    spec: &AnsatzSpec,
    rho_input: &StateVector,
    estimator: &CostEstimator,
) -> Result<f64> {
    estimator.validate()?;
    let circuit = build_local_layer(spec, layer, params)?;
    let state = circuit.simulate(rho_input)?;
    Ok(1.0 - estimator.marginal_probability(&state, layer - 1)?)
}

/// Cost of the final single-qubit rotation stage: 1 - P(last qubit reads 1)
/// after exp(-i (α,β,γ)·σ⃗/2) on the last qubit of `rho_input`.
pub fn final_rotation_cost(
    params: &[f64],
    rho_input: &StateVector,
    estimator: &CostEstimator,
) -> Result<f64> {
    estimator.validate()?;
    if params.len() != 3 {
        return Err(Error::Dimension(format!(
            "final rotation takes 3 parameters, got {}",
            params.len()
        )));
    }
    let qubit = rho_input.n_qubits() - 1;
    let gate = crate::ansatz::final_rotation_gate(qubit, params[0], params[1], params[2]);
    let state = rho_input.apply_gate(&gate)?;
    Ok(1.0 - estimator.marginal_probability(&state, qubit)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::Entangler;
    use crate::simcore::Gate;

    fn global_spec(n: usize, cycles: usize) -> AnsatzSpec {
        AnsatzSpec::Global {
            n_qubits: n,
            entangler: Entangler::NearestNeighbour,
            cycles,
        }
    }

    #[test]
    fn identity_circuit_on_target_state_has_zero_cost() {
        let spec = global_spec(3, 0);
        let target = StateVector::basis(3, 7).unwrap();
        let cost = global_cost(&[0.0; 3], &spec, &target, &CostEstimator::Exact).unwrap();
        assert!(cost.abs() < 1e-12);
    }

    #[test]
    fn identity_circuit_on_blank_state_has_unit_cost() {
        let spec = global_spec(3, 0);
        let blank = StateVector::zero(3).unwrap();
        let cost = global_cost(&[0.0; 3], &spec, &blank, &CostEstimator::Exact).unwrap();
        assert!((cost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shot_estimator_agrees_with_exact_within_four_sigma() {
        let spec = global_spec(3, 1);
        let psi = {
            let mut c = crate::simcore::Circuit::new(3);
            c.push(Gate::H(0)).unwrap();
            c.push(Gate::Cnot(0, 1)).unwrap();
            c.push(Gate::Ry(2, 0.9)).unwrap();
            c.run_from_zero().unwrap()
        };
        let params = vec![0.3, -0.4, 1.2, 0.5, 0.1, -0.9];
        let exact = global_cost(&params, &spec, &psi, &CostEstimator::Exact).unwrap();
        let shots = 100_000u64;
        let sampled = global_cost(
            &params,
            &spec,
            &psi,
            &CostEstimator::Shots { shots, seed: 21 },
        )
        .unwrap();
        let p = 1.0 - exact;
        let sigma4 = 4.0 * (p * (1.0 - p) / shots as f64).sqrt();
        assert!((sampled - exact).abs() <= sigma4, "{sampled} vs {exact}");
    }

    #[test]
    fn local_cost_examples() {
        let spec = AnsatzSpec::Local {
            n_qubits: 3,
            entangler: Entangler::NearestNeighbour,
            structure: vec![0, 0],
        };
        // All-ones input, zero-angle rotation-only layer: already solved.
        let ones = StateVector::basis(3, 7).unwrap();
        let cost = local_cost(1, &[0.0; 3], &spec, &ones, &CostEstimator::Exact).unwrap();
        assert!(cost.abs() < 1e-12);

        // Uniform superposition: marginal of any qubit is 1/2.
        let plus = {
            let mut c = crate::simcore::Circuit::new(3);
            for q in 0..3 {
                c.push(Gate::H(q)).unwrap();
            }
            c.run_from_zero().unwrap()
        };
        let cost = local_cost(1, &[0.0; 3], &spec, &plus, &CostEstimator::Exact).unwrap();
        assert!((cost - 0.5).abs() < 1e-12);

        assert!(local_cost(3, &[0.0; 2], &spec, &plus, &CostEstimator::Exact).is_err());
    }

    #[test]
    fn local_shot_estimator_agrees_with_exact() {
        let spec = AnsatzSpec::Local {
            n_qubits: 3,
            entangler: Entangler::NearestNeighbour,
            structure: vec![1, 0],
        };
        let psi = {
            let mut c = crate::simcore::Circuit::new(3);
            c.push(Gate::Ry(0, 0.7)).unwrap();
            c.push(Gate::Cnot(0, 2)).unwrap();
            c.run_from_zero().unwrap()
        };
        let params = vec![0.2, 0.4, -0.3, 0.8, -0.1, 0.6];
        let exact = local_cost(1, &params, &spec, &psi, &CostEstimator::Exact).unwrap();
        let shots = 100_000u64;
        let sampled = local_cost(
            1,
            &params,
            &spec,
            &psi,
            &CostEstimator::Shots { shots, seed: 5 },
        )
        .unwrap();
        let p = 1.0 - exact;
        let sigma4 = 4.0 * (p * (1.0 - p) / shots as f64).sqrt();
        assert!((sampled - exact).abs() <= sigma4);
    }

    #[test]
    fn final_rotation_cost_solves_single_qubit() {
        let ones = StateVector::basis(2, 3).unwrap();
        let cost = final_rotation_cost(&[0.0, 0.0, 0.0], &ones, &CostEstimator::Exact).unwrap();
        assert!(cost.abs() < 1e-12);

        let zero_last = StateVector::basis(2, 2).unwrap();
        let cost =
            final_rotation_cost(&[0.0, std::f64::consts::PI, 0.0], &zero_last, &CostEstimator::Exact)
                .unwrap();
        assert!(cost.abs() < 1e-12);
        assert!(final_rotation_cost(&[0.0; 2], &ones, &CostEstimator::Exact).is_err());
    }

    #[test]
    fn costs_stay_in_unit_interval() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let spec = global_spec(4, 2);
        let psi = crate::encoding::BinaryPattern::from_label(20032, 16)
            .unwrap()
            .encode();
        for _ in 0..50 {
            let params: Vec<f64> = (0..spec.parameter_count())
                .map(|_| rng.random_range(-10.0..10.0))
                .collect();
            let cost = global_cost(&params, &spec, &psi, &CostEstimator::Exact).unwrap();
            assert!((0.0..=1.0).contains(&cost));
        }
    }

    #[test]
    fn zero_shots_is_a_config_error() {
        let spec = global_spec(2, 0);
        let psi = StateVector::zero(2).unwrap();
        let est = CostEstimator::Shots { shots: 0, seed: 0 };
        assert!(global_cost(&[0.0; 2], &spec, &psi, &est).is_err());
    }
}
