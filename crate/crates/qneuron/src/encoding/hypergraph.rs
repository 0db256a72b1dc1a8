//! Exact preparation circuits for phase-encoded patterns.
//!
//! A pattern state |ψ_b⟩ = (1/√m) Σ_j b_j |j⟩ is a hypergraph state: it is
//! reachable from |+⟩^⊗N by multi-controlled-Z gates over qubit subsets
//! (hyperedges). The generation routine scans basis indices by Hamming weight
//! and places a C^P Z on the qubits of every index whose sign still needs a
//! flip, updating all indices that contain those qubits.
//!
//! The plain routine fixes every sign except the global one: when b_0 = -1 the
//! produced state is -|ψ_b⟩. In that case the circuit is built for -b and a
//! four-gate identity ZXZX = -1 on qubit 0 restores the exact amplitudes, so
//! preparation is exact (all amplitudes real, no residual phase) for every
//! pattern.

use crate::encoding::pattern::BinaryPattern;
use crate::simcore::{Circuit, Gate};

/// The gate plan for preparing or un-preparing one pattern state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergraphCircuitPlan {
    /// Qubit subsets receiving a multi-controlled Z, in placement order.
    pub hyperedges: Vec<Vec<usize>>,
    /// Prefix the circuit with H on every qubit (input preparation).
    pub includes_initial_hadamards: bool,
    /// Suffix the circuit with H then X on every qubit (weight unitary).
    pub includes_final_h_and_x: bool,
    /// Append the ZXZX = -1 gadget on qubit 0 (patterns with b_0 = -1).
    pub negate_global_phase: bool,
}

/// Qubits in state |1⟩ for basis index `j` of an `n`-qubit register.
fn qubits_of_index(j: usize, n_qubits: usize) -> Vec<usize> {
    (0..n_qubits)
        .filter(|&q| j & (1 << (n_qubits - 1 - q)) != 0)
        .collect()
}

/// Runs the sign-flip selection on `pattern` (assumed to start with +1) and
/// returns the hyperedges in placement order: Hamming weight P ascending from
/// 1 to N, basis index ascending within each weight.
fn sign_flip_edges(pattern: &BinaryPattern) -> Vec<Vec<usize>> {
    let m = pattern.len();
    let n = pattern.n_qubits();
    let mut work: Vec<i8> = pattern.entries().to_vec();
    let mut edges = Vec::new();
    for weight in 1..=n {
        for j in 0..m {
            if j.count_ones() as usize == weight && work[j] == -1 {
                edges.push(qubits_of_index(j, n));
                // A C^P Z on these qubits flips every index containing them.
                for (k, w) in work.iter_mut().enumerate() {
                    if k & j == j {
                        *w = -*w;
                    }
                }
            }
        }
    }
    debug_assert!(work.iter().all(|&w| w == 1));
    edges
}

impl HypergraphCircuitPlan {
    /// Plan for U_i: H wall, then the sign-fixing gates for `pattern`.
    pub fn for_input(pattern: &BinaryPattern) -> Self {
        let negate = pattern.get(0) == -1;
        let base = if negate { pattern.negated() } else { pattern.clone() };
        HypergraphCircuitPlan {
            hyperedges: sign_flip_edges(&base),
            includes_initial_hadamards: true,
            includes_final_h_and_x: false,
            negate_global_phase: negate,
        }
    }

    /// Plan for U_w: the sign-fixing gates for `pattern` (no H wall), then
    /// parallel H and X layers. Maps |ψ_w⟩ to |1…1⟩ exactly.
    pub fn for_weight(pattern: &BinaryPattern) -> Self {
        let negate = pattern.get(0) == -1;
        let base = if negate { pattern.negated() } else { pattern.clone() };
        HypergraphCircuitPlan {
            hyperedges: sign_flip_edges(&base),
            includes_initial_hadamards: false,
            includes_final_h_and_x: true,
            negate_global_phase: negate,
        }
    }

    /// Realizes the plan as a circuit on `n_qubits`.
    pub fn to_circuit(&self, n_qubits: usize) -> Circuit {
        let n = n_qubits;
        let mut c = Circuit::new(n);
        if self.includes_initial_hadamards {
            for q in 0..n {
                c.push(Gate::H(q)).expect("valid qubit");
            }
        }
        for edge in &self.hyperedges {
            let gate = if edge.len() == 1 {
                Gate::Z(edge[0])
            } else {
                Gate::Mcz(edge.clone())
            };
            c.push(gate).expect("valid edge");
        }
        if self.negate_global_phase {
            for gate in [Gate::X(0), Gate::Z(0), Gate::X(0), Gate::Z(0)] {
                c.push(gate).expect("valid qubit");
            }
        }
        if self.includes_final_h_and_x {
            for q in 0..n {
                c.push(Gate::H(q)).expect("valid qubit");
            }
            for q in 0..n {
                c.push(Gate::X(q)).expect("valid qubit");
            }
        }
        c
    }
}

/// Circuit preparing |ψ_p⟩ from |0…0⟩: U_i with U_i|0…0⟩ = encode(p).
pub fn build_ui_circuit(pattern: &BinaryPattern) -> Circuit {
    HypergraphCircuitPlan::for_input(pattern).to_circuit(pattern.n_qubits())
}

/// Circuit mapping |ψ_w⟩ to |1…1⟩: the weight unitary U_w.
pub fn build_uw_circuit(pattern: &BinaryPattern) -> Circuit {
    HypergraphCircuitPlan::for_weight(pattern).to_circuit(pattern.n_qubits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pattern(rng: &mut ChaCha8Rng, m: usize) -> BinaryPattern {
        BinaryPattern::new((0..m).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
            .unwrap()
    }

    #[test]
    fn all_plus_pattern_is_hadamards_only() {
        let p = BinaryPattern::from_label(0, 8).unwrap();
        let c = build_ui_circuit(&p);
        assert_eq!(c.len(), 3);
        assert!(c.gates().iter().all(|g| matches!(g, Gate::H(_))));
    }

    #[test]
    fn single_minus_at_last_index_needs_one_full_mcz() {
        let p = BinaryPattern::from_label(1, 16).unwrap();
        let c = build_ui_circuit(&p);
        assert_eq!(c.len(), 5);
        assert_eq!(c.gates()[4], Gate::Mcz(vec![0, 1, 2, 3]));
        let out = c.run_from_zero().unwrap();
        assert!(out.approx_eq(&p.encode(), 1e-10));
    }

    #[test]
    fn cross_pattern_prepares_exactly() {
        let p = BinaryPattern::from_label(20032, 16).unwrap();
        let out = build_ui_circuit(&p).run_from_zero().unwrap();
        assert!(out.approx_eq(&p.encode(), 1e-10));
    }

    #[test]
    fn preparation_matches_encoding_for_random_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=4usize {
            for _ in 0..200 {
                let p = random_pattern(&mut rng, 1 << n);
                let out = build_ui_circuit(&p).run_from_zero().unwrap();
                assert!(out.approx_eq(&p.encode(), 1e-10), "pattern {}", p.to_line());
                assert!(out.amplitudes().iter().all(|a| a.im.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn all_plus_weight_unitary_is_h_then_x() {
        let w = BinaryPattern::from_label(0, 4).unwrap();
        let c = build_uw_circuit(&w);
        assert_eq!(c.len(), 4);
        let out = c.simulate(&w.encode()).unwrap();
        assert!((out.basis_probability(3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weight_unitary_sends_its_own_state_to_all_ones() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 2..=5usize {
            for _ in 0..200 {
                let w = random_pattern(&mut rng, 1 << n);
                let out = build_uw_circuit(&w).simulate(&w.encode()).unwrap();
                let p = out.basis_probability((1 << n) - 1).unwrap();
                assert!(p >= 1.0 - 1e-10, "pattern {} gave {p}", w.to_line());
            }
        }
    }

    #[test]
    fn overlap_appears_in_last_amplitude() {
        // Exhaustive at N=2, random at N=3 and N=4.
        for ki in 0..16u64 {
            for kw in 0..16u64 {
                let i = BinaryPattern::from_label(ki, 4).unwrap();
                let w = BinaryPattern::from_label(kw, 4).unwrap();
                let mut c = build_ui_circuit(&i);
                c.append(&build_uw_circuit(&w)).unwrap();
                let out = c.run_from_zero().unwrap();
                let expected = i.dot(&w).unwrap() as f64 / 4.0;
                let amp = out.amplitudes()[3];
                assert!((amp.re - expected).abs() < 1e-10 && amp.im.abs() < 1e-10);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for n in 3..=4usize {
            let m = 1usize << n;
            for _ in 0..100 {
                let i = random_pattern(&mut rng, m);
                let w = random_pattern(&mut rng, m);
                let mut c = build_ui_circuit(&i);
                c.append(&build_uw_circuit(&w)).unwrap();
                let out = c.run_from_zero().unwrap();
                let expected = i.dot(&w).unwrap() as f64 / m as f64;
                let amp = out.amplitudes()[m - 1];
                assert!((amp.re - expected).abs() < 1e-10 && amp.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn plan_has_no_duplicate_edges() {
        let p = BinaryPattern::from_label(20032, 16).unwrap();
        let plan = HypergraphCircuitPlan::for_weight(&p);
        let mut seen = plan.hyperedges.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), plan.hyperedges.len());
        assert!(plan.hyperedges.iter().all(|e| !e.is_empty()));
    }
}
