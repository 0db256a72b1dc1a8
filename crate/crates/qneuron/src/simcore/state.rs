//! Dense state vectors, probabilities and measurement sampling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simcore::gate::{qubit_mask, Gate};

/// An exact quantum register state: 2^N complex amplitudes with unit norm.
///
/// Values are immutable from the caller's perspective; gate application
/// returns a new state. Basis indices follow the crate-wide convention that
/// qubit 0 is the most significant bit.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Memory guard: 2^24 amplitudes is the largest register we allocate.
pub const MAX_QUBITS: usize = 24;

impl StateVector {
    /// The blank state |0…0⟩ on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// The computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Size(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Index(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Builds a state from explicit amplitudes; the length must be a power of
    /// two and the norm must be 1 within 1e-6.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "amplitude count {dim} is not a power of two ≥ 2"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::Size(format!("register of {n_qubits} qubits exceeds the guard")));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Domain(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns the state after applying a single gate.
    pub fn apply_gate(&self, gate: &Gate) -> Result<StateVector> {
        gate.validate(self.n_qubits)?;
        let mut next = self.clone();
        gate.apply_to(&mut next.amps, self.n_qubits);
        Ok(next)
    }

    /// ⟨self|other⟩ = Σ_j conj(self_j)·other_j.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "inner product between {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|amplitudes[index]|²`, clamped into [0, 1] (rounding can push the
    /// squared magnitude a few ulps past 1).
    pub fn basis_probability(&self, index: usize) -> Result<f64> {
        self.amps
            .get(index)
            .map(|a| a.norm_sqr().min(1.0))
            .ok_or_else(|| {
                Error::Index(format!(
                    "basis index {index} out of range for dimension {}",
                    self.dim()
                ))
            })
    }

    /// Probability that a computational-basis measurement of `qubit` yields 1,
    /// the ⟨1|ρ|1⟩ element of the single-qubit reduced density matrix.
    pub fn marginal_one_probability(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::Index(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let mask = qubit_mask(self.n_qubits, qubit);
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(p.min(1.0))
    }

    /// Draws `shots` basis-state samples from |amplitudes|² and returns the
    /// histogram. Deterministic for a fixed `(state, shots, seed)` triple:
    /// the generator is ChaCha8 seeded with `seed`, one uniform draw per shot
    /// resolved by binary search over the cumulative distribution.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        if shots == 0 {
            return Err(Error::Argument("shots must be ≥ 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.dim());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        let last = self.dim() - 1;
        for _ in 0..shots {
            let u: f64 = rng.random();
            let idx = cumulative.partition_point(|&c| c <= u).min(last);
            *counts.entry(idx).or_insert(0u64) += 1;
        }
        Ok(counts)
    }

    /// Amplitude-wise comparison within `tol`.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_examples() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);

        let s = StateVector::zero(2).unwrap();
        assert_eq!(s.dim(), 4);
        assert!((s.basis_probability(0).unwrap() - 1.0).abs() < 1e-15);

        let s = StateVector::zero(4).unwrap();
        assert_eq!(s.dim(), 16);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(s.amplitudes().iter().skip(1).all(|a| a.norm() == 0.0));
    }

    #[test]
    fn zero_state_size_guard() {
        assert!(StateVector::zero(0).is_err());
        assert!(StateVector::zero(25).is_err());
        assert!(StateVector::zero(24).is_ok());
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::zero(1).unwrap().apply_gate(&Gate::H(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn inner_product_examples() {
        let s0 = StateVector::basis(1, 0).unwrap();
        let s1 = StateVector::basis(1, 1).unwrap();
        assert_eq!(s0.inner_product(&s1).unwrap(), Complex64::new(0.0, 0.0));
        assert!((s0.inner_product(&s0).unwrap().re - 1.0).abs() < 1e-15);
        assert!(s0.inner_product(&StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn inner_product_of_encoded_patterns_is_the_normalized_dot_product() {
        // i = (1,1,1,1), w = (1,1,1,-1): i·w/m = 2/4.
        let i = crate::encoding::BinaryPattern::new(vec![1, 1, 1, 1]).unwrap();
        let w = crate::encoding::BinaryPattern::new(vec![1, 1, 1, -1]).unwrap();
        let overlap = i.encode().inner_product(&w.encode()).unwrap();
        let oracle = i.dot(&w).unwrap() as f64 / i.len() as f64;
        assert!((overlap.re - 0.5).abs() < 1e-15 && overlap.im == 0.0);
        assert!((overlap.re - oracle).abs() < 1e-15);
    }

    #[test]
    fn basis_probability_uniform_superposition() {
        let mut s = StateVector::zero(2).unwrap();
        for q in 0..2 {
            s = s.apply_gate(&Gate::H(q)).unwrap();
        }
        assert!((s.basis_probability(3).unwrap() - 0.25).abs() < 1e-15);
        assert!(s.basis_probability(4).is_err());
    }

    #[test]
    fn marginal_product_state_and_plus_states() {
        // |1⟩⊗|0⟩: qubit 0 certainly 1.
        let s = StateVector::basis(2, 0b10).unwrap();
        assert!((s.marginal_one_probability(0).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.marginal_one_probability(1).unwrap() - 0.0).abs() < 1e-15);

        let mut p = StateVector::zero(3).unwrap();
        for q in 0..3 {
            p = p.apply_gate(&Gate::H(q)).unwrap();
        }
        for q in 0..3 {
            assert!((p.marginal_one_probability(q).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(p.marginal_one_probability(3).is_err());
    }

    #[test]
    fn bell_state_marginal_matches_partial_trace() {
        let bell = StateVector::zero(2)
            .unwrap()
            .apply_gate(&Gate::H(0))
            .unwrap()
            .apply_gate(&Gate::Cnot(0, 1))
            .unwrap();
        // Independent oracle: 4x4 density matrix, explicit partial trace over
        // qubit 0, then the ⟨1|ρ_B|1⟩ element.
        let a = bell.amplitudes();
        let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = a[i] * a[j].conj();
            }
        }
        // Tracing out qubit 0 (most significant bit) keeps blocks (0,1) and (2,3).
        let mut rho_b = [[Complex64::new(0.0, 0.0); 2]; 2];
        for block in 0..2 {
            for r in 0..2 {
                for c in 0..2 {
                    rho_b[r][c] += rho[2 * block + r][2 * block + c];
                }
            }
        }
        let oracle = rho_b[1][1].re;
        assert!((oracle - 0.5).abs() < 1e-12);
        assert!((bell.marginal_one_probability(1).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn sampling_deterministic_state() {
        let s = StateVector::basis(2, 0b11).unwrap();
        let counts = s.sample_counts(100, 1).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[&3], 100);
    }

    #[test]
    fn sampling_plus_state_within_three_sigma() {
        let s = StateVector::zero(1).unwrap().apply_gate(&Gate::H(0)).unwrap();
        let shots = 1_000_000;
        let counts = s.sample_counts(shots, 42).unwrap();
        let f = counts[&1] as f64 / shots as f64;
        assert!((0.4985..=0.5015).contains(&f), "frequency {f}");
        assert_eq!(counts.values().sum::<u64>(), shots);
    }

    #[test]
    fn sampling_identical_for_same_seed() {
        let s = StateVector::zero(3)
            .unwrap()
            .apply_gate(&Gate::H(0))
            .unwrap()
            .apply_gate(&Gate::H(2))
            .unwrap();
        let a = s.sample_counts(5000, 7).unwrap();
        let b = s.sample_counts(5000, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_shots_rejected() {
        let s = StateVector::zero(1).unwrap();
        assert!(s.sample_counts(0, 0).is_err());
    }

    #[test]
    fn probabilities_never_exceed_one() {
        // Two Hadamards round the amplitude to 1.0000000000000002; the
        // probability must still be reported inside [0, 1].
        let s = StateVector::zero(3)
            .unwrap()
            .apply_gate(&Gate::H(1))
            .unwrap()
            .apply_gate(&Gate::H(1))
            .unwrap();
        let p = s.basis_probability(0).unwrap();
        assert!(p <= 1.0 && p > 1.0 - 1e-12, "p = {p}");
        assert!(s.marginal_one_probability(1).unwrap() <= 1.0);
    }
}
