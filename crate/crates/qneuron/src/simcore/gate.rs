//! Gate set and its action on dense amplitude arrays.
//!
//! Qubit 0 is the most significant bit of a basis index: the basis state
//! |q0 q1 … q_{N-1}⟩ has index Σ_k q_k · 2^{N-1-k}, so |j⟩ is labeled by the
//! decimal value of the bit string read left to right. Every module in this
//! crate shares this convention.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bit mask selecting qubit `q` inside an `n`-qubit basis index.
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// A quantum gate acting on named qubits of a register.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Hadamard.
    H(usize),
    /// Pauli X.
    X(usize),
    /// Pauli Z.
    Z(usize),
    /// Rotation about y: exp(-i θ σ_y / 2).
    Ry(usize, f64),
    /// Phase gate diag(1, e^{iθ}).
    Phase(usize, f64),
    /// Rotation about an arbitrary axis: exp(-i v⃗·σ⃗ / 2) with v⃗ = (x, y, z).
    /// The rotation angle is |v⃗| and the axis is v⃗/|v⃗|.
    Rv(usize, f64, f64, f64),
    /// Controlled NOT: (control, target).
    Cnot(usize, usize),
    /// Controlled Z; symmetric in its two qubits.
    Cz(usize, usize),
    /// Multi-controlled Z on the listed qubits: flips the sign of every basis
    /// state in which all listed qubits are 1. One qubit gives a plain Z.
    Mcz(Vec<usize>),
    /// Multi-controlled X: (controls, target).
    Mcx(Vec<usize>, usize),
}

impl Gate {
    /// All qubits the gate acts on, in declaration order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Ry(q, _) | Gate::Phase(q, _) => vec![*q],
            Gate::Rv(q, _, _, _) => vec![*q],
            Gate::Cnot(c, t) => vec![*c, *t],
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Mcz(qs) => qs.clone(),
            Gate::Mcx(cs, t) => {
                let mut qs = cs.clone();
                qs.push(*t);
                qs
            }
        }
    }

    /// Checks that qubit indices are distinct and fit an `n_qubits` register.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        if qs.is_empty() {
            return Err(Error::Argument("gate acts on no qubits".into()));
        }
        for &q in &qs {
            if q >= n_qubits {
                return Err(Error::Index(format!(
                    "qubit {q} out of range for {n_qubits}-qubit register"
                )));
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::Index(format!("duplicate qubit indices in {self:?}")));
        }
        Ok(())
    }

    /// The inverse gate.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Ry(q, theta) => Gate::Ry(*q, -theta),
            Gate::Phase(q, theta) => Gate::Phase(*q, -theta),
            Gate::Rv(q, x, y, z) => Gate::Rv(*q, -x, -y, -z),
            // H, X, Z, CNOT, CZ, MCZ, MCX are self-inverse.
            other => other.clone(),
        }
    }

    /// 2x2 matrix of a single-qubit gate, row major; `None` for multi-qubit kinds.
    fn single_qubit_matrix(&self) -> Option<[Complex64; 4]> {
        let re = |x: f64| Complex64::new(x, 0.0);
        match self {
            Gate::H(_) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Some([re(s), re(s), re(s), re(-s)])
            }
            Gate::X(_) => Some([re(0.0), re(1.0), re(1.0), re(0.0)]),
            Gate::Z(_) => Some([re(1.0), re(0.0), re(0.0), re(-1.0)]),
            Gate::Ry(_, theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                Some([re(c), re(-s), re(s), re(c)])
            }
            Gate::Phase(_, theta) => Some([
                re(1.0),
                re(0.0),
                re(0.0),
                Complex64::from_polar(1.0, *theta),
            ]),
            Gate::Rv(_, x, y, z) => {
                let angle = (x * x + y * y + z * z).sqrt();
                if angle == 0.0 {
                    return Some([re(1.0), re(0.0), re(0.0), re(1.0)]);
                }
                let (s, c) = (angle / 2.0).sin_cos();
                let (nx, ny, nz) = (x / angle, y / angle, z / angle);
                // cos(angle/2) I - i sin(angle/2) n⃗·σ⃗
                Some([
                    Complex64::new(c, -s * nz),
                    Complex64::new(-s * ny, -s * nx),
                    Complex64::new(s * ny, -s * nx),
                    Complex64::new(c, s * nz),
                ])
            }
            _ => None,
        }
    }

    /// Applies the gate in place to the amplitudes of an `n_qubits` register.
    ///
    /// Indices are assumed valid (checked at circuit construction).
    pub(crate) fn apply_to(&self, amps: &mut [Complex64], n_qubits: usize) {
        if let Some(m) = self.single_qubit_matrix() {
            let q = self.qubits()[0];
            let mask = qubit_mask(n_qubits, q);
            for idx in 0..amps.len() {
                if idx & mask == 0 {
                    let partner = idx | mask;
                    let a0 = amps[idx];
                    let a1 = amps[partner];
                    amps[idx] = m[0] * a0 + m[1] * a1;
                    amps[partner] = m[2] * a0 + m[3] * a1;
                }
            }
            return;
        }
        match self {
            Gate::Cnot(c, t) => {
                let cm = qubit_mask(n_qubits, *c);
                let tm = qubit_mask(n_qubits, *t);
                for idx in 0..amps.len() {
                    if idx & cm != 0 && idx & tm == 0 {
                        amps.swap(idx, idx | tm);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = qubit_mask(n_qubits, *a) | qubit_mask(n_qubits, *b);
                for (idx, amp) in amps.iter_mut().enumerate() {
                    if idx & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Mcz(qs) => {
                let mask = qs
                    .iter()
                    .fold(0usize, |m, &q| m | qubit_mask(n_qubits, q));
                for (idx, amp) in amps.iter_mut().enumerate() {
                    if idx & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Mcx(cs, t) => {
                let cm = cs
                    .iter()
                    .fold(0usize, |m, &q| m | qubit_mask(n_qubits, q));
                let tm = qubit_mask(n_qubits, *t);
                for idx in 0..amps.len() {
                    if idx & cm == cm && idx & tm == 0 {
                        amps.swap(idx, idx | tm);
                    }
                }
            }
            _ => unreachable!("single-qubit kinds handled above"),
        }
    }
}
