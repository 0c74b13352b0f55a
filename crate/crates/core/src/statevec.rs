//! Dense statevector simulation for a few qubits.
//!
//! Bit-order convention: qubit `q` is bit `q` of the basis-state index, so
//! qubit 0 is the least significant bit. A ket written `|q1 q0⟩` has index
//! `2*q1 + q0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on register size.
pub const MAX_QUBITS: usize = 24;

/// Single- and two-qubit gates understood by the simulator.
///
/// Rotations follow `R_P(θ) = exp(-i θ P / 2)`. `Rot { angles: [α, β, γ] }`
/// is `RZ(γ)·RY(β)·RZ(α)`, i.e. `RZ(α)` hits the state first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rz { target: usize, angle: f64 },
    Ry { target: usize, angle: f64 },
    Rx { target: usize, angle: f64 },
    Rot { target: usize, angles: [f64; 3] },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn target(&self) -> usize {
        match *self {
            Gate::Rz { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rx { target, .. }
            | Gate::Rot { target, .. }
            | Gate::Cnot { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Cnot { control, .. } => Some(control),
            _ => None,
        }
    }

    /// The gate undoing `self`.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rz { target, angle } => Gate::Rz { target, angle: -angle },
            Gate::Ry { target, angle } => Gate::Ry { target, angle: -angle },
            Gate::Rx { target, angle } => Gate::Rx { target, angle: -angle },
            Gate::Rot { target, angles: [a, b, g] } => Gate::Rot {
                target,
                angles: [-g, -b, -a],
            },
            cnot @ Gate::Cnot { .. } => cnot,
        }
    }

    /// 2×2 matrix (row-major) of a single-qubit gate; `None` for CNOT.
    pub fn matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        match *self {
            Gate::Rz { angle, .. } => Some(rz_matrix(angle)),
            Gate::Ry { angle, .. } => Some(ry_matrix(angle)),
            Gate::Rx { angle, .. } => Some(rx_matrix(angle)),
            Gate::Rot { angles: [a, b, g], .. } => {
                Some(matmul(&rz_matrix(g), &matmul(&ry_matrix(b), &rz_matrix(a))))
            }
            Gate::Cnot { .. } => None,
        }
    }
}

pub fn rz_matrix(angle: f64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -angle / 2.0), zero],
        [zero, Complex64::from_polar(1.0, angle / 2.0)],
    ]
}

pub fn ry_matrix(angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rx_matrix(angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

fn matmul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new_zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    /// Computational basis state with the given index.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps raw amplitudes. The length must be a power of two and the
    /// vector must be normalized to within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!("{n_qubits} qubits exceeds {MAX_QUBITS}")));
        }
        let state = Self { n_qubits, amplitudes };
        if (state.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("state norm {} is not 1", state.norm())));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range for {}-qubit state",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Value-in/value-out gate application.
    pub fn apply(mut self, gate: &Gate) -> Result<Self> {
        self.apply_in_place(gate)?;
        Ok(self)
    }

    pub fn apply_in_place(&mut self, gate: &Gate) -> Result<()> {
        self.check_qubit(gate.target())?;
        match *gate {
            Gate::Cnot { control, target } => {
                self.check_qubit(control)?;
                if control == target {
                    return Err(Error::invalid(format!(
                        "CNOT control and target coincide (qubit {target})"
                    )));
                }
                self.apply_cnot(control, target);
            }
            Gate::Rz { target, angle } => {
                // diagonal: skip the generic 2x2 kernel
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = lo.conj();
                let mask = 1usize << target;
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    *amp *= if i & mask == 0 { lo } else { hi };
                }
            }
            _ => {
                let m = gate.matrix().expect("single-qubit gate");
                self.apply_matrix(&m, gate.target());
            }
        }
        Ok(())
    }

    /// Applies an arbitrary 2×2 matrix to `target`. The caller is
    /// responsible for the matrix being unitary.
    pub fn apply_single_qubit(&mut self, m: &[[Complex64; 2]; 2], target: usize) -> Result<()> {
        self.check_qubit(target)?;
        self.apply_matrix(m, target);
        Ok(())
    }

    fn apply_matrix(&mut self, m: &[[Complex64; 2]; 2], target: usize) {
        let mask = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & mask != 0 {
                continue;
            }
            let j = i | mask;
            let a = self.amplitudes[i];
            let b = self.amplitudes[j];
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amplitudes.swap(i, i | tmask);
            }
        }
    }

    /// `⟨Z_qubit⟩ = Σ_b (±1)|ψ_b|²`, `+1` when bit `qubit` of `b` is 0.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }
}

/// Free-function form of [`StateVector::new_zero_state`].
pub fn new_zero_state(n_qubits: usize) -> Result<StateVector> {
    StateVector::new_zero_state(n_qubits)
}

/// Free-function form of [`StateVector::apply`].
pub fn apply_gate(state: StateVector, gate: &Gate) -> Result<StateVector> {
    state.apply(gate)
}

/// Free-function form of [`StateVector::expectation_z`].
pub fn expectation_z(state: &StateVector, qubit: usize) -> Result<f64> {
    state.expectation_z(qubit)
}
