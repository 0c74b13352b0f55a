//! The four circuit families and the model function `f(x, θ)`.
//!
//! Sequential circuits act on one qubit and interlace `n` encoding gates
//! `RZ(a_l·x)` with `n + 1` variational blocks. Parallel circuits act on `n`
//! qubits: one variational block, one encoding layer `RZ(𝓛_q·x)` on every
//! qubit `q`, a second variational block, then a CNOT cascade into qubit 0.
//! The model output is always `⟨Z⟩` on qubit 0.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{Gate, StateVector, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    SequentialLinear,
    SequentialExponential,
    ParallelLinear,
    ParallelExponential,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::SequentialLinear,
        Family::SequentialExponential,
        Family::ParallelLinear,
        Family::ParallelExponential,
    ];

    pub fn is_sequential(self) -> bool {
        matches!(self, Family::SequentialLinear | Family::SequentialExponential)
    }

    pub fn is_parallel(self) -> bool {
        !self.is_sequential()
    }

    pub fn is_exponential(self) -> bool {
        matches!(self, Family::SequentialExponential | Family::ParallelExponential)
    }

    /// Layers per variational block when the caller does not choose one.
    /// Parallel circuits get deeper blocks so the exponential variant has
    /// enough parameters for all of its Fourier coefficients.
    pub fn default_var_depth(self) -> usize {
        if self.is_parallel() {
            3
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SequentialLinear => "SequentialLinear",
            Family::SequentialExponential => "SequentialExponential",
            Family::ParallelLinear => "ParallelLinear",
            Family::ParallelExponential => "ParallelExponential",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown family `{s}`")))
    }
}

/// Structural description of a circuit: family, size and block depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ArchitectureSpec {
    family: Family,
    /// Encoding repetitions (sequential) or qubits (parallel).
    n: usize,
    var_depth: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: Family,
    n: usize,
    var_depth: Option<usize>,
}

impl TryFrom<RawSpec> for ArchitectureSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let depth = raw.var_depth.unwrap_or_else(|| raw.family.default_var_depth());
        ArchitectureSpec::new(raw.family, raw.n, depth)
    }
}

impl ArchitectureSpec {
    pub fn new(family: Family, n: usize, var_depth: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::invalid(format!("n must be in 1..={MAX_QUBITS}, got {n}")));
        }
        if var_depth == 0 {
            return Err(Error::invalid("var_depth must be at least 1"));
        }
        Ok(Self { family, n, var_depth })
    }

    /// Spec with the family's default block depth.
    pub fn with_default_depth(family: Family, n: usize) -> Result<Self> {
        Self::new(family, n, family.default_var_depth())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn var_depth(&self) -> usize {
        self.var_depth
    }

    /// Width of the simulated register.
    pub fn n_qubits(&self) -> usize {
        if self.family.is_sequential() {
            1
        } else {
            self.n
        }
    }

    pub fn n_blocks(&self) -> usize {
        if self.family.is_sequential() {
            self.n + 1
        } else {
            2
        }
    }

    pub fn block_param_count(&self) -> usize {
        self.var_depth * 3 * self.n_qubits()
    }

    pub fn parameter_count(&self) -> usize {
        self.n_blocks() * self.block_param_count()
    }

    /// Integer multipliers of `x` in each encoding gate.
    ///
    /// Linear families use all ones. Exponential families use
    /// `[1, 2, 4, …, 2^(n-2), 2^(n-1) + 1]`, whose signed subset sums cover
    /// every integer in `[-2^n, 2^n]`; for `n = 1` the list is `[1]`.
    pub fn scaling_factors(&self) -> Vec<u64> {
        scaling_factors(self.family, self.n)
    }

    /// Largest wavenumber the encoding can produce, `Σ a_l`.
    pub fn max_wavenumber(&self) -> u64 {
        self.scaling_factors().iter().sum()
    }

    /// Gate list for input `x`, in application order.
    pub fn circuit(&self, params: &ParamVector, x: f64) -> Result<Vec<Gate>> {
        self.check_params(params)?;
        let nq = self.n_qubits();
        let scales = self.scaling_factors();
        let mut blocks = params.values().chunks_exact(self.block_param_count());
        let mut gates = Vec::with_capacity(self.gate_count());

        push_block(&mut gates, blocks.next().expect("first block"), nq, self.var_depth);
        if self.family.is_sequential() {
            for (&a, block) in scales.iter().zip(blocks) {
                gates.push(Gate::Rz { target: 0, angle: a as f64 * x });
                push_block(&mut gates, block, 1, self.var_depth);
            }
        } else {
            for (q, &a) in scales.iter().enumerate() {
                gates.push(Gate::Rz { target: q, angle: a as f64 * x });
            }
            push_block(&mut gates, blocks.next().expect("second block"), nq, self.var_depth);
            for q in (1..nq).rev() {
                gates.push(Gate::Cnot { control: q, target: q - 1 });
            }
        }
        Ok(gates)
    }

    fn gate_count(&self) -> usize {
        let nq = self.n_qubits();
        let ring = if nq >= 2 { nq } else { 0 };
        self.n_blocks() * self.var_depth * (nq + ring) + self.n + nq.saturating_sub(1)
    }

    fn check_params(&self, params: &ParamVector) -> Result<()> {
        if params.len() != self.parameter_count() {
            return Err(Error::invalid(format!(
                "expected {} parameters for {self}, got {}",
                self.parameter_count(),
                params.len()
            )));
        }
        Ok(())
    }

    /// `f(x, θ) = ⟨Z_0⟩` of the circuit applied to `|0…0⟩`.
    pub fn evaluate(&self, params: &ParamVector, x: f64) -> Result<f64> {
        let mut state = StateVector::new_zero_state(self.n_qubits())?;
        for gate in self.circuit(params, x)? {
            state.apply_in_place(&gate)?;
        }
        state.expectation_z(0)
    }

    /// Parameters drawn uniformly from `[0, 2π)`.
    pub fn random_params<R: Rng + ?Sized>(&self, rng: &mut R) -> ParamVector {
        ParamVector::new((0..self.parameter_count()).map(|_| rng.gen_range(0.0..TAU)).collect())
    }
}

impl fmt::Display for ArchitectureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, var_depth={})", self.family, self.n, self.var_depth)
    }
}

pub fn scaling_factors(family: Family, n: usize) -> Vec<u64> {
    if !family.is_exponential() || n == 1 {
        return vec![1; n];
    }
    let mut out: Vec<u64> = (0..n - 1).map(|l| 1u64 << l).collect();
    out.push((1u64 << (n - 1)) + 1);
    out
}

pub fn parameter_count(spec: &ArchitectureSpec) -> usize {
    spec.parameter_count()
}

pub fn evaluate(spec: &ArchitectureSpec, params: &ParamVector, x: f64) -> Result<f64> {
    spec.evaluate(params, x)
}

fn push_block(gates: &mut Vec<Gate>, angles: &[f64], n_qubits: usize, var_depth: usize) {
    let mut triples = angles.chunks_exact(3);
    for _ in 0..var_depth {
        for target in 0..n_qubits {
            let t = triples.next().expect("angle count checked by caller");
            gates.push(Gate::Rot { target, angles: [t[0], t[1], t[2]] });
        }
        if n_qubits >= 2 {
            for q in 0..n_qubits {
                gates.push(Gate::Cnot { control: q, target: (q + 1) % n_qubits });
            }
        }
    }
}

/// One trainable block: per layer, `Rot` on every qubit followed by a CNOT
/// ring `q → q+1 (mod n)` when the register has two or more qubits.
/// `angles` holds `var_depth × n_qubits` triples, layer-major.
pub fn variational_block(mut state: StateVector, angles: &[f64], var_depth: usize) -> Result<StateVector> {
    let nq = state.n_qubits();
    let expected = var_depth * 3 * nq;
    if angles.len() != expected {
        return Err(Error::invalid(format!(
            "variational block on {nq} qubits with depth {var_depth} needs {expected} angles, got {}",
            angles.len()
        )));
    }
    let mut gates = Vec::new();
    push_block(&mut gates, angles, nq, var_depth);
    for g in &gates {
        state.apply_in_place(g)?;
    }
    Ok(state)
}

/// Flat parameter array, laid out block-major, then layer, then qubit, then
/// the three `Rot` angles `(α, β, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}
