//! Reference implementations used by the integration tests. Nothing here
//! calls the library's simulator, DFT, gradient or search code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use qfourier::arch::{ArchitectureSpec, ParamVector};
use qfourier::statevec::Gate;

pub type Matrix = Vec<Vec<Complex64>>;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { cx(1.0, 0.0) } else { cx(0.0, 0.0) }).collect())
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![cx(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![cx(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == cx(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn rz(t: f64) -> Matrix {
    vec![
        vec![Complex64::from_polar(1.0, -t / 2.0), cx(0.0, 0.0)],
        vec![cx(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
    ]
}

fn ry(t: f64) -> Matrix {
    let (s, c) = (t / 2.0).sin_cos();
    vec![vec![cx(c, 0.0), cx(-s, 0.0)], vec![cx(s, 0.0), cx(c, 0.0)]]
}

fn rx(t: f64) -> Matrix {
    let (s, c) = (t / 2.0).sin_cos();
    vec![vec![cx(c, 0.0), cx(0.0, -s)], vec![cx(0.0, -s), cx(c, 0.0)]]
}

/// `op` on `qubit` of an `n`-qubit register. Qubit 0 is the least
/// significant index bit, so it is the rightmost Kronecker factor.
pub fn embed(op: &Matrix, qubit: usize, n: usize) -> Matrix {
    let id = identity(2);
    let mut m = vec![vec![cx(1.0, 0.0)]];
    for q in (0..n).rev() {
        m = kron(&m, if q == qubit { op } else { &id });
    }
    m
}

pub fn gate_matrix(gate: &Gate, n: usize) -> Matrix {
    match *gate {
        Gate::Rz { target, angle } => embed(&rz(angle), target, n),
        Gate::Ry { target, angle } => embed(&ry(angle), target, n),
        Gate::Rx { target, angle } => embed(&rx(angle), target, n),
        Gate::Rot { target, angles: [a, b, g] } => {
            embed(&matmul(&rz(g), &matmul(&ry(b), &rz(a))), target, n)
        }
        Gate::Cnot { control, target } => {
            let p0 = vec![vec![cx(1.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(0.0, 0.0)]];
            let p1 = vec![vec![cx(0.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(1.0, 0.0)]];
            let x = vec![vec![cx(0.0, 0.0), cx(1.0, 0.0)], vec![cx(1.0, 0.0), cx(0.0, 0.0)]];
            add(&embed(&p0, control, n), &matmul(&embed(&p1, control, n), &embed(&x, target, n)))
        }
    }
}

pub fn apply_matrix(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// State after `gates`, starting from `|0…0⟩`, by dense matrix products.
pub fn simulate(gates: &[Gate], n: usize) -> Vec<Complex64> {
    let mut v = vec![cx(0.0, 0.0); 1 << n];
    v[0] = cx(1.0, 0.0);
    for g in gates {
        v = apply_matrix(&gate_matrix(g, n), &v);
    }
    v
}

/// `⟨ψ|Z_0|ψ⟩` with `Z_0` built as a Kronecker product.
pub fn expectation_z0(v: &[Complex64], n: usize) -> f64 {
    let z = vec![vec![cx(1.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(-1.0, 0.0)]];
    let zv = apply_matrix(&embed(&z, 0, n), v);
    v.iter().zip(&zv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
}

pub fn oracle_evaluate(spec: &ArchitectureSpec, params: &ParamVector, x: f64) -> f64 {
    let gates = spec.circuit(params, x).unwrap();
    let n = spec.n_qubits();
    expectation_z0(&simulate(&gates, n), n)
}

/// `c_k = (1/N) Σ_j f_j e^{-2πi k j / N}` by direct summation.
pub fn naive_dft(samples: &[f64], k: i64) -> Complex64 {
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(j, &f)| f * Complex64::from_polar(1.0, -TAU * k as f64 * j as f64 / n))
        .sum::<Complex64>()
        / n
}

pub fn sample_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Central-difference gradient of the MSE computed from forward evaluations.
pub fn finite_difference_gradient(
    spec: &ArchitectureSpec,
    params: &ParamVector,
    xs: &[f64],
    ys: &[f64],
    h: f64,
) -> Vec<f64> {
    let loss = |p: &ParamVector| {
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| (spec.evaluate(p, x).unwrap() - y).powi(2))
            .sum::<f64>()
            / xs.len() as f64
    };
    (0..params.len())
        .map(|j| {
            let mut plus = params.clone();
            plus.values_mut()[j] += h;
            let mut minus = params.clone();
            minus.values_mut()[j] -= h;
            (loss(&plus) - loss(&minus)) / (2.0 * h)
        })
        .collect()
}

/// Smallest MSE any real trigonometric polynomial of degree `max_k` can
/// reach on uniformly sampled targets: by discrete Parseval it is
/// `mean(y²) − Σ_{|k| ≤ max_k} |ĉ_k|²`.
pub fn best_truncated_mse(ys: &[f64], max_k: i64) -> f64 {
    let mean_sq = ys.iter().map(|y| y * y).sum::<f64>() / ys.len() as f64;
    let captured: f64 = (-max_k..=max_k).map(|k| naive_dft(ys, k).norm_sqr()).sum();
    mean_sq - captured
}

/// Perfect-list check straight from the definition.
fn perfect_by_definition(list: &[i64]) -> bool {
    let m = list.len() as i64;
    let span = m * (m - 1) / 2;
    let mut diffs = Vec::new();
    for (i, a) in list.iter().enumerate() {
        for (j, b) in list.iter().enumerate() {
            if i != j {
                diffs.push(a - b);
            }
        }
    }
    diffs.sort_unstable();
    let expected: Vec<i64> = (-span..=span).filter(|&d| d != 0).collect();
    diffs == expected
}

/// Every `m`-subset of `[0, max_element]` that contains 0, is perfect, and
/// is no larger than its own reflection. Sorted.
pub fn brute_force_perfect(m: usize, max_element: i64) -> Vec<Vec<i64>> {
    let universe = (max_element + 1) as usize;
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << universe) {
        if mask & 1 == 0 || mask.count_ones() as usize != m {
            continue;
        }
        let list: Vec<i64> = (0..universe).filter(|b| mask >> b & 1 == 1).map(|b| b as i64).collect();
        if !perfect_by_definition(&list) {
            continue;
        }
        let top = *list.last().unwrap();
        let mut reflected: Vec<i64> = list.iter().map(|v| top - v).collect();
        reflected.reverse();
        if list <= reflected {
            out.insert(list);
        }
    }
    out.into_iter().collect()
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
