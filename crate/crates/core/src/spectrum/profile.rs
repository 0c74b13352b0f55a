use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arch::ArchitectureSpec;
use crate::error::{Error, Result};

/// An exact multiple of ½, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub const fn from_int(v: i64) -> Self {
        Self { twice: 2 * v }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Multiplicity of each integer difference `k` of a multiset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WavenumberProfile {
    entries: BTreeMap<i64, u64>,
}

impl WavenumberProfile {
    pub fn from_entries(entries: BTreeMap<i64, u64>) -> Self {
        let entries = entries.into_iter().filter(|&(_, d)| d > 0).collect();
        Self { entries }
    }

    pub fn entries(&self) -> &BTreeMap<i64, u64> {
        &self.entries
    }

    pub fn degeneracy(&self, k: i64) -> u64 {
        self.entries.get(&k).copied().unwrap_or(0)
    }

    pub fn k_max(&self) -> u64 {
        self.entries.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    /// Sum of all degeneracies (the number of ordered pairs).
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn wavenumbers(&self) -> Vec<i64> {
        self.entries.keys().copied().collect()
    }

    /// Positive wavenumbers, i.e. the Fourier frequencies, ascending.
    pub fn frequencies(&self) -> Vec<u64> {
        self.entries.range(1..).map(|(&k, _)| k as u64).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(&k, &d)| self.degeneracy(-k) == d)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "degeneracy"])?;
        for (k, d) in &self.entries {
            w.write_record([k.to_string(), d.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Diagonal of the combined encoding generator, `½ Σ_q ±a_q` over every sign
/// pattern. Entry `b` takes `+a_q` where bit `q` of `b` is 0, matching
/// `RZ(a·x) = e^{-i a x σ_z / 2}` on qubit `q`.
///
/// Sequential circuits have the same multiset: with one qubit each encoding
/// contributes an eigenvalue `±a_l/2` along every path through the circuit.
pub fn generator_eigenvalues(spec: &ArchitectureSpec) -> Vec<HalfInteger> {
    let scales = spec.scaling_factors();
    (0..1usize << scales.len())
        .map(|b| {
            let twice = scales
                .iter()
                .enumerate()
                .map(|(q, &a)| if b >> q & 1 == 0 { a as i64 } else { -(a as i64) })
                .sum();
            HalfInteger::from_twice(twice)
        })
        .collect()
}

/// Counts ordered pairs `(λ_a, λ_b)` by their difference `λ_a − λ_b`.
pub fn wavenumber_profile(eigs: &[HalfInteger]) -> Result<WavenumberProfile> {
    if eigs.is_empty() {
        return Err(Error::invalid("eigenvalue multiset is empty"));
    }
    let mut entries = BTreeMap::new();
    for a in eigs {
        for b in eigs {
            let diff = a.twice - b.twice;
            if diff % 2 != 0 {
                return Err(Error::Consistency(format!(
                    "eigenvalues {a} and {b} differ by a non-integer"
                )));
            }
            *entries.entry(diff / 2).or_insert(0) += 1;
        }
    }
    Ok(WavenumberProfile { entries })
}

/// Profile of a spec computed as a convolution over encoding gates: each
/// gate with scale `a` contributes differences `{-a: 1, 0: 2, a: 1}`. Same
/// result as [`wavenumber_profile`] of [`generator_eigenvalues`] without the
/// `4^n` pair enumeration.
pub fn encoding_profile(spec: &ArchitectureSpec) -> WavenumberProfile {
    let mut acc: BTreeMap<i64, u64> = BTreeMap::from([(0, 1)]);
    for a in spec.scaling_factors() {
        let a = a as i64;
        let mut next = BTreeMap::new();
        for (&k, &d) in &acc {
            *next.entry(k - a).or_insert(0) += d;
            *next.entry(k).or_insert(0) += 2 * d;
            *next.entry(k + a).or_insert(0) += d;
        }
        acc = next;
    }
    WavenumberProfile { entries: acc }
}

/// Positive frequencies the spec's encoding can produce.
pub fn predicted_frequencies(spec: &ArchitectureSpec) -> Vec<u64> {
    encoding_profile(spec).frequencies()
}

/// `d^{2L}/2 − 1` for `L` encodings acting on a `d`-dimensional space.
pub fn frequency_upper_bound(d: u64, repetitions: u32) -> f64 {
    (d as f64).powi(2 * repetitions as i32) / 2.0 - 1.0
}

/// The bound evaluated for a spec: `d = 2, L = n` for sequential circuits,
/// `d = 2^n, L = 1` for parallel ones.
pub fn upper_bound_for(spec: &ArchitectureSpec) -> f64 {
    if spec.family().is_sequential() {
        frequency_upper_bound(2, spec.n() as u32)
    } else {
        frequency_upper_bound(1u64 << spec.n(), 1)
    }
}
