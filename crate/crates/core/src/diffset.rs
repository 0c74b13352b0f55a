//! Perfect difference lists: `m` distinct integers whose nonzero pairwise
//! differences are exactly `±1, ±2, …, ±m(m−1)/2`, each once.
//!
//! Such a list, read as generator eigenvalues, would give `m(m−1)/2`
//! Fourier frequencies with no degeneracy away from zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::WavenumberProfile;

/// A strictly increasing integer list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct CandidateList(Vec<i64>);

impl CandidateList {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("candidate list is empty"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("{values:?} is not strictly increasing")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn translate(&self, c: i64) -> Self {
        Self(self.0.iter().map(|v| v + c).collect())
    }

    /// `{−v : v ∈ L}`, re-sorted.
    pub fn reflect(&self) -> Self {
        Self(self.0.iter().rev().map(|v| -v).collect())
    }

    /// Translated to start at 0, then the lexicographically smaller of the
    /// list and its reflection.
    pub fn canonical(&self) -> Self {
        let shifted = self.translate(-self.0[0]);
        let reflected = shifted.reflect();
        let reflected = reflected.translate(-reflected.0[0]);
        shifted.min(reflected)
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }
}

impl TryFrom<Vec<i64>> for CandidateList {
    type Error = Error;

    fn try_from(values: Vec<i64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<CandidateList> for Vec<i64> {
    fn from(list: CandidateList) -> Self {
        list.0
    }
}

impl fmt::Display for CandidateList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Every ordered-pair difference `x − y` with its multiplicity.
pub fn difference_multiset(list: &CandidateList) -> WavenumberProfile {
    let mut entries = BTreeMap::new();
    for x in list.values() {
        for y in list.values() {
            *entries.entry(x - y).or_insert(0) += 1;
        }
    }
    WavenumberProfile::from_entries(entries)
}

/// `m(m−1)/2`, the largest difference a perfect list of length `m` has.
pub fn required_span(m: usize) -> i64 {
    (m * m.saturating_sub(1) / 2) as i64
}

pub fn is_perfect(list: &CandidateList) -> bool {
    let span = required_span(list.len());
    let profile = difference_multiset(list);
    profile.entries().len() == 2 * span as usize + 1
        && profile.entries().iter().all(|(&k, &d)| k == 0 || (k.abs() <= span && d == 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub m: usize,
    pub max_element: i64,
    pub solutions: Vec<CandidateList>,
    /// Partial lists visited, including the root `[0]`.
    pub nodes_explored: u64,
}

/// All canonical perfect lists of length `m` with elements in
/// `[0, max_element]`, sorted.
///
/// Depth-first over increasing lists rooted at 0. A branch is cut as soon as
/// a new element repeats a difference already present or creates one larger
/// than `m(m−1)/2`.
pub fn search_perfect(m: usize, max_element: i64) -> Result<SearchOutcome> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let span = required_span(m);
    if max_element < span {
        return Err(Error::invalid(format!(
            "max_element {max_element} is below {span} = m(m-1)/2, the largest difference a perfect list of length {m} needs"
        )));
    }
    let mut search = Search {
        m,
        limit: span,
        used: vec![false; span as usize + 1],
        current: vec![0],
        solutions: Vec::new(),
        nodes: 1,
    };
    search.extend();
    let mut solutions = search.solutions;
    solutions.sort();
    Ok(SearchOutcome { m, max_element, solutions, nodes_explored: search.nodes })
}

struct Search {
    m: usize,
    /// Largest element worth trying; equals the required span.
    limit: i64,
    used: Vec<bool>,
    current: Vec<i64>,
    solutions: Vec<CandidateList>,
    nodes: u64,
}

impl Search {
    fn extend(&mut self) {
        if self.current.len() == self.m {
            // m(m−1)/2 distinct differences in 1..=span cover the range
            let list = CandidateList(self.current.clone());
            if list.is_canonical() {
                self.solutions.push(list);
            }
            return;
        }
        let last = *self.current.last().expect("root");
        for next in last + 1..=self.limit {
            let diffs: Vec<usize> = self.current.iter().map(|&v| (next - v) as usize).collect();
            let mut seen = diffs.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != diffs.len() || diffs.iter().any(|&d| self.used[d]) {
                continue;
            }
            self.nodes += 1;
            for &d in &diffs {
                self.used[d] = true;
            }
            self.current.push(next);
            self.extend();
            self.current.pop();
            for &d in &diffs {
                self.used[d] = false;
            }
        }
    }
}

/// Finds nonnegative integer weights `w_q`, one per qubit, such that `values`
/// equals the diagonal of `½ Σ_q w_q σ_z^{(q)}` up to a constant shift, i.e.
/// the list is reachable with one `RZ(w_q x)` per qubit. Returns the
/// weights in ascending order, or `None` when no assignment exists.
///
/// Up to the shift, the diagonal is the multiset of subset sums of the
/// weights, so the check enumerates sign patterns for each weight vector.
pub fn rz_sum_weights(values: &[i64], n_qubits: usize) -> Option<Vec<i64>> {
    if n_qubits == 0 || n_qubits > 16 || values.len() != 1usize << n_qubits {
        return None;
    }
    let min = *values.iter().min()?;
    let mut target: Vec<i64> = values.iter().map(|v| v - min).collect();
    target.sort_unstable();
    let span = *target.last()?;

    let mut weights = vec![0i64; n_qubits];
    loop {
        if weights.iter().sum::<i64>() == span {
            let mut sums: Vec<i64> = (0..1usize << n_qubits)
                .map(|b| (0..n_qubits).filter(|q| b >> q & 1 == 1).map(|q| weights[q]).sum())
                .collect();
            sums.sort_unstable();
            if sums == target {
                return Some(weights);
            }
        }
        // next nondecreasing weight vector with entries in 0..=span
        let mut i = n_qubits;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if weights[i] < span {
                let v = weights[i] + 1;
                for w in &mut weights[i..] {
                    *w = v;
                }
                break;
            }
        }
    }
}
