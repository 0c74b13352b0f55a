//! Monte Carlo picture of which Fourier coefficients an architecture can
//! reach: draw random parameters many times and tabulate `|c_k|`, `arg c_k`.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fourier::model_spectrum;
use crate::arch::ArchitectureSpec;
use crate::error::{Error, Result};

/// Grid resolution per phase axis for occupancy statistics.
pub const OCCUPANCY_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccessibilityRow {
    pub realization: usize,
    pub k: i64,
    pub amplitude: f64,
    /// `None` when the coefficient is below the phase floor.
    pub phase: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairOccupancy {
    pub k_i: i64,
    pub k_j: i64,
    pub occupancy: f64,
}

/// Rows ordered by realization, then ascending positive `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessibilityTable {
    k_max: usize,
    rows: Vec<AccessibilityRow>,
}

/// Draws `num_realizations` parameter vectors uniformly from `[0, 2π)` and
/// records amplitude and phase of every positive-`k` coefficient.
///
/// Realization `r` uses its own ChaCha stream `(seed, r)`, so the table does
/// not depend on how the work is scheduled across threads.
pub fn accessibility_sample(
    spec: &ArchitectureSpec,
    num_realizations: usize,
    seed: u64,
) -> Result<AccessibilityTable> {
    if num_realizations == 0 {
        return Err(Error::invalid("num_realizations must be at least 1"));
    }
    let k_max = spec.max_wavenumber() as usize;
    let per_realization: Vec<Vec<AccessibilityRow>> = (0..num_realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let params = spec.random_params(&mut rng);
            let spectrum = model_spectrum(spec, &params)?;
            Ok((1..=k_max as i64)
                .map(|k| AccessibilityRow {
                    realization: r,
                    k,
                    amplitude: spectrum.amplitude(k),
                    phase: spectrum.phase(k),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(AccessibilityTable { k_max, rows: per_realization.into_iter().flatten().collect() })
}

fn phase_bin(phi: f64, bins: usize) -> usize {
    (((phi + PI) / TAU * bins as f64) as usize).min(bins - 1)
}

impl AccessibilityTable {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn rows(&self) -> &[AccessibilityRow] {
        &self.rows
    }

    pub fn num_realizations(&self) -> usize {
        if self.k_max == 0 {
            0
        } else {
            self.rows.len() / self.k_max
        }
    }

    fn realizations(&self) -> impl Iterator<Item = &[AccessibilityRow]> {
        self.rows.chunks_exact(self.k_max.max(1))
    }

    /// Fraction of the `bins × bins` cells of the `(arg c_i, arg c_j)` plane
    /// hit by at least one realization. Realizations where either phase is
    /// undefined are skipped.
    pub fn pair_occupancy(&self, k_i: i64, k_j: i64, bins: usize) -> Result<f64> {
        self.check_k(k_i)?;
        self.check_k(k_j)?;
        if bins == 0 {
            return Err(Error::invalid("bins must be positive"));
        }
        let mut hit = vec![false; bins * bins];
        for rows in self.realizations() {
            if let (Some(a), Some(b)) = (rows[k_i as usize - 1].phase, rows[k_j as usize - 1].phase) {
                hit[phase_bin(a, bins) * bins + phase_bin(b, bins)] = true;
            }
        }
        Ok(hit.iter().filter(|&&h| h).count() as f64 / (bins * bins) as f64)
    }

    /// Occupancy for every pair `k_i < k_j` of positive wavenumbers.
    pub fn all_pair_occupancies(&self, bins: usize) -> Result<Vec<PairOccupancy>> {
        let mut out = Vec::new();
        for k_i in 1..=self.k_max as i64 {
            for k_j in k_i + 1..=self.k_max as i64 {
                out.push(PairOccupancy { k_i, k_j, occupancy: self.pair_occupancy(k_i, k_j, bins)? });
            }
        }
        Ok(out)
    }

    /// Fraction of `bins` equal slices of `[0, 2π)` hit by the combined
    /// phase `Σ w_k · arg c_k (mod 2π)`. A low value exposes a linear
    /// relation between phases that no two-dimensional projection shows.
    pub fn linear_phase_occupancy(&self, weights: &[(i64, i64)], bins: usize) -> Result<f64> {
        for &(k, _) in weights {
            self.check_k(k)?;
        }
        if bins == 0 {
            return Err(Error::invalid("bins must be positive"));
        }
        let mut hit = vec![false; bins];
        for rows in self.realizations() {
            let combined: Option<f64> = weights
                .iter()
                .map(|&(k, w)| rows[k as usize - 1].phase.map(|p| w as f64 * p))
                .sum();
            if let Some(v) = combined {
                let bin = ((v.rem_euclid(TAU) / TAU * bins as f64) as usize).min(bins - 1);
                hit[bin] = true;
            }
        }
        Ok(hit.iter().filter(|&&h| h).count() as f64 / bins as f64)
    }

    fn check_k(&self, k: i64) -> Result<()> {
        if k < 1 || k as usize > self.k_max {
            return Err(Error::invalid(format!("wavenumber {k} outside 1..={}", self.k_max)));
        }
        Ok(())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["realization", "k", "amplitude", "phase"])?;
        for row in &self.rows {
            w.write_record([
                row.realization.to_string(),
                row.k.to_string(),
                row.amplitude.to_string(),
                row.phase.map(|p| p.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
