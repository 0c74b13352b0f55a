use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arch::{ArchitectureSpec, ParamVector};
use crate::error::{Error, Result};

/// Coefficients smaller than this have no meaningful phase.
pub const PHASE_FLOOR: f64 = 1e-9;

/// Reconstruction tolerance used to detect aliasing.
const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Phase in `(-π, π]`, or `None` when `|c| < PHASE_FLOOR`.
pub fn phase_of(c: Complex64) -> Option<f64> {
    if c.norm() < PHASE_FLOOR {
        return None;
    }
    let phi = c.arg();
    Some(if phi <= -PI { PI } else { phi })
}

/// Complex coefficients `c_k` for `k ∈ [-k_max, k_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    k_max: usize,
    sample_count: usize,
    coefficients: Vec<Complex64>,
}

impl FourierSpectrum {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    /// `c_k`, zero outside the stored range.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.k_max {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients[(k + self.k_max as i64) as usize]
    }

    pub fn amplitude(&self, k: i64) -> f64 {
        self.coefficient(k).norm()
    }

    pub fn phase(&self, k: i64) -> Option<f64> {
        phase_of(self.coefficient(k))
    }

    /// `(k, c_k)` pairs in ascending `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let offset = self.k_max as i64;
        self.coefficients.iter().enumerate().map(move |(i, &c)| (i as i64 - offset, c))
    }

    /// Real part of `Σ_k c_k e^{ikx}`.
    pub fn reconstruct(&self, x: f64) -> f64 {
        self.iter().map(|(k, c)| (c * Complex64::from_polar(1.0, k as f64 * x)).re).sum()
    }

    /// Largest `|c_{-k} − conj(c_k)|`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        (1..=self.k_max as i64)
            .map(|k| (self.coefficient(-k) - self.coefficient(k).conj()).norm())
            .fold(self.coefficient(0).im.abs(), f64::max)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "re", "im", "amplitude", "phase"])?;
        for (k, c) in self.iter() {
            w.write_record([
                k.to_string(),
                c.re.to_string(),
                c.im.to_string(),
                c.norm().to_string(),
                phase_of(c).map(|p| p.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Extracts `c_k, |k| ≤ k_max` from `2·k_max + 1` uniform samples of a
/// `2π`-periodic model.
pub fn extract_fourier<F: Fn(f64) -> f64>(model: F, k_max: usize) -> Result<FourierSpectrum> {
    extract_fourier_with(model, k_max, 2 * k_max + 1)
}

/// As [`extract_fourier`] with an explicit sample count `N ≥ 2·k_max + 1`.
///
/// The truncated series is checked against the model at the sample points
/// and at the midpoints between them; a mismatch above 1e-9 means `k_max`
/// is below the model's bandwidth and is reported as [`Error::Aliasing`].
pub fn extract_fourier_with<F: Fn(f64) -> f64>(
    model: F,
    k_max: usize,
    samples: usize,
) -> Result<FourierSpectrum> {
    if samples < 2 * k_max + 1 {
        return Err(Error::invalid(format!(
            "{samples} samples cannot resolve k_max = {k_max}; need at least {}",
            2 * k_max + 1
        )));
    }
    let step = TAU / samples as f64;
    let values: Vec<f64> = (0..samples).map(|j| model(j as f64 * step)).collect();

    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(samples).process(&mut buf);
    let scale = 1.0 / samples as f64;
    let coefficients = (-(k_max as i64)..=k_max as i64)
        .map(|k| buf[k.rem_euclid(samples as i64) as usize] * scale)
        .collect();
    let spectrum = FourierSpectrum { k_max, sample_count: samples, coefficients };

    let mut residual = 0.0f64;
    for (j, &v) in values.iter().enumerate() {
        let x = j as f64 * step;
        residual = residual.max((spectrum.reconstruct(x) - v).abs());
        let mid = x + step / 2.0;
        residual = residual.max((spectrum.reconstruct(mid) - model(mid)).abs());
    }
    if residual > RECONSTRUCTION_TOL {
        return Err(Error::Aliasing { k_max, residual });
    }
    Ok(spectrum)
}

/// Spectrum of a circuit model up to the spec's largest predicted wavenumber.
pub fn model_spectrum(spec: &ArchitectureSpec, params: &ParamVector) -> Result<FourierSpectrum> {
    // validates the parameter length once so the closure cannot fail
    spec.evaluate(params, 0.0)?;
    let k_max = spec.max_wavenumber() as usize;
    extract_fourier(|x| spec.evaluate(params, x).expect("validated parameters"), k_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine() {
        let s = extract_fourier(f64::cos, 3).unwrap();
        assert!((s.coefficient(1) - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!((s.coefficient(-1) - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        for k in [-3, -2, 0, 2, 3] {
            assert!(s.amplitude(k) < 1e-12, "k={k}");
        }
        assert_eq!(s.sample_count(), 7);
    }

    #[test]
    fn constant() {
        let s = extract_fourier(|_| 0.25, 2).unwrap();
        assert!((s.coefficient(0) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!(s.iter().filter(|&(k, _)| k != 0).all(|(_, c)| c.norm() < 1e-15));
    }

    #[test]
    fn sine_sign_convention() {
        // sin x = (e^{ix} − e^{−ix}) / 2i  ⇒  c_1 = −i/2
        let s = extract_fourier(f64::sin, 1).unwrap();
        assert!((s.coefficient(1) - Complex64::new(0.0, -0.5)).norm() < 1e-12);
        assert!((s.phase(1).unwrap() + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn aliasing_is_reported() {
        let err = extract_fourier(|x| (3.0 * x).cos(), 2).unwrap_err();
        assert!(matches!(err, Error::Aliasing { k_max: 2, .. }));
        let err = extract_fourier_with(|x| (3.0 * x).cos(), 2, 12).unwrap_err();
        assert!(matches!(err, Error::Aliasing { .. }));
        assert!(extract_fourier_with(f64::cos, 2, 4).is_err());
    }

    #[test]
    fn oversampling_agrees() {
        let f = |x: f64| 0.3 + (2.0 * x + 0.4).cos() - 0.2 * (x).sin();
        let a = extract_fourier(f, 3).unwrap();
        let b = extract_fourier_with(f, 3, 32).unwrap();
        for k in -3..=3 {
            assert!((a.coefficient(k) - b.coefficient(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_range_and_floor() {
        assert_eq!(phase_of(Complex64::new(-1.0, -0.0)), Some(PI));
        assert_eq!(phase_of(Complex64::new(-1.0, 0.0)), Some(PI));
        assert_eq!(phase_of(Complex64::new(1e-10, 0.0)), None);
    }

    #[test]
    fn spectrum_csv_leaves_undefined_phase_empty() {
        let s = extract_fourier(f64::cos, 1).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,re,im,amplitude,phase");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0,") && lines[2].ends_with(','));
    }
}
