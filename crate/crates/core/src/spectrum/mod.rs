//! Fourier spectra of the encoding circuits.
//!
//! Two sides meet here. The predicted side works purely from the encoding:
//! the generator's eigenvalues, their pairwise differences (wavenumbers) and
//! the multiplicity of each difference. The empirical side samples a model
//! on a uniform grid and extracts its coefficients by DFT, with the sign
//! convention `c_k = (1/N) Σ_j f(x_j) e^{-ik x_j}` so that
//! `f(x) = Σ_k c_k e^{ikx}`.

mod accessibility;
mod fourier;
mod profile;

pub use accessibility::{
    accessibility_sample, AccessibilityRow, AccessibilityTable, PairOccupancy, OCCUPANCY_BINS,
};
pub use fourier::{extract_fourier, extract_fourier_with, model_spectrum, phase_of, FourierSpectrum, PHASE_FLOOR};
pub use profile::{
    encoding_profile, frequency_upper_bound, generator_eigenvalues, predicted_frequencies,
    upper_bound_for, wavenumber_profile, HalfInteger, WavenumberProfile,
};
