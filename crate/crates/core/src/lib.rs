//! Fourier analysis and training of data re-uploading quantum circuits.
//!
//! Four encoding families are supported: sequential and parallel circuits,
//! each with either unit ("linear") or exponentially growing integer scaling
//! of the encoded feature. Everything runs on an exact dense statevector
//! simulator, so the models are small (a handful of qubits) but noise free.
//!
//! Modules:
//! - [`statevec`]: the statevector simulator.
//! - [`arch`]: circuit families and the model function `f(x, θ)`.
//! - [`spectrum`]: predicted wavenumbers, DFT extraction, accessibility statistics.
//! - [`train`]: top-hat regression with parameter-shift gradients and Adam.
//! - [`diffset`]: exhaustive search for perfect difference lists.
//! - [`cli`]: command implementations behind the `qfourier` binary.

pub mod arch;
pub mod cli;
pub mod diffset;
mod error;
pub mod spectrum;
pub mod statevec;
pub mod train;

pub use error::{Error, Result};
