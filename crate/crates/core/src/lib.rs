//! Two-photon emission of a uniformly accelerated two-level detector: exact
//! amplitudes, the resonant Z-gate state, principal-value integrals, emission
//! spectra, pathway interference, Wigner-function witnesses and a Ramsey
//! verification model.

pub mod amplitudes;
pub mod cli;
pub mod error;
pub mod interference;
pub mod output;
pub mod quadrature;
pub mod ramsey;
pub mod resonance;
pub mod selftest;
pub mod spectra;
pub mod wigner;

pub use amplitudes::{Channel, DetectorComponents, DetectorParams, Pathway, QubitState, Regularization};
pub use error::{Error, Result};
