//! Quantum-limited precision bounds for phase and frequency estimation with
//! single-mode Gaussian probes coupled to a general Gaussian dissipative
//! reservoir (thermal, squeezed-thermal, Markovian or power-law non-Markovian).
//!
//! The crate is organized around two independent computational routes:
//!
//! * a closed-form phase-space route ([`state`], [`reservoir`], [`qfi`],
//!   [`bounds`], [`optimize`]) that propagates first and second moments
//!   through the dissipative channel and evaluates the quantum Fisher
//!   information from them, and
//! * A brute-force Fock-space route ([`fock`]) that integrates the master
//!   equation in a truncated number basis and extracts the same quantities
//!   from the density matrix, used to validate the closed forms on small
//!   instances.
//!
//! Quadrature convention: x̂ = (a + a†)/√2, p̂ = -i(a - a†)/√2, so the vacuum
//! covariance matrix is ½·I. All modules share this convention.

pub mod bounds;
pub mod error;
pub mod fock;
pub mod optimize;
pub mod qfi;
pub mod quad;
pub mod reservoir;
pub mod state;

pub use error::{Error, Result};
pub use reservoir::{ChannelAtTime, DissipationProfile, ReservoirCoeffs, ReservoirSpec};
pub use state::{GaussianState, StateParams};
