//! Quantum discord, classical correlations and discord asymmetry for
//! two-qubit X states.
//!
//! The physical model is a pair of spin-1/2 particles with XY coupling in an
//! inhomogeneous longitudinal field. Energies are measured in units of the
//! coupling constant and temperatures as `kT / (hbar D)`, so the only runtime
//! knobs are the field scale `omega`, the inhomogeneity `delta` and the
//! dimensionless temperature `tbar`.
//!
//! Module map:
//!
//! * [`model`]: Hamiltonian spectrum, Gibbs state and ground state.
//! * [`discord`]: mutual information, classical correlations and discord of an
//!   X state via a one-parameter measurement optimization.
//! * [`groundstate`]: closed-form results on the level-crossing line.
//! * [`oracle`]: brute-force validators (Bloch-sphere measurement search,
//!   dense Jacobi eigensolver, matrix exponential).
//! * [`sweep`]: parameter sweeps, thermal extremum search, verification runs
//!   and CSV output used by the `xdiscord` binary.
//!
//! With the default `parallel` feature, sweeps and oracle searches are
//! evaluated with rayon. Results are bitwise identical to the sequential path.

#![allow(clippy::needless_range_loop)]

pub mod discord;
mod error;
pub mod groundstate;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod par;
pub mod sweep;

pub use discord::{discord_report, DiscordReport};
pub use error::{Error, Result};
pub use model::{
    critical_omega, gibbs_state, ground_state, hamiltonian_spectrum, ModelParams, Spectrum,
    XDensityMatrix,
};
pub use par::Execution;
