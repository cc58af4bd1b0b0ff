//! Exact Riemann solvers for the Aw-Rascle traffic model with a modified
//! Chaplygin pressure `P(rho) = A rho - B / rho^alpha`, its perturbed variant,
//! and the pressureless transport limit.
//!
//! The crate also provides vanishing-pressure sweeps that track how the
//! solutions approach delta shocks and vacuum as `A, B -> 0`, and a first-order
//! finite-volume simulator for both pressured systems.

pub mod awrascle;
pub mod error;
pub mod fv;
pub mod model;
pub mod perturbed;
pub mod quadrature;
mod roots;
pub mod sweep;
pub mod transport;
pub mod weak;

pub use error::{Error, Result};
pub use model::{
    eigenvalues_original, eigenvalues_perturbed, flux, from_conserved,
    genuine_nonlinearity_original, perturbed_degeneracy_gap, pressure, to_conserved, Conserved,
    PressureParams, RiemannSampler, Sample, State, System, WaveSpeedPair,
};
pub use weak::Bump;
