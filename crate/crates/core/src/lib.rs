//! Coherent quantum refrigeration toolkit.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: dense density matrices, channels in Kraus and natural
//!   (column-stacked Liouville) form, partial traces and channel fixed points.
//! - [`bloch`]: single-qubit geometry of cooling with a coherent virtual qubit,
//!   optimal and mismatched final rotations, and cooling-region classification.
//! - [`alpha`]: cooling when the coherence phase is only known to lie in an
//!   interval, with closed-form and quadrature averages.
//! - [`region`]: where a rotation tuned for an assumed coherence cools.
//! - [`hbac`]: the three-qubit coherent heat-bath algorithmic cooling channel,
//!   its closed-form propagator and the final polarization-enhancing rotation.
//! - [`ising`]: coherent reset pairs prepared as Ising thermal states.
//! - [`thermo`]: heat, work and coherence-aware coefficient of performance.
//! - [`multireset`]: coherence versus additional reset qubits.

pub mod alpha;
pub mod bloch;
mod error;
pub mod hbac;
pub mod ising;
pub mod multireset;
pub mod quadrature;
pub mod quantum;
pub mod region;
pub mod stats;
pub mod thermo;
mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quantum::{BlochVector, CMat, ChannelRep, DensityMatrix};
pub use tolerance::{Tolerances, TOL};

/// Library version, recorded alongside generated artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
