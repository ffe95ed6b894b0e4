//! Statevector simulation, circuit families, noise models and estimators for
//! verifying a prepared state against a classically specified target by
//! comparing random two-element snippets of the two states.
//!
//! Basis convention: amplitudes are stored in a flat array indexed by the
//! integer reading of the bitstring, with qubit 0 as the least significant bit.

pub mod circuits;
pub mod cost;
mod error;
pub mod gate;
pub mod noise;
pub mod protocol;
pub mod sampler;
pub mod seed;
pub mod state;

pub use error::{Error, Result};
pub use gate::GateMatrix;
pub use sampler::DiscreteSampler;
pub use state::StateVector;

pub use num_complex::Complex64 as C64;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;
