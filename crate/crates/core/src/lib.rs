//! Verification and exhaustive search for absolutely maximally entangled
//! (AME) qubit states.
//!
//! * [`pauli`]: Pauli strings in binary symplectic form.
//! * [`state`]: dense pure states, marginals, Bloch coefficients and sector lengths.
//! * [`graph`]: graph states, stabilizer groups and local complementation.
//! * [`analysis`]: AME certification and the exact parity-rule exclusion arithmetic.
//! * [`search`]: exhaustive graph-state scans and local-complementation orbits.
//! * [`named`]: the fixture graphs shipped with the crate.
//! * [`io`]: state and report file formats.

pub mod analysis;
pub mod bits;
pub mod error;
pub mod graph;
pub mod io;
pub mod named;
pub mod pauli;
pub mod search;
pub mod state;

pub use error::{Error, Result};
pub use graph::{Graph, StabilizerGroup};
pub use pauli::PauliOperator;
pub use state::{DensityMatrix, SectorLengths, StateVector};
