//! Exact single-qubit linear algebra.

mod density;
mod expm;
mod matrix;
mod pulse;

pub use density::{expectation, DensityMatrix};
pub use expm::expm_2x2;
pub use matrix::{pauli, ComplexMatrix2, Pauli};
pub use pulse::{gate_from_pulses, Axis, ControlSegment, PauliGate, PulseTriple};
