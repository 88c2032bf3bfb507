//! Qubit penny-flip game played under Markovian (Lindblad) noise.
//!
//! The crate is organised bottom-up:
//!
//! * [`quantum`]: exact 2×2 complex algebra, Pauli operators, the closed-form
//!   matrix exponential and the Z-Y-Z pulse gate.
//! * [`dynamics`]: the Lindblad generator, a fixed-step RK4 propagator over
//!   piecewise-constant schedules, closed-form solutions for diagonal
//!   Hamiltonians and trajectory export.
//! * [`game`]: the classical payoff oracle, strategies (deterministic and
//!   mixed), game execution and exact expected payoffs by branch enumeration.
//! * [`optimize`]: cost functional, adjoint propagation, analytic gradients,
//!   a finite-difference oracle and a BFGS driver with multistart.
//!
//! All numerics are generic over [`Real`] (implemented for `f32` and `f64`);
//! the aliases below fix the scalar to `f64`, which is what the game and the
//! optimizer are tuned for.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod game;
pub mod optimize;
pub mod quantum;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use dynamics::{Channel, DiagonalHamiltonian, NoiseModel, Schedule, Trajectory};
pub use game::{ClassicalMove, GameConfig, GameOutcome, Role, Strategy};
pub use optimize::{BfgsSettings, CostSpec, OptimizationProblem, OptimizationResult};
pub use quantum::{
    Axis, ComplexMatrix2, ControlSegment, DensityMatrix, Pauli, PauliGate, PulseTriple,
};

/// Complex scalar used by the `f64` aliases.
pub type C64 = num_complex::Complex<f64>;

pub type Matrix2 = ComplexMatrix2<f64>;
pub type Density = DensityMatrix<f64>;
pub type Pulses = PulseTriple<f64>;
pub type Segment = ControlSegment<f64>;
pub type Noise = NoiseModel<f64>;
pub type GameSchedule = Schedule<f64>;
pub type Samples = Trajectory<f64>;
pub type Config = GameConfig<f64>;
pub type Outcome = GameOutcome<f64>;
pub type PlayerStrategy = Strategy<f64>;
pub type Problem = OptimizationProblem<f64>;
pub type Solution = OptimizationResult<f64>;

/// Single-precision variants, useful for quick exploration.
pub type Matrix2f32 = ComplexMatrix2<f32>;
pub type Densityf32 = DensityMatrix<f32>;
