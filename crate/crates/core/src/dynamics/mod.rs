//! Open-system dynamics of the coin: Lindblad generator, RK4 propagation,
//! closed-form solutions for diagonal Hamiltonians and trajectory export.

mod analytic;
mod export;
mod generator;
mod integrate;
mod noise;
mod schedule;

pub use analytic::{
    analytic_amplitude_damping, analytic_amplitude_raising, analytic_phase_damping,
    analytic_solution, asymptotic_state, DiagonalHamiltonian,
};
pub use export::{write_trajectory_csv, TRAJECTORY_HEADER};
pub use generator::{adjoint_rhs, lindblad_rhs};
pub use integrate::{adjoint_backward, evolve, propagate, Trajectory, DEFAULT_STEPS_PER_SEGMENT};
pub use noise::{Channel, LindbladTerm, NoiseModel};
pub use schedule::{Schedule, GAME_AXES, GAME_SEGMENTS};
