//! The penny-flip game: classical oracle, strategies and quantum play.

mod classical;
mod play;
mod strategy;

pub use classical::{classical_payoff, ClassicalMove};
pub use play::{
    expected_final_state, expected_payoff, pauli_vs_pauli, payoff_sweep, play_deterministic,
    play_recorded, GameConfig, GameOutcome,
};
pub use strategy::{pauli_strategy, Branch, Role, Strategy, StrategyKind};
