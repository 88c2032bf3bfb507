//! JSON records written next to the CSV files.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    /// Row-major entries `[ρ00, ρ01, ρ10, ρ11]`.
    pub re: [f64; 4],
    pub im: [f64; 4],
    pub bloch: [f64; 3],
    pub purity: f64,
}

impl StateRecord {
    pub fn new(rho: &qflip::Density) -> Self {
        let e = rho.matrix().entries();
        Self {
            re: [e[0].re, e[1].re, e[2].re, e[3].re],
            im: [e[0].im, e[1].im, e[2].im, e[3].im],
            bloch: rho.bloch(),
            purity: rho.purity(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub channel: String,
    pub gamma: f64,
    pub steps_per_segment: usize,
    pub branches: usize,
    pub payoff: f64,
    pub p_alice_win: f64,
    pub p_bob_win: f64,
    pub final_state: StateRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub file: String,
    /// Support index chosen by the opponent in each of its rounds.
    pub choice: Vec<usize>,
    pub probability: f64,
    pub payoff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub epsilon: Vec<f64>,
    pub cost: f64,
    pub payoff: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
    pub seed: u64,
    pub role: String,
    pub channel: String,
    pub gamma: f64,
    pub steps_per_segment: usize,
    pub starts: usize,
    pub start_index: usize,
    pub stop: String,
    pub initial_payoff: f64,
    pub pauli_payoff: f64,
    pub branches: Vec<BranchRecord>,
}
