use rayon::prelude::*;

use super::strategy::{pauli_strategy, Branch, Role, Strategy};
use crate::dynamics::{
    evolve, propagate, Channel, NoiseModel, Schedule, Trajectory, DEFAULT_STEPS_PER_SEGMENT,
};
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, PulseTriple};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct GameConfig<T> {
    pub initial: DensityMatrix<T>,
    pub noise: NoiseModel<T>,
    pub dt: T,
    pub steps_per_segment: usize,
}

impl<T: Real> Default for GameConfig<T> {
    fn default() -> Self {
        Self {
            initial: DensityMatrix::ground(),
            noise: NoiseModel::noiseless(),
            dt: T::one(),
            steps_per_segment: DEFAULT_STEPS_PER_SEGMENT,
        }
    }
}

impl<T: Real> GameConfig<T> {
    pub fn with_noise(noise: NoiseModel<T>) -> Self {
        Self {
            noise,
            ..Self::default()
        }
    }

    pub fn preset(channel: Channel, gamma: T) -> Result<Self> {
        Ok(Self::with_noise(NoiseModel::preset(channel, gamma)?))
    }

    pub fn steps(mut self, steps_per_segment: usize) -> Self {
        self.steps_per_segment = steps_per_segment;
        self
    }

    pub fn schedule(&self, alice: &[PulseTriple<T>], bob: &PulseTriple<T>) -> Result<Schedule<T>> {
        match alice {
            [a1, a2] => Schedule::game(a1, bob, a2, self.dt),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                got: alice.len(),
            }),
        }
    }
}

/// Result of one game. Payoff is Bob's: `tr(σz ρ(T))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameOutcome<T> {
    pub final_state: DensityMatrix<T>,
    pub payoff: T,
    /// `⟨1|ρ(T)|1⟩`, tails.
    pub p_alice_win: T,
    /// `⟨0|ρ(T)|0⟩`, heads.
    pub p_bob_win: T,
    pub trajectory: Option<Trajectory<T>>,
}

impl<T: Real> GameOutcome<T> {
    pub fn from_final_state(final_state: DensityMatrix<T>) -> Self {
        let p_bob_win = final_state.p0();
        let p_alice_win = final_state.p1();
        Self {
            final_state,
            payoff: p_bob_win - p_alice_win,
            p_alice_win,
            p_bob_win,
            trajectory: None,
        }
    }
}

/// Plays fixed pulses: Alice's first triple, Bob's triple, Alice's second.
pub fn play_deterministic<T: Real>(
    cfg: &GameConfig<T>,
    alice: &[PulseTriple<T>],
    bob: &PulseTriple<T>,
) -> Result<GameOutcome<T>> {
    let sched = cfg.schedule(alice, bob)?;
    let fin = evolve(&cfg.initial, &sched, &cfg.noise, cfg.steps_per_segment)?;
    Ok(GameOutcome::from_final_state(fin))
}

/// [`play_deterministic`] keeping the whole trajectory.
pub fn play_recorded<T: Real>(
    cfg: &GameConfig<T>,
    alice: &[PulseTriple<T>],
    bob: &PulseTriple<T>,
) -> Result<GameOutcome<T>> {
    let sched = cfg.schedule(alice, bob)?;
    let traj = propagate(&cfg.initial, &sched, &cfg.noise, cfg.steps_per_segment)?;
    let mut out = GameOutcome::from_final_state(*traj.final_state());
    out.trajectory = Some(traj);
    Ok(out)
}

fn check_roles<T: Real>(alice: &Strategy<T>, bob: &Strategy<T>) -> Result<()> {
    if alice.role() != Role::Alice || bob.role() != Role::Bob {
        return Err(Error::InvalidArgument(
            "strategies passed in the wrong roles".into(),
        ));
    }
    Ok(())
}

/// Final state and weight of every pair of branches, in enumeration order.
fn branch_final_states<T: Real>(
    cfg: &GameConfig<T>,
    alice: &Strategy<T>,
    bob: &Strategy<T>,
) -> Result<Vec<(T, DensityMatrix<T>)>> {
    check_roles(alice, bob)?;
    let a = alice.branches();
    let b = bob.branches();
    let pairs: Vec<(&Branch<T>, &Branch<T>)> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (x, y)))
        .collect();
    pairs
        .par_iter()
        .map(|(x, y)| {
            let out = play_deterministic(cfg, &x.rounds, &y.rounds[0])?;
            Ok((x.probability * y.probability, out.final_state))
        })
        .collect()
}

/// Exact expected payoff, enumerating every combination of mixed choices.
pub fn expected_payoff<T: Real>(
    cfg: &GameConfig<T>,
    alice: &Strategy<T>,
    bob: &Strategy<T>,
) -> Result<T> {
    let finals = branch_final_states(cfg, alice, bob)?;
    Ok(finals
        .iter()
        .fold(T::zero(), |acc, (w, rho)| acc + *w * (rho.p0() - rho.p1())))
}

/// Probability-weighted mean of the branch final states.
pub fn expected_final_state<T: Real>(
    cfg: &GameConfig<T>,
    alice: &Strategy<T>,
    bob: &Strategy<T>,
) -> Result<DensityMatrix<T>> {
    let finals = branch_final_states(cfg, alice, bob)?;
    DensityMatrix::mixture(finals.iter().map(|(w, rho)| (*w, rho)))
}

pub fn pauli_vs_pauli<T: Real>(cfg: &GameConfig<T>) -> Result<T> {
    expected_payoff(
        cfg,
        &pauli_strategy(Role::Alice),
        &pauli_strategy(Role::Bob),
    )
}

/// Expected payoff for each rate in `gammas` under `channel`, in input order.
pub fn payoff_sweep<T: Real>(
    template: &GameConfig<T>,
    channel: Channel,
    alice: &Strategy<T>,
    bob: &Strategy<T>,
    gammas: &[T],
) -> Result<Vec<(T, T)>> {
    gammas
        .par_iter()
        .map(|&g| {
            let cfg = GameConfig {
                noise: NoiseModel::preset(channel, g)?,
                ..template.clone()
            };
            Ok((g, expected_payoff(&cfg, alice, bob)?))
        })
        .collect()
}
