use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bfgs::{bfgs_minimize, BfgsSettings, StopReason};
use super::cost::CostSpec;
use super::gradient::evaluate;
use crate::dynamics::Schedule;
use crate::error::{Error, Result};
use crate::game::{expected_payoff, GameConfig, Role, Strategy};
use crate::quantum::{DensityMatrix, PulseTriple};
use crate::scalar::Real;

/// One player's pulses optimised against a fixed opponent strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationProblem<T> {
    pub cfg: GameConfig<T>,
    pub role: Role,
    pub opponent: Strategy<T>,
    pub target: CostSpec<T>,
    pub initial_guess: Vec<T>,
    /// Optional box applied to every coefficient.
    pub bounds: Option<(T, T)>,
    pub settings: BfgsSettings<T>,
}

/// Where and how a run ended.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult<T> {
    pub epsilon: Vec<T>,
    pub cost: T,
    /// Bob's expected payoff `tr(σz ρ(T))` against the opponent strategy.
    pub payoff: T,
    pub iterations: usize,
    pub grad_norm: T,
    pub converged: bool,
    pub stop: StopReason,
    pub initial_cost: T,
    pub initial_payoff: T,
    /// Objective after each accepted iterate, starting with the initial guess.
    pub cost_history: Vec<T>,
    /// Index of the winning start in [`multistart_optimize`]; 0 otherwise.
    pub start_index: usize,
}

impl<T: Real> OptimizationResult<T> {
    /// Payoff seen from the optimising player: higher is better for them.
    pub fn player_payoff(&self, role: Role) -> T {
        match role {
            Role::Bob => self.payoff,
            Role::Alice => -self.payoff,
        }
    }
}

impl<T: Real> OptimizationProblem<T> {
    /// Zero initial guess, no bounds, default tolerances and the winning
    /// state of `role` as target.
    pub fn new(cfg: GameConfig<T>, role: Role, opponent: Strategy<T>) -> Result<Self> {
        if opponent.role() != role.opponent() {
            return Err(Error::InvalidArgument(format!(
                "opponent of {} must play as {}",
                role.name(),
                role.opponent().name()
            )));
        }
        let target = match role {
            Role::Alice => DensityMatrix::excited(),
            Role::Bob => DensityMatrix::ground(),
        };
        Ok(Self {
            cfg,
            role,
            opponent,
            target: CostSpec::new(target),
            initial_guess: vec![T::zero(); Self::dimension_for(role)],
            bounds: None,
            settings: BfgsSettings::default(),
        })
    }

    pub fn with_initial_guess(mut self, guess: Vec<T>) -> Result<Self> {
        self.check_dimension(&guess)?;
        if guess.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite initial guess".into()));
        }
        self.initial_guess = guess;
        Ok(self)
    }

    pub fn with_bounds(mut self, lo: T, hi: T) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument("empty bounds".into()));
        }
        self.bounds = Some((lo, hi));
        Ok(self)
    }

    fn dimension_for(role: Role) -> usize {
        3 * role.rounds()
    }

    /// Number of free coefficients: 6 for Alice, 3 for Bob.
    pub fn dimension(&self) -> usize {
        Self::dimension_for(self.role)
    }

    pub(crate) fn check_dimension(&self, eps: &[T]) -> Result<()> {
        if eps.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: eps.len(),
            });
        }
        Ok(())
    }

    /// The player's pulses as round triples.
    pub fn rounds(&self, eps: &[T]) -> Result<Vec<PulseTriple<T>>> {
        self.check_dimension(eps)?;
        eps.chunks(3).map(PulseTriple::from_slice).collect()
    }

    pub fn player_strategy(&self, eps: &[T]) -> Result<Strategy<T>> {
        Strategy::deterministic(self.role, self.rounds(eps)?)
    }

    /// Game schedule for `eps` against one realisation of the opponent.
    pub fn schedule(&self, eps: &[T], opponent_rounds: &[PulseTriple<T>]) -> Result<Schedule<T>> {
        let mine = self.rounds(eps)?;
        match self.role {
            Role::Alice => self.cfg.schedule(&mine, &opponent_rounds[0]),
            Role::Bob => self.cfg.schedule(opponent_rounds, &mine[0]),
        }
    }

    /// Opponent-averaged cost.
    pub fn objective(&self, eps: &[T]) -> Result<T> {
        self.check_dimension(eps)?;
        let branches = self.opponent.branches();
        let costs: Vec<(T, T)> = branches
            .par_iter()
            .map(|b| {
                let sched = self.schedule(eps, &b.rounds)?;
                let fin = crate::dynamics::evolve(
                    &self.cfg.initial,
                    &sched,
                    &self.cfg.noise,
                    self.cfg.steps_per_segment,
                )?;
                Ok((b.probability, super::cost::cost(&fin, &self.target)))
            })
            .collect::<Result<_>>()?;
        Ok(costs.iter().fold(T::zero(), |acc, (w, c)| acc + *w * *c))
    }

    /// Opponent-averaged cost and its gradient.
    pub fn cost_and_gradient(&self, eps: &[T]) -> Result<(T, Vec<T>)> {
        evaluate(self, eps).map(|(c, g, _)| (c, g))
    }

    /// Bob's expected payoff when the player uses `eps`.
    pub fn expected_payoff(&self, eps: &[T]) -> Result<T> {
        let mine = self.player_strategy(eps)?;
        match self.role {
            Role::Alice => expected_payoff(&self.cfg, &mine, &self.opponent),
            Role::Bob => expected_payoff(&self.cfg, &self.opponent, &mine),
        }
    }
}

/// Smooth map of an unconstrained coordinate into `[lo, hi]`.
#[derive(Clone, Copy)]
struct BoxMap<T> {
    mid: T,
    half: T,
}

impl<T: Real> BoxMap<T> {
    fn new((lo, hi): (T, T)) -> Self {
        let half = (hi - lo) * T::lit(0.5);
        Self {
            mid: lo + half,
            half,
        }
    }

    fn to_eps(self, u: T) -> T {
        self.mid + self.half * u.sin()
    }

    fn to_param(self, e: T) -> T {
        ((e - self.mid) / self.half)
            .max(-T::one())
            .min(T::one())
            .asin()
    }

    fn chain(self, u: T) -> T {
        self.half * u.cos()
    }
}

/// BFGS from the problem's initial guess.
pub fn optimize<T: Real>(prob: &OptimizationProblem<T>) -> Result<OptimizationResult<T>> {
    prob.check_dimension(&prob.initial_guess)?;
    let map = prob.bounds.map(BoxMap::new);
    let to_eps = |u: &[T]| -> Vec<T> {
        match map {
            Some(m) => u.iter().map(|v| m.to_eps(*v)).collect(),
            None => u.to_vec(),
        }
    };
    let u0: Vec<T> = match map {
        Some(m) => prob.initial_guess.iter().map(|e| m.to_param(*e)).collect(),
        None => prob.initial_guess.clone(),
    };

    let fg = |u: &[T]| -> Result<(T, Vec<T>)> {
        let eps = to_eps(u);
        // trial points far outside the integrator's stable range count as
        // infinitely bad so the line search backs off
        let (c, mut g) = match prob.cost_and_gradient(&eps) {
            Err(Error::IntegrationFailure { .. }) => {
                return Ok((T::infinity(), vec![T::nan(); u.len()]))
            }
            other => other?,
        };
        if let Some(m) = map {
            for (gi, ui) in g.iter_mut().zip(u) {
                *gi = *gi * m.chain(*ui);
            }
        }
        Ok((c, g))
    };

    let report = bfgs_minimize(fg, &u0, &prob.settings)?;
    let epsilon = to_eps(&report.x);
    let (cost, grad, payoff) = evaluate(prob, &epsilon)?;
    let grad_norm = grad.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt();
    let initial_payoff = prob.expected_payoff(&prob.initial_guess)?;
    Ok(OptimizationResult {
        epsilon,
        cost,
        payoff,
        iterations: report.iterations,
        grad_norm,
        converged: report.stop == StopReason::GradientTolerance
            && report.grad_norm() < prob.settings.grad_tol,
        stop: report.stop,
        initial_cost: report.history[0],
        initial_payoff,
        cost_history: report.history,
        start_index: 0,
    })
}

/// Starting points used by [`multistart_optimize`]: the problem's initial
/// guess, then uniform draws in `[−π, π]^M` from a ChaCha8 stream seeded
/// with `seed`.
pub fn multistart_points<T: Real>(
    prob: &OptimizationProblem<T>,
    n_starts: usize,
    seed: u64,
) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = std::f64::consts::PI;
    let mut starts = vec![prob.initial_guess.clone()];
    for _ in 1..n_starts {
        starts.push(
            (0..prob.dimension())
                .map(|_| T::lit(rng.gen_range(-pi..pi)))
                .collect(),
        );
    }
    starts
}

/// Best of `n_starts` BFGS runs, ties going to the earliest start.
/// Deterministic for a given `seed`.
pub fn multistart_optimize<T: Real>(
    prob: &OptimizationProblem<T>,
    n_starts: usize,
    seed: u64,
) -> Result<OptimizationResult<T>> {
    if n_starts == 0 {
        return Err(Error::InvalidArgument("n_starts must be >= 1".into()));
    }
    let runs: Vec<OptimizationResult<T>> = multistart_points(prob, n_starts, seed)
        .into_par_iter()
        .enumerate()
        .map(|(i, x0)| {
            let p = OptimizationProblem {
                initial_guess: x0,
                ..prob.clone()
            };
            optimize(&p).map(|mut r| {
                r.start_index = i;
                r
            })
        })
        .collect::<Result<_>>()?;
    let mut best = runs
        .into_iter()
        .reduce(|a, b| if b.cost < a.cost { b } else { a })
        .expect("at least one start");
    // report the payoff of the problem's own starting point, not the winner's
    if best.start_index != 0 {
        best.initial_payoff = prob.expected_payoff(&prob.initial_guess)?;
    }
    Ok(best)
}
