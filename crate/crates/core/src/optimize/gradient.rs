use rayon::prelude::*;

use super::cost::cost;
use super::problem::OptimizationProblem;
use super::quadrature::integrate_uniform;
use crate::dynamics::{adjoint_backward, propagate, GAME_AXES};
use crate::error::{Error, Result};
#[cfg(test)]
use crate::quantum::DensityMatrix;
use crate::quantum::{Axis, ComplexMatrix2, PulseTriple};
use crate::scalar::{imag_unit, Real};

/// `tr{−i λ [∂H/∂ε, ρ]}·Δt` for a segment driven along `axis`.
///
/// Evaluated pointwise along a segment this is the integrand of the exact
/// derivative; the gradient integrates it over the segment's RK4 grid.
pub fn gradient_element<T: Real>(
    lambda: &ComplexMatrix2<T>,
    axis: Axis,
    rho: &ComplexMatrix2<T>,
    dt: T,
) -> T {
    let g = axis.generator::<T>();
    let v = (*lambda * g.commutator(rho)).trace() * (-imag_unit::<T>());
    debug_assert!(
        v.im.abs() <= T::tol(1e-10) * (T::one() + lambda.frobenius_norm()),
        "gradient integrand has imaginary part {}",
        v.im
    );
    v.re * dt
}

/// Cost, gradient and payoff.
type Evaluation<T> = (T, Vec<T>, T);

/// Cost and gradient of one opponent branch with its weight.
fn branch_cost_gradient<T: Real>(
    prob: &OptimizationProblem<T>,
    eps: &[T],
    opponent_rounds: &[PulseTriple<T>],
) -> Result<Evaluation<T>> {
    let cfg = &prob.cfg;
    let steps = cfg.steps_per_segment;
    let sched = prob.schedule(eps, opponent_rounds)?;
    let forward = propagate(&cfg.initial, &sched, &cfg.noise, steps)?;
    let rho_t = forward.final_state();
    let lambda_t = *rho_t.matrix() - *prob.target.target.matrix();
    let backward = adjoint_backward(&lambda_t, &sched, &cfg.noise, steps)?;

    let h = cfg.dt / T::from_usize(steps).expect("step count fits scalar");
    let grad = prob
        .role
        .segment_indices()
        .iter()
        .map(|&k| {
            let axis = GAME_AXES[k];
            let lo = k * steps;
            let integrand: Vec<T> = forward.states()[lo..=lo + steps]
                .iter()
                .zip(&backward[lo..=lo + steps])
                .map(|(rho, lam)| gradient_element(lam, axis, rho.matrix(), T::one()))
                .collect();
            integrate_uniform(&integrand, h)
        })
        .collect();
    Ok((cost(rho_t, &prob.target), grad, rho_t.p0() - rho_t.p1()))
}

/// Opponent-averaged cost, gradient and expected payoff at `eps`.
pub(crate) fn evaluate<T: Real>(prob: &OptimizationProblem<T>, eps: &[T]) -> Result<Evaluation<T>> {
    prob.check_dimension(eps)?;
    let branches = prob.opponent.branches();
    let parts: Vec<(T, Evaluation<T>)> = branches
        .par_iter()
        .map(|b| Ok((b.probability, branch_cost_gradient(prob, eps, &b.rounds)?)))
        .collect::<Result<_>>()?;
    let mut grad = vec![T::zero(); eps.len()];
    let mut total = T::zero();
    let mut payoff = T::zero();
    for (w, (c, g, p)) in parts {
        total = total + w * c;
        payoff = payoff + w * p;
        for (acc, gi) in grad.iter_mut().zip(g) {
            *acc = *acc + w * gi;
        }
    }
    Ok((total, grad, payoff))
}

/// Analytic adjoint gradient of the opponent-averaged cost.
pub fn gradient<T: Real>(prob: &OptimizationProblem<T>, eps: &[T]) -> Result<Vec<T>> {
    evaluate(prob, eps).map(|(_, g, _)| g)
}

/// Central differences of an arbitrary scalar function.
pub fn central_difference<T: Real>(
    mut f: impl FnMut(&[T]) -> Result<T>,
    x: &[T],
    h: T,
) -> Result<Vec<T>> {
    if !(h > T::zero()) {
        return Err(Error::InvalidArgument(
            "finite-difference step must be > 0".into(),
        ));
    }
    let mut probe = x.to_vec();
    let two_h = h + h;
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe)?;
            probe[i] = x[i] - h;
            let down = f(&probe)?;
            probe[i] = x[i];
            Ok((up - down) / two_h)
        })
        .collect()
}

/// Central differences of the opponent-averaged cost. Test oracle for
/// [`gradient`].
pub fn finite_difference_gradient<T: Real>(
    prob: &OptimizationProblem<T>,
    eps: &[T],
    h: T,
) -> Result<Vec<T>> {
    prob.check_dimension(eps)?;
    central_difference(|e| prob.objective(e), eps, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Channel;
    use crate::game::{pauli_strategy, GameConfig, Role, Strategy};
    use crate::scalar::c;

    #[test]
    fn element_is_linear_in_duration() {
        let lam = ComplexMatrix2::new(c(0.3, 0.0), c(0.2, -0.4), c(0.2, 0.4), c(-0.1, 0.0));
        let rho = *DensityMatrix::<f64>::from_bloch(0.4, 0.1, -0.5)
            .unwrap()
            .matrix();
        for axis in [Axis::Z, Axis::Y] {
            let one = gradient_element(&lam, axis, &rho, 0.7);
            let two = gradient_element(&lam, axis, &rho, 1.4);
            assert!(one != 0.0);
            assert!((two - 2.0 * one).abs() < 1e-15);
        }
    }

    #[test]
    fn quadratic_through_difference_interface() {
        let x = [0.3, -1.2, 2.5, 0.0];
        let g = central_difference(
            |v: &[f64]| Ok(0.5 * v.iter().map(|a| a * a).sum::<f64>()),
            &x,
            1e-4,
        )
        .unwrap();
        for (gi, xi) in g.iter().zip(x) {
            assert!((gi - xi).abs() < 1e-9);
        }
        assert!(central_difference(|_: &[f64]| Ok(0.0), &x, 0.0).is_err());
    }

    #[test]
    fn zero_gradient_at_attained_target() {
        let cfg = GameConfig::<f64>::default();
        let eps = [0.4, -0.3, 1.1];
        let opp = Strategy::identity(Role::Alice);
        let mut prob = OptimizationProblem::new(cfg.clone(), Role::Bob, opp.clone()).unwrap();
        let reached = crate::game::play_deterministic(
            &cfg,
            &[crate::quantum::PulseTriple::zero(); 2],
            &crate::quantum::PulseTriple::from_slice(&eps).unwrap(),
        )
        .unwrap();
        prob.target.target = reached.final_state;
        let g = gradient(&prob, &eps).unwrap();
        assert!(g.iter().all(|x| x.abs() < 1e-8), "{g:?}");
    }

    #[test]
    fn matches_finite_differences_for_each_channel() {
        for ch in Channel::ALL {
            for gamma in [0.1, 1.0] {
                let cfg = GameConfig::preset(ch, gamma).unwrap().steps(100);
                let prob =
                    OptimizationProblem::new(cfg, Role::Alice, pauli_strategy(Role::Bob)).unwrap();
                let eps = [0.3, -0.8, 1.3, -0.2, 0.9, 0.5];
                let g: Vec<f64> = gradient(&prob, &eps).unwrap();
                let fd = finite_difference_gradient(&prob, &eps, 1e-5).unwrap();
                for (a, b) in g.iter().zip(&fd) {
                    let diff = (a - b).abs();
                    assert!(
                        diff < 1e-8 || diff < 1e-4 * b.abs(),
                        "{ch} γ={gamma}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn difference_step_sweep() {
        let cfg = GameConfig::preset(Channel::PhaseDamping, 0.5)
            .unwrap()
            .steps(100);
        let prob = OptimizationProblem::new(cfg, Role::Bob, pauli_strategy(Role::Alice)).unwrap();
        let eps = [0.7, 0.2, -1.0];
        let g = gradient(&prob, &eps).unwrap();
        let err = |h: f64| {
            let fd = finite_difference_gradient(&prob, &eps, h).unwrap();
            g.iter()
                .zip(&fd)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let (coarse, mid, fine) = (err(1e-3), err(1e-5), err(1e-7));
        // truncation dominates at 1e-3, roundoff at 1e-7
        assert!(mid < coarse, "{coarse} {mid}");
        assert!(fine > mid * 0.1, "{mid} {fine}");
        assert!(coarse < 1e-5 && fine < 1e-6);
    }
}
