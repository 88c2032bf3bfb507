use super::generator::{adjoint_rhs, lindblad_rhs};
use super::noise::NoiseModel;
use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::quantum::{ComplexMatrix2, DensityMatrix};
use crate::scalar::Real;

pub const DEFAULT_STEPS_PER_SEGMENT: usize = 200;

const TRACE_DRIFT_LIMIT: f64 = 1e-6;

/// Density matrices sampled on the integration grid, `t = 0` to `t = T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    times: Vec<T>,
    states: Vec<DensityMatrix<T>>,
    steps_per_segment: usize,
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn steps_per_segment(&self) -> usize {
        self.steps_per_segment
    }

    pub fn samples(&self) -> impl Iterator<Item = (T, &DensityMatrix<T>)> + '_ {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn final_state(&self) -> &DensityMatrix<T> {
        self.states.last().expect("trajectory is never empty")
    }

    /// Samples covering segment `k`, both endpoints included.
    pub fn segment(&self, k: usize) -> (&[T], &[DensityMatrix<T>]) {
        let lo = k * self.steps_per_segment;
        let hi = lo + self.steps_per_segment + 1;
        (&self.times[lo..hi], &self.states[lo..hi])
    }

    /// Pointwise probability-weighted average of trajectories on one grid.
    pub fn mixture(parts: &[(T, &Trajectory<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?
            .1;
        if parts.iter().any(|(_, tr)| tr.times != first.times) {
            return Err(Error::InvalidArgument(
                "trajectories on different grids".into(),
            ));
        }
        let states = (0..first.len())
            .map(|i| {
                let mut acc = ComplexMatrix2::zero();
                for (w, tr) in parts {
                    acc += tr.states[i].matrix().scale_re(*w);
                }
                DensityMatrix::new_unchecked(acc)
            })
            .collect();
        Ok(Self {
            times: first.times.clone(),
            states,
            steps_per_segment: first.steps_per_segment,
        })
    }
}

#[inline]
fn rk4_step<T: Real>(
    y: &ComplexMatrix2<T>,
    h: T,
    f: impl Fn(&ComplexMatrix2<T>) -> ComplexMatrix2<T>,
) -> ComplexMatrix2<T> {
    let half = T::lit(0.5);
    let k1 = f(y);
    let k2 = f(&(*y + k1.scale_re(h * half)));
    let k3 = f(&(*y + k2.scale_re(h * half)));
    let k4 = f(&(*y + k3.scale_re(h)));
    let two = T::lit(2.0);
    *y + (k1 + k2.scale_re(two) + k3.scale_re(two) + k4).scale_re(h / T::lit(6.0))
}

/// Trace error, or how far a population has left `[0, 1]`, whichever is
/// larger. NaN propagates so that the caller's comparison fails.
fn invariant_drift<T: Real>(rho: &ComplexMatrix2<T>) -> T {
    let trace = (rho.trace().re - T::one()).abs();
    let excursion = [rho.get(0, 0).re, rho.get(1, 1).re]
        .iter()
        .map(|&p| (-p).max(p - T::one()))
        .fold(T::zero(), T::max);
    if trace.is_nan() || excursion.is_nan() {
        return T::nan();
    }
    trace.max(excursion)
}

/// Runs the forward RK4 sweep, calling `visit(t, ρ)` on every grid point.
fn integrate_forward<T: Real>(
    rho0: &DensityMatrix<T>,
    sched: &Schedule<T>,
    noise: &NoiseModel<T>,
    steps: usize,
    mut visit: impl FnMut(T, &ComplexMatrix2<T>),
) -> Result<ComplexMatrix2<T>> {
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "steps_per_segment must be >= 1".into(),
        ));
    }
    let limit = T::tol(TRACE_DRIFT_LIMIT);
    let mut rho = *rho0.matrix();
    visit(T::zero(), &rho);
    let starts = sched.start_times();
    for (k, (seg, &start)) in sched.segments().iter().zip(&starts).enumerate() {
        let h_mat = seg.hamiltonian();
        let h = seg.duration() / T::from_usize(steps).expect("step count fits scalar");
        for j in 1..=steps {
            rho = rk4_step(&rho, h, |m| lindblad_rhs(m, &h_mat, noise));
            let t = if j == steps {
                start + seg.duration()
            } else {
                start + h * T::from_usize(j).expect("step index fits scalar")
            };
            let drift = invariant_drift(&rho);
            if !(drift <= limit) {
                return Err(Error::IntegrationFailure {
                    segment: k,
                    time: t.to_f64_lossy(),
                    drift: drift.to_f64_lossy(),
                });
            }
            visit(t, &rho);
        }
    }
    Ok(rho)
}

/// Classic fourth-order Runge–Kutta through each constant-Hamiltonian
/// segment, recording every step.
///
/// Fails with [`Error::IntegrationFailure`] naming the segment if the trace
/// drifts by more than `1e-6` (or a population leaves `[0, 1]` by as much).
pub fn propagate<T: Real>(
    rho0: &DensityMatrix<T>,
    sched: &Schedule<T>,
    noise: &NoiseModel<T>,
    steps_per_segment: usize,
) -> Result<Trajectory<T>> {
    let n = sched.len() * steps_per_segment + 1;
    let mut times = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    integrate_forward(rho0, sched, noise, steps_per_segment, |t, m| {
        times.push(t);
        states.push(DensityMatrix::new_unchecked(*m));
    })?;
    Ok(Trajectory {
        times,
        states,
        steps_per_segment,
    })
}

/// Like [`propagate`] but keeps only the final state.
pub fn evolve<T: Real>(
    rho0: &DensityMatrix<T>,
    sched: &Schedule<T>,
    noise: &NoiseModel<T>,
    steps_per_segment: usize,
) -> Result<DensityMatrix<T>> {
    integrate_forward(rho0, sched, noise, steps_per_segment, |_, _| {})
        .map(DensityMatrix::new_unchecked)
}

/// Integrates the costate `dλ/dt = −L†(λ)` from `λ(T)` back to `t = 0`
/// with the same RK4 grid as [`propagate`].
///
/// The returned samples are in forward time order: index 0 is `t = 0` and the
/// last entry is `λ(T)` itself.
pub fn adjoint_backward<T: Real>(
    lambda_final: &ComplexMatrix2<T>,
    sched: &Schedule<T>,
    noise: &NoiseModel<T>,
    steps_per_segment: usize,
) -> Result<Vec<ComplexMatrix2<T>>> {
    if steps_per_segment == 0 {
        return Err(Error::InvalidArgument(
            "steps_per_segment must be >= 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(sched.len() * steps_per_segment + 1);
    let mut lam = *lambda_final;
    out.push(lam);
    for seg in sched.segments().iter().rev() {
        let h_mat = seg.hamiltonian();
        let h = seg.duration() / T::from_usize(steps_per_segment).expect("step count fits scalar");
        // in reversed time τ = T − t the costate obeys dλ/dτ = L†(λ)
        for _ in 0..steps_per_segment {
            lam = rk4_step(&lam, h, |m| adjoint_rhs(m, &h_mat, noise));
            out.push(lam);
        }
    }
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Channel;
    use crate::quantum::{gate_from_pulses, pauli, Pauli, PauliGate, PulseTriple};
    use crate::scalar::c;

    type D = DensityMatrix<f64>;
    type M = ComplexMatrix2<f64>;

    fn zero_game() -> Schedule<f64> {
        Schedule::from_coefficients(&[0.0; 9], 1.0).unwrap()
    }

    #[test]
    fn idle_noiseless_trajectory_is_constant() {
        let tr = propagate(&D::ground(), &zero_game(), &NoiseModel::noiseless(), 7).unwrap();
        assert_eq!(tr.len(), 9 * 7 + 1);
        assert_eq!(tr.times()[0], 0.0);
        assert_eq!(*tr.times().last().unwrap(), 9.0);
        assert!(tr.states().iter().all(|s| *s == D::ground()));
    }

    #[test]
    fn noiseless_flip_reaches_tails() {
        let id = PulseTriple::zero();
        let sched = Schedule::game(&PauliGate::X.pulses(), &id, &id, 1.0).unwrap();
        let fin = evolve(&D::ground(), &sched, &NoiseModel::noiseless(), 200).unwrap();
        assert!(fin.matrix().max_abs_diff(D::excited().matrix()) < 1e-8);
    }

    #[test]
    fn noiseless_matches_gate_products() {
        let a1 = PulseTriple::new(0.3, -1.1, 2.0);
        let b = PulseTriple::new(-0.7, 0.4, 0.9);
        let a2 = PulseTriple::new(1.5, 2.5, -0.2);
        let u = gate_from_pulses(&a2, 1.0).unwrap()
            * gate_from_pulses(&b, 1.0).unwrap()
            * gate_from_pulses(&a1, 1.0).unwrap();
        let rho0 = D::from_bloch(0.2, -0.5, 0.6).unwrap();
        let expected = u * *rho0.matrix() * u.adjoint();
        let sched = Schedule::game(&a1, &b, &a2, 1.0).unwrap();
        let fin = evolve(&rho0, &sched, &NoiseModel::noiseless(), 200).unwrap();
        assert!(fin.matrix().max_abs_diff(&expected) < 1e-8);
    }

    #[test]
    fn excited_state_decays_exponentially() {
        let noise = NoiseModel::preset(Channel::AmplitudeDamping, 0.7).unwrap();
        let fin = evolve(&D::excited(), &zero_game(), &noise, 1000).unwrap();
        let sz = fin.bloch()[2];
        // ρ₁₁ = e^{−γT}, so ⟨σz⟩ = 1 − 2e^{−γT}
        assert!((sz - (1.0 - 2.0 * (-0.7f64 * 9.0).exp())).abs() < 1e-10);
    }

    #[test]
    fn zero_steps_is_rejected() {
        assert!(propagate(&D::ground(), &zero_game(), &NoiseModel::noiseless(), 0).is_err());
    }

    #[test]
    fn unstable_step_reports_segment() {
        // h·γ far outside the RK4 stability region
        let noise = NoiseModel::preset(Channel::AmplitudeDamping, 1e4).unwrap();
        let err = propagate(&D::excited(), &zero_game(), &noise, 1).unwrap_err();
        assert!(
            matches!(err, Error::IntegrationFailure { segment: 0, .. }),
            "{err}"
        );
    }

    #[test]
    fn costate_is_constant_without_generator() {
        let lam = pauli::<f64>(Pauli::X).scale_re(0.3) + pauli(Pauli::Z);
        let out = adjoint_backward(&lam, &zero_game(), &NoiseModel::noiseless(), 10).unwrap();
        assert_eq!(out.len(), 91);
        assert!(out.iter().all(|l| *l == lam));
    }

    #[test]
    fn costate_under_constant_hamiltonian_is_unitary_conjugation() {
        use crate::quantum::expm_2x2;
        let sched = Schedule::from_coefficients(&[0.8; 9], 1.0).unwrap();
        let lam_t = M::new(c(0.2, 0.0), c(0.5, -0.1), c(0.5, 0.1), c(-0.4, 0.0));
        let out = adjoint_backward(&lam_t, &sched, &NoiseModel::noiseless(), 200).unwrap();
        // λ(t) = V λ(T) V† with V = e^{iH(T−t)} only on stretches of one axis;
        // check the last segment (σz) directly.
        let h = pauli::<f64>(Pauli::Z).scale_re(0.8);
        for (i, lam) in out[8 * 200..].iter().enumerate() {
            let tau = 1.0 - i as f64 / 200.0;
            let v = expm_2x2(&h.scale(c(0.0, tau)));
            let expected = v * lam_t * v.adjoint();
            assert!(lam.max_abs_diff(&expected) < 1e-10);
        }
    }

    #[test]
    fn dephasing_costate_decays_backwards() {
        let gamma = 0.4;
        let noise = NoiseModel::preset(Channel::PhaseDamping, gamma).unwrap();
        let out = adjoint_backward(&pauli(Pauli::X), &zero_game(), &noise, 200).unwrap();
        for (i, lam) in out.iter().enumerate().step_by(37) {
            let t = i as f64 / 200.0;
            let expected = (-2.0 * gamma * (9.0 - t)).exp();
            assert!((lam.get(0, 1).re - expected).abs() < 1e-9);
            assert_eq!(lam.get(0, 0), c(0.0, 0.0));
        }
    }

    #[test]
    fn costate_pairing_is_conserved() {
        let noise = NoiseModel::new([(pauli(Pauli::Minus), 0.3), (pauli(Pauli::Z), 0.2)]).unwrap();
        let sched = Schedule::game(
            &PulseTriple::new(0.4, -0.9, 1.2),
            &PauliGate::Y.pulses(),
            &PulseTriple::new(-0.3, 0.6, 0.1),
            1.0,
        )
        .unwrap();
        let tr = propagate(&D::plus(), &sched, &noise, 200).unwrap();
        let lam_t = M::new(c(0.7, 0.0), c(0.1, 0.3), c(0.1, -0.3), c(-0.2, 0.0));
        let lam = adjoint_backward(&lam_t, &sched, &noise, 200).unwrap();
        let reference = (lam_t * *tr.final_state().matrix()).trace().re;
        for (rho, l) in tr.states().iter().zip(&lam).step_by(50) {
            let pairing = (*l * *rho.matrix()).trace().re;
            assert!((pairing - reference).abs() < 1e-9);
        }
    }
}
