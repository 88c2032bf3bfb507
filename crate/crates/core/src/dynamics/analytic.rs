//! Closed-form evolution for time-independent diagonal Hamiltonians
//! `H = β₀|0⟩⟨0| + β₁|1⟩⟨1|` under a single preset channel.

use super::noise::Channel;
use crate::quantum::{expm_2x2, pauli, ComplexMatrix2, DensityMatrix, Pauli};
use crate::scalar::{c, re, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalHamiltonian<T> {
    pub beta0: T,
    pub beta1: T,
}

impl<T: Real> DiagonalHamiltonian<T> {
    pub fn new(beta0: T, beta1: T) -> Self {
        Self { beta0, beta1 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn matrix(&self) -> ComplexMatrix2<T> {
        ComplexMatrix2::diag(re(self.beta0), re(self.beta1))
    }
}

fn check_args<T: Real>(gamma: T, t: T) {
    assert!(gamma >= T::zero(), "decoherence rate must be >= 0");
    assert!(t >= T::zero(), "time must be >= 0");
}

/// Shared damping/raising solution with jump operator `jump`:
/// `ρ(t) = e^{At} [ρ(0) + (1 − e^{−γt}) L ρ(0) L†] e^{A†t}`,
/// `A = −iH − ½γ L†L`.
fn ladder_solution<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &DiagonalHamiltonian<T>,
    jump: ComplexMatrix2<T>,
    gamma: T,
    t: T,
) -> DensityMatrix<T> {
    check_args(gamma, t);
    let jump_dag = jump.adjoint();
    let a =
        h.matrix().scale(c(T::zero(), -T::one())) - (jump_dag * jump).scale_re(T::lit(0.5) * gamma);
    let e_at = expm_2x2(&a.scale_re(t));
    let feed = T::one() - (-gamma * t).exp();
    let inner = *rho0.matrix() + (jump * *rho0.matrix() * jump_dag).scale_re(feed);
    DensityMatrix::new_unchecked(e_at * inner * e_at.adjoint())
}

/// Amplitude damping (`L = σ₋`). Fixed point `|0⟩⟨0|`.
pub fn analytic_amplitude_damping<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &DiagonalHamiltonian<T>,
    gamma: T,
    t: T,
) -> DensityMatrix<T> {
    ladder_solution(rho0, h, pauli(Pauli::Minus), gamma, t)
}

/// Amplitude raising (`L = σ₊`). Fixed point `|1⟩⟨1|`.
pub fn analytic_amplitude_raising<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &DiagonalHamiltonian<T>,
    gamma: T,
    t: T,
) -> DensityMatrix<T> {
    ladder_solution(rho0, h, pauli(Pauli::Plus), gamma, t)
}

/// Phase damping (`L = σz`): populations are kept, coherences pick up
/// `e^{−2γt}` and the phase of `e^{−iHt}`.
pub fn analytic_phase_damping<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &DiagonalHamiltonian<T>,
    gamma: T,
    t: T,
) -> DensityMatrix<T> {
    check_args(gamma, t);
    let p0 = ComplexMatrix2::diag(re(T::one()), re(T::zero()));
    let p1 = ComplexMatrix2::diag(re(T::zero()), re(T::one()));
    let r = *rho0.matrix();
    let populations = p0 * r * p0 + p1 * r * p1;
    let coherences = p0 * r * p1 + p1 * r * p0;
    let u = expm_2x2(&h.matrix().scale(c(T::zero(), -t)));
    let damped = (u * coherences * u.adjoint()).scale_re((-T::lit(2.0) * gamma * t).exp());
    DensityMatrix::new_unchecked(populations + damped)
}

pub fn analytic_solution<T: Real>(
    channel: Channel,
    rho0: &DensityMatrix<T>,
    h: &DiagonalHamiltonian<T>,
    gamma: T,
    t: T,
) -> DensityMatrix<T> {
    match channel {
        Channel::AmplitudeDamping => analytic_amplitude_damping(rho0, h, gamma, t),
        Channel::AmplitudeRaising => analytic_amplitude_raising(rho0, h, gamma, t),
        Channel::PhaseDamping => analytic_phase_damping(rho0, h, gamma, t),
    }
}

/// `γ → ∞` limit of the closed forms at any fixed `t > 0`.
pub fn asymptotic_state<T: Real>(channel: Channel, rho0: &DensityMatrix<T>) -> DensityMatrix<T> {
    match channel {
        Channel::AmplitudeDamping => DensityMatrix::ground(),
        Channel::AmplitudeRaising => DensityMatrix::excited(),
        Channel::PhaseDamping => rho0.diagonal(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, NoiseModel, Schedule};
    use crate::quantum::{Axis, ControlSegment};

    type D = DensityMatrix<f64>;
    type H = DiagonalHamiltonian<f64>;

    fn valid(rho: &D) -> bool {
        D::new(*rho.matrix()).is_ok()
    }

    #[test]
    fn fixed_points() {
        let h = H::new(0.3, -1.2);
        for (g, t) in [(0.1, 0.5), (5.0, 9.0), (0.0, 2.0)] {
            assert!(
                analytic_amplitude_damping(&D::ground(), &h, g, t)
                    .matrix()
                    .max_abs_diff(D::ground().matrix())
                    < 1e-15
            );
            assert!(
                analytic_amplitude_raising(&D::excited(), &h, g, t)
                    .matrix()
                    .max_abs_diff(D::excited().matrix())
                    < 1e-15
            );
            assert!(
                analytic_phase_damping(&D::ground(), &h, g, t)
                    .matrix()
                    .max_abs_diff(D::ground().matrix())
                    < 1e-15
            );
        }
    }

    #[test]
    fn excited_population_decays() {
        let (g, t) = (0.7, 2.3);
        let rho = analytic_amplitude_damping(&D::excited(), &H::zero(), g, t);
        let e = (-g * t).exp();
        assert!((rho.p1() - e).abs() < 1e-15 && (rho.p0() - (1.0 - e)).abs() < 1e-15);
        assert!(valid(&rho));
    }

    #[test]
    fn ground_population_is_pumped() {
        let (g, t) = (0.7, 2.3);
        let rho = analytic_amplitude_raising(&D::ground(), &H::zero(), g, t);
        let e = (-g * t).exp();
        assert!((rho.p0() - e).abs() < 1e-15 && (rho.p1() - (1.0 - e)).abs() < 1e-15);
    }

    #[test]
    fn coherence_decay_rates() {
        let (g, t) = (0.4, 1.7);
        let ad = analytic_amplitude_damping(&D::plus(), &H::zero(), g, t);
        assert!((ad.matrix().get(0, 1).re - 0.5 * (-g * t / 2.0).exp()).abs() < 1e-15);
        let pd = analytic_phase_damping(&D::plus(), &H::zero(), g, t);
        assert!((pd.matrix().get(0, 1).re - 0.5 * (-2.0 * g * t).exp()).abs() < 1e-15);
        assert_eq!(pd.p0(), 0.5);
    }

    #[test]
    fn trace_is_exactly_preserved_for_mixed_initial_states() {
        let rho0 = D::from_bloch(0.3, -0.2, -0.6).unwrap();
        let h = H::new(1.0, -1.0);
        for ch in Channel::ALL {
            for t in [0.0, 0.3, 4.0, 9.0] {
                let rho = analytic_solution(ch, &rho0, &h, 0.7, t);
                assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14, "{ch} t={t}");
                assert!(valid(&rho));
            }
        }
    }

    #[test]
    fn large_rate_approaches_asymptote() {
        let rho0 = D::from_bloch(0.5, 0.1, 0.2).unwrap();
        let h = H::new(0.0, 1.0);
        for ch in Channel::ALL {
            let limit = asymptotic_state(ch, &rho0);
            let rho = analytic_solution(ch, &rho0, &h, 200.0, 1.0);
            assert!(rho.matrix().max_abs_diff(limit.matrix()) < 1e-12, "{ch}");
        }
        let pd = asymptotic_state(Channel::PhaseDamping, &D::plus());
        assert_eq!(pd, D::maximally_mixed());
        assert_eq!(
            asymptotic_state(Channel::PhaseDamping, &D::ground()),
            D::ground()
        );
        assert_eq!(
            asymptotic_state(Channel::AmplitudeRaising, &D::ground()),
            D::excited()
        );
        assert_eq!(
            asymptotic_state(Channel::AmplitudeDamping, &D::excited()),
            D::ground()
        );
    }

    #[test]
    fn agrees_with_integrator_under_z_drive() {
        // a σz drive is the diagonal Hamiltonian β₀ = α, β₁ = −α
        let alpha = 0.9;
        let seg = ControlSegment::new(alpha, Axis::Z, 3.0).unwrap();
        let sched = Schedule::new(vec![seg]).unwrap();
        let rho0 = D::from_bloch(0.6, 0.2, -0.3).unwrap();
        for ch in Channel::ALL {
            let noise = NoiseModel::preset(ch, 0.7).unwrap();
            let num = evolve(&rho0, &sched, &noise, 3000).unwrap();
            let ana = analytic_solution(ch, &rho0, &H::new(alpha, -alpha), 0.7, 3.0);
            assert!(
                (*num.matrix() - *ana.matrix()).frobenius_norm() < 1e-9,
                "{ch}"
            );
        }
    }
}
