use super::noise::NoiseModel;
use crate::quantum::ComplexMatrix2;
use crate::scalar::{imag_unit, Real};

/// `dρ/dt = −i[H, ρ] + Σ_j γ_j (L_j ρ L_j† − ½{L_j†L_j, ρ})`.
pub fn lindblad_rhs<T: Real>(
    rho: &ComplexMatrix2<T>,
    h: &ComplexMatrix2<T>,
    noise: &NoiseModel<T>,
) -> ComplexMatrix2<T> {
    let mut out = h.commutator(rho).scale(-imag_unit::<T>());
    let half = T::lit(0.5);
    for term in noise.terms() {
        if term.rate == T::zero() {
            continue;
        }
        let jump = term.operator * *rho * term.op_dag;
        let anti = term.op_dag_op.anticommutator(rho);
        out += (jump - anti.scale_re(half)).scale_re(term.rate);
    }
    out
}

/// Hilbert–Schmidt adjoint of [`lindblad_rhs`]:
/// `L†(λ) = i[H, λ] + Σ_j γ_j (L_j† λ L_j − ½{L_j†L_j, λ})`.
///
/// The costate obeys `dλ/dt = −L†(λ)`, so `tr(λ(t) ρ(t))` is conserved.
pub fn adjoint_rhs<T: Real>(
    lambda: &ComplexMatrix2<T>,
    h: &ComplexMatrix2<T>,
    noise: &NoiseModel<T>,
) -> ComplexMatrix2<T> {
    let mut out = h.commutator(lambda).scale(imag_unit::<T>());
    let half = T::lit(0.5);
    for term in noise.terms() {
        if term.rate == T::zero() {
            continue;
        }
        let jump = term.op_dag * *lambda * term.operator;
        let anti = term.op_dag_op.anticommutator(lambda);
        out += (jump - anti.scale_re(half)).scale_re(term.rate);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Channel;
    use crate::quantum::{pauli, DensityMatrix, Pauli};
    use crate::scalar::c;
    use proptest::prelude::*;

    type M = ComplexMatrix2<f64>;
    type D = DensityMatrix<f64>;

    fn preset(ch: Channel, g: f64) -> NoiseModel<f64> {
        NoiseModel::preset(ch, g).unwrap()
    }

    #[test]
    fn maximally_mixed_is_fixed_under_dephasing() {
        let d = lindblad_rhs(
            D::maximally_mixed().matrix(),
            &M::zero(),
            &preset(Channel::PhaseDamping, 3.7),
        );
        assert_eq!(d, M::zero());
    }

    #[test]
    fn ground_state_is_fixed_under_damping() {
        let d = lindblad_rhs(
            D::ground().matrix(),
            &M::zero(),
            &preset(Channel::AmplitudeDamping, 2.0),
        );
        assert_eq!(d, M::zero());
    }

    #[test]
    fn excited_state_decays() {
        // σ₋|1⟩⟨1|σ₊ = |0⟩⟨0| and {σ₊σ₋, |1⟩⟨1|} = 2|1⟩⟨1|
        let d = lindblad_rhs(
            D::excited().matrix(),
            &M::zero(),
            &preset(Channel::AmplitudeDamping, 1.0),
        );
        assert_eq!(d, M::from_real([1.0, 0.0, 0.0, -1.0]));
    }

    fn arb_state() -> impl Strategy<Value = M> {
        (
            0.0f64..std::f64::consts::PI,
            0.0f64..std::f64::consts::TAU,
            0.0f64..1.0,
        )
            .prop_map(|(th, ph, r)| {
                *D::from_bloch(
                    r * th.sin() * ph.cos(),
                    r * th.sin() * ph.sin(),
                    r * th.cos(),
                )
                .unwrap()
                .matrix()
            })
    }

    fn arb_hermitian() -> impl Strategy<Value = M> {
        prop::array::uniform4(-3.0f64..3.0)
            .prop_map(|v| M::new(c(v[0], 0.0), c(v[1], v[2]), c(v[1], -v[2]), c(v[3], 0.0)))
    }

    fn arb_noise() -> impl Strategy<Value = NoiseModel<f64>> {
        prop::array::uniform3(0.0f64..5.0).prop_map(|g| {
            NoiseModel::new([
                (pauli(Pauli::Minus), g[0]),
                (pauli(Pauli::Plus), g[1]),
                (pauli(Pauli::Z), g[2]),
            ])
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn generator_is_traceless_and_hermitian(rho in arb_state(), h in arb_hermitian(), noise in arb_noise()) {
            let d = lindblad_rhs(&rho, &h, &noise);
            prop_assert!(d.trace().norm() < 1e-12);
            prop_assert!(d.hermiticity_defect() < 1e-12);
        }

        #[test]
        fn adjoint_satisfies_duality(rho in arb_state(), lam in arb_hermitian(), h in arb_hermitian(), noise in arb_noise()) {
            // tr(λ L(ρ)) = tr(L†(λ) ρ)
            let lhs = (lam * lindblad_rhs(&rho, &h, &noise)).trace();
            let rhs = (adjoint_rhs(&lam, &h, &noise) * rho).trace();
            prop_assert!((lhs - rhs).norm() < 1e-11);
        }

        #[test]
        fn identity_is_conserved_by_adjoint(h in arb_hermitian(), noise in arb_noise()) {
            // trace preservation of the forward map
            prop_assert!(adjoint_rhs(&M::identity(), &h, &noise).frobenius_norm() < 1e-12);
        }
    }
}
