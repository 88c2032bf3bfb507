use num_complex::Complex;

use super::matrix::ComplexMatrix2;
use crate::scalar::{re, Real};

/// Matrix exponential of a 2×2 complex matrix in closed form.
///
/// Writes `m = c·I + B` with `B` traceless, so that `B² = δ·I` and
/// `exp(m) = e^c (cosh(√δ)·I + sinh(√δ)/√δ·B)`. Both functions of `√δ` are
/// even, so the branch of the square root is irrelevant. Near `δ = 0` the
/// ratio is replaced by its Taylor series in `δ`.
pub fn expm_2x2<T: Real>(m: &ComplexMatrix2<T>) -> ComplexMatrix2<T> {
    let half = T::lit(0.5);
    let shift = m.trace() * half;
    let b = *m - ComplexMatrix2::identity().scale(shift);
    let delta = b.get(0, 0) * b.get(0, 0) + b.get(0, 1) * b.get(1, 0);

    let (cosh_s, sinhc_s) = if delta.norm() < T::lit(1e-8) {
        taylor_even(delta)
    } else {
        let s = delta.sqrt();
        (s.cosh(), s.sinh() / s)
    };

    let scale = shift.exp();
    (ComplexMatrix2::identity().scale(cosh_s) + b.scale(sinhc_s)).scale(scale)
}

/// `(cosh √δ, sinh √δ / √δ)` through third order in `δ`.
fn taylor_even<T: Real>(delta: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = re(T::one());
    let d2 = delta * delta;
    let d3 = d2 * delta;
    let cosh = one + delta / T::lit(2.0) + d2 / T::lit(24.0) + d3 / T::lit(720.0);
    let sinhc = one + delta / T::lit(6.0) + d2 / T::lit(120.0) + d3 / T::lit(5040.0);
    (cosh, sinhc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli, Pauli};
    use crate::scalar::c;
    use proptest::prelude::*;

    type M = ComplexMatrix2<f64>;

    /// Scaling and squaring with a plain Taylor series, independent of the
    /// closed form above.
    fn expm_oracle(m: &M) -> M {
        let norm = m.frobenius_norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = m.scale_re(0.5f64.powi(squarings as i32));
        let mut term = M::identity();
        let mut sum = M::identity();
        for k in 1..30 {
            term = (term * a).scale_re(1.0 / k as f64);
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn zero_maps_to_identity() {
        assert_eq!(expm_2x2(&M::zero()), M::identity());
    }

    #[test]
    fn quarter_turn_about_y() {
        let theta = std::f64::consts::FRAC_PI_2;
        let m = pauli::<f64>(Pauli::Y).scale(c(0.0, -theta));
        let expected = M::from_real([0.0, -1.0, 1.0, 0.0]);
        assert!(expm_2x2(&m).max_abs_diff(&expected) < 1e-15);
        let minus_i_sy = pauli::<f64>(Pauli::Y).scale(c(0.0, -1.0));
        assert!(expm_2x2(&m).max_abs_diff(&minus_i_sy) < 1e-15);
    }

    #[test]
    fn diagonal_exponentiates_entrywise() {
        let m = M::diag(c(0.3, -1.2), c(-2.0, 0.5));
        let expected = M::diag(c(0.3, -1.2).exp(), c(-2.0, 0.5).exp());
        assert!(expm_2x2(&m).max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn nilpotent_uses_series_branch() {
        let m = pauli::<f64>(Pauli::Minus).scale_re(3.0);
        let expected = M::identity() + m;
        assert!(expm_2x2(&m).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn single_precision_agrees() {
        let m = ComplexMatrix2::<f32>::new(c(0.1, 0.2), c(-0.4, 0.0), c(0.3, 0.7), c(-0.5, 0.1));
        let m64 = M::new(c(0.1, 0.2), c(-0.4, 0.0), c(0.3, 0.7), c(-0.5, 0.1));
        let (a, b) = (expm_2x2(&m), expm_2x2(&m64));
        for r in 0..2 {
            for k in 0..2 {
                let d = a.get(r, k);
                assert!((d.re as f64 - b.get(r, k).re).abs() < 1e-5);
                assert!((d.im as f64 - b.get(r, k).im).abs() < 1e-5);
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = M> {
        prop::array::uniform8(-5.0f64..5.0)
            .prop_map(|v| M::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])))
    }

    fn arb_real_matrix() -> impl Strategy<Value = M> {
        prop::array::uniform4(-5.0f64..5.0).prop_map(M::from_real)
    }

    fn arb_generator() -> impl Strategy<Value = M> {
        // −iH·t plus a dissipative diagonal, the shape met in the dynamics
        (prop::array::uniform4(-5.0f64..5.0), 0.0f64..5.0).prop_map(|(v, g)| {
            let h = M::new(c(v[0], 0.0), c(v[1], v[2]), c(v[1], -v[2]), c(v[3], 0.0));
            h.scale(c(0.0, -1.0)) - M::diag(c(0.0, 0.0), c(0.5 * g, 0.0))
        })
    }

    proptest! {
        #[test]
        fn inverse_is_exp_of_negation(m in arb_real_matrix()) {
            let p = expm_2x2(&m) * expm_2x2(&-m);
            prop_assert!(p.max_abs_diff(&M::identity()) < 1e-10);
        }

        #[test]
        fn inverse_of_generators(m in arb_generator()) {
            let p = expm_2x2(&m) * expm_2x2(&-m);
            prop_assert!(p.max_abs_diff(&M::identity()) < 1e-10);
        }

        #[test]
        fn agrees_with_scaled_series(m in arb_matrix()) {
            let closed = expm_2x2(&m);
            let series = expm_oracle(&m);
            let scale = series.frobenius_norm().max(1.0);
            prop_assert!(closed.max_abs_diff(&series) / scale < 1e-11);
        }

        #[test]
        fn near_degenerate_invariant_is_continuous(eps in -1e-5f64..1e-5, off in -1.0f64..1.0) {
            // δ = eps² + eps·off sits on both sides of the series threshold
            let m = M::new(c(eps, 0.0), c(off, 0.0), c(eps, 0.0), c(-eps, 0.0));
            let series = expm_oracle(&m);
            prop_assert!(expm_2x2(&m).max_abs_diff(&series) < 1e-13);
        }
    }
}
