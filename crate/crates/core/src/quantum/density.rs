use num_complex::Complex;

use super::matrix::ComplexMatrix2;
use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// State of the quantum coin: a Hermitian, unit-trace, positive semidefinite
/// 2×2 matrix.
///
/// Validation uses absolute tolerances: Hermiticity `1e-12` entrywise, trace
/// `1e-9`, smallest eigenvalue `>= -1e-9`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    m: ComplexMatrix2<T>,
}

pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const TRACE_TOL: f64 = 1e-9;
pub(crate) const PSD_TOL: f64 = 1e-9;

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: ComplexMatrix2<T>) -> Result<Self> {
        Self::check(
            &m,
            T::tol(HERMITIAN_TOL),
            T::tol(TRACE_TOL),
            T::tol(PSD_TOL),
        )?;
        Ok(Self { m })
    }

    /// Wraps `m` without checks. Callers must guarantee the invariants, e.g.
    /// because `m` came out of a trace-preserving integrator.
    pub fn new_unchecked(m: ComplexMatrix2<T>) -> Self {
        Self { m }
    }

    /// Checks the invariants against explicit tolerances.
    pub fn check(m: &ComplexMatrix2<T>, herm_tol: T, trace_tol: T, psd_tol: T) -> Result<()> {
        if !m.is_finite() {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = m.hermiticity_defect();
        if herm > herm_tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm})"
            )));
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let (lo, _) = hermitian_eigenvalues(m);
        if lo < -psd_tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo}")));
        }
        Ok(())
    }

    /// Pure state `|ψ⟩⟨ψ|`, with `ψ` normalised here.
    pub fn pure(psi: [Complex<T>; 2]) -> Result<Self> {
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        let psi = psi.map(|a| a / norm);
        Ok(Self {
            m: ComplexMatrix2::outer(psi, psi),
        })
    }

    /// `|0⟩⟨0|`, heads.
    pub fn ground() -> Self {
        Self {
            m: ComplexMatrix2::diag(re(T::one()), re(T::zero())),
        }
    }

    /// `|1⟩⟨1|`, tails.
    pub fn excited() -> Self {
        Self {
            m: ComplexMatrix2::diag(re(T::zero()), re(T::one())),
        }
    }

    /// `|+⟩⟨+|` with `|+⟩ = (|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = T::lit(0.5);
        Self {
            m: ComplexMatrix2::from_real([h, h, h, h]),
        }
    }

    pub fn maximally_mixed() -> Self {
        let h = T::lit(0.5);
        Self {
            m: ComplexMatrix2::diag(re(h), re(h)),
        }
    }

    pub fn from_bloch(x: T, y: T, z: T) -> Result<Self> {
        let h = T::lit(0.5);
        let m = ComplexMatrix2::new(
            re(h * (T::one() + z)),
            Complex::new(h * x, -h * y),
            Complex::new(h * x, h * y),
            re(h * (T::one() - z)),
        );
        Self::new(m)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix2<T> {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix2<T> {
        self.m
    }

    /// Population of `|0⟩`.
    pub fn p0(&self) -> T {
        self.m.get(0, 0).re
    }

    /// Population of `|1⟩`.
    pub fn p1(&self) -> T {
        self.m.get(1, 1).re
    }

    /// `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch(&self) -> [T; 3] {
        let off = self.m.get(1, 0);
        let two = T::lit(2.0);
        [two * off.re, two * off.im, self.p0() - self.p1()]
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> T {
        (self.m * self.m).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (T, T) {
        hermitian_eigenvalues(&self.m)
    }

    /// The diagonal part, i.e. the state after full dephasing.
    pub fn diagonal(&self) -> Self {
        Self {
            m: ComplexMatrix2::diag(self.m.get(0, 0), self.m.get(1, 1)),
        }
    }

    /// Probability-weighted mixture. Weights must be non-negative and sum to one.
    pub fn mixture<'a, I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, &'a DensityMatrix<T>)>,
    {
        let mut acc = ComplexMatrix2::zero();
        for (w, rho) in parts {
            acc += rho.m.scale_re(w);
        }
        Self::new(acc)
    }
}

/// Eigenvalues of the Hermitian part of a 2×2 matrix, ascending.
pub(crate) fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix2<T>) -> (T, T) {
    let half = T::lit(0.5);
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = (m.get(0, 1) + m.get(1, 0).conj()) * half;
    let mean = (a + d) * half;
    let r = ((a - d) * half).hypot(b.norm());
    (mean - r, mean + r)
}

/// `tr(obs·ρ)` for a Hermitian observable.
///
/// Panics if `obs` is not Hermitian: that is a caller bug, not a runtime
/// condition.
pub fn expectation<T: Real>(obs: &ComplexMatrix2<T>, rho: &DensityMatrix<T>) -> T {
    assert!(
        obs.is_hermitian(T::tol(HERMITIAN_TOL)),
        "expectation requires a Hermitian observable"
    );
    let v = (*obs * rho.m).trace();
    debug_assert!(v.im.abs() < T::tol(1e-12), "complex expectation value {v}");
    v.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli, Pauli};
    use crate::scalar::c;
    use proptest::prelude::*;

    type D = DensityMatrix<f64>;
    type M = ComplexMatrix2<f64>;

    #[test]
    fn sigma_z_expectations() {
        let z = pauli(Pauli::Z);
        assert_eq!(expectation(&z, &D::ground()), 1.0);
        assert_eq!(expectation(&z, &D::excited()), -1.0);
        assert_eq!(expectation(&pauli(Pauli::X), &D::maximally_mixed()), 0.0);
    }

    #[test]
    #[should_panic(expected = "Hermitian")]
    fn non_hermitian_observable_is_rejected() {
        expectation(&pauli::<f64>(Pauli::Minus), &D::ground());
    }

    #[test]
    fn rejects_bad_states() {
        assert!(D::new(M::identity()).is_err());
        assert!(D::new(pauli(Pauli::Minus)).is_err());
        // trace one but eigenvalues (-0.2, 1.2)
        assert!(D::new(M::from_real([1.2, 0.0, 0.0, -0.2])).is_err());
        assert!(D::new(M::from_real([f64::NAN, 0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn accepts_small_numerical_noise() {
        let m = M::new(
            c(0.5 + 5e-10, 0.0),
            c(0.5, 1e-13),
            c(0.5, -1e-13),
            c(0.5 - 4e-10, 0.0),
        );
        assert!(D::new(m).is_ok());
    }

    #[test]
    fn bloch_of_named_states() {
        assert_eq!(D::plus().bloch(), [1.0, 0.0, 0.0]);
        assert_eq!(D::ground().bloch(), [0.0, 0.0, 1.0]);
        let y = D::pure([c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let b = y.bloch();
        assert!((b[1] - 1.0).abs() < 1e-15 && b[0].abs() < 1e-15);
        assert!((y.purity() - 1.0).abs() < 1e-15);
        assert_eq!(D::maximally_mixed().purity(), 0.5);
    }

    proptest! {
        #[test]
        fn bloch_round_trip(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU, r in 0.0f64..1.0) {
            let (x, y, z) = (r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos());
            let rho = D::from_bloch(x, y, z).unwrap();
            let b = rho.bloch();
            prop_assert!((b[0] - x).abs() < 1e-14 && (b[1] - y).abs() < 1e-14 && (b[2] - z).abs() < 1e-14);
            let (lo, hi) = rho.eigenvalues();
            prop_assert!((lo - 0.5 * (1.0 - r)).abs() < 1e-12 && (hi - 0.5 * (1.0 + r)).abs() < 1e-12);
        }

        #[test]
        fn expectation_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x in -0.5f64..0.5, z in -0.5f64..0.5) {
            let rho = D::from_bloch(x, 0.3, z).unwrap();
            let (sx, sz) = (pauli::<f64>(Pauli::X), pauli::<f64>(Pauli::Z));
            let combo = sx.scale_re(a) + sz.scale_re(b);
            let lhs = expectation(&combo, &rho);
            let rhs = a * expectation(&sx, &rho) + b * expectation(&sz, &rho);
            prop_assert!((lhs - rhs).abs() < 1e-14);
        }
    }
}
