use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{c, re, Real};

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix2<T> {
    e: [Complex<T>; 4],
}

/// The named single-qubit operators. Basis convention: `|0⟩ = (1, 0)ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// σ₊ = |1⟩⟨0|
    Plus,
    /// σ₋ = |0⟩⟨1|
    Minus,
    Id,
}

pub fn pauli<T: Real>(which: Pauli) -> ComplexMatrix2<T> {
    let (o, l) = (T::zero(), T::one());
    match which {
        Pauli::X => ComplexMatrix2::from_real([o, l, l, o]),
        Pauli::Y => ComplexMatrix2::new(re(o), c(o, -l), c(o, l), re(o)),
        Pauli::Z => ComplexMatrix2::from_real([l, o, o, -l]),
        Pauli::Plus => ComplexMatrix2::from_real([o, o, l, o]),
        Pauli::Minus => ComplexMatrix2::from_real([o, l, o, o]),
        Pauli::Id => ComplexMatrix2::identity(),
    }
}

impl<T: Real> ComplexMatrix2<T> {
    #[inline]
    pub fn new(a00: Complex<T>, a01: Complex<T>, a10: Complex<T>, a11: Complex<T>) -> Self {
        Self {
            e: [a00, a01, a10, a11],
        }
    }

    pub fn from_real(entries: [T; 4]) -> Self {
        Self { e: entries.map(re) }
    }

    pub fn zero() -> Self {
        Self {
            e: [Complex::new(T::zero(), T::zero()); 4],
        }
    }

    pub fn identity() -> Self {
        Self::diag(re(T::one()), re(T::one()))
    }

    pub fn diag(d0: Complex<T>, d1: Complex<T>) -> Self {
        let z = re(T::zero());
        Self::new(d0, z, z, d1)
    }

    /// `|ψ⟩⟨φ|`.
    pub fn outer(psi: [Complex<T>; 2], phi: [Complex<T>; 2]) -> Self {
        Self::new(
            psi[0] * phi[0].conj(),
            psi[0] * phi[1].conj(),
            psi[1] * phi[0].conj(),
            psi[1] * phi[1].conj(),
        )
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.e[2 * row + col]
    }

    #[inline]
    pub fn entries(&self) -> [Complex<T>; 4] {
        self.e
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c_, d] = self.e;
        Self::new(a.conj(), c_.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> Complex<T> {
        self.e[0] + self.e[3]
    }

    pub fn det(&self) -> Complex<T> {
        self.e[0] * self.e[3] - self.e[1] * self.e[2]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            e: self.e.map(|x| x * s),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        Self {
            e: self.e.map(|x| x * s),
        }
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    pub fn frobenius_norm_sqr(&self) -> T {
        self.e.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.frobenius_norm_sqr().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.e
            .iter()
            .zip(other.e.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl<T: Real> Add for ComplexMatrix2<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.e, rhs.e);
        Self {
            e: [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
        }
    }
}

impl<T: Real> AddAssign for ComplexMatrix2<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for ComplexMatrix2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.e, rhs.e);
        Self {
            e: [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]],
        }
    }
}

impl<T: Real> Neg for ComplexMatrix2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            e: self.e.map(|x| -x),
        }
    }
}

impl<T: Real> Mul for ComplexMatrix2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.e, rhs.e);
        Self {
            e: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
    }
}
