use super::expm::expm_2x2;
use super::matrix::{pauli, ComplexMatrix2, Pauli};
use crate::error::{Error, Result};
use crate::scalar::{c, Real};

/// Control axis of one segment. Games only drive σz and σy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Z,
    Y,
}

impl Axis {
    /// `∂H/∂α` for a segment `H = α·σ`.
    pub fn generator<T: Real>(self) -> ComplexMatrix2<T> {
        match self {
            Axis::Z => pauli(Pauli::Z),
            Axis::Y => pauli(Pauli::Y),
        }
    }
}

/// A constant Hamiltonian `coefficient·σ_axis` held for `duration`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlSegment<T> {
    pub coefficient: T,
    pub axis: Axis,
    duration: T,
}

impl<T: Real> ControlSegment<T> {
    pub fn new(coefficient: T, axis: Axis, duration: T) -> Result<Self> {
        if !(duration > T::zero()) || !duration.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "segment duration {duration} must be > 0"
            )));
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidArgument(
                "non-finite pulse coefficient".into(),
            ));
        }
        Ok(Self {
            coefficient,
            axis,
            duration,
        })
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn hamiltonian(&self) -> ComplexMatrix2<T> {
        self.axis.generator::<T>().scale_re(self.coefficient)
    }

    /// `exp(-i·H·Δt)`
    pub fn unitary(&self) -> ComplexMatrix2<T> {
        expm_2x2(&self.hamiltonian().scale(c(T::zero(), -self.duration)))
    }
}

/// One player's controls for a single round, applied on axes Z, Y, Z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseTriple<T>(pub [T; 3]);

pub(crate) const TRIPLE_AXES: [Axis; 3] = [Axis::Z, Axis::Y, Axis::Z];

impl<T: Real> PulseTriple<T> {
    pub fn new(xi1: T, xi2: T, xi3: T) -> Self {
        Self([xi1, xi2, xi3])
    }

    pub fn zero() -> Self {
        Self([T::zero(); 3])
    }

    pub fn from_slice(v: &[T]) -> Result<Self> {
        match v {
            [a, b, d] => Ok(Self([*a, *b, *d])),
            _ => Err(Error::DimensionMismatch {
                expected: 3,
                got: v.len(),
            }),
        }
    }

    pub fn coefficients(&self) -> [T; 3] {
        self.0
    }

    pub fn segments(&self, dt: T) -> Result<[ControlSegment<T>; 3]> {
        Ok([
            ControlSegment::new(self.0[0], TRIPLE_AXES[0], dt)?,
            ControlSegment::new(self.0[1], TRIPLE_AXES[1], dt)?,
            ControlSegment::new(self.0[2], TRIPLE_AXES[2], dt)?,
        ])
    }
}

/// `U = e^{-i ξ₃ σz Δt} · e^{-i ξ₂ σy Δt} · e^{-i ξ₁ σz Δt}`.
pub fn gate_from_pulses<T: Real>(p: &PulseTriple<T>, dt: T) -> Result<ComplexMatrix2<T>> {
    let [s1, s2, s3] = p.segments(dt)?;
    Ok(s3.unitary() * s2.unitary() * s1.unitary())
}

/// The four gates of the Pauli strategy and the pulses that realise them
/// at `Δt = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliGate {
    I,
    X,
    Y,
    Z,
}

impl PauliGate {
    pub const ALL: [PauliGate; 4] = [PauliGate::I, PauliGate::X, PauliGate::Y, PauliGate::Z];

    pub fn pulses<T: Real>(self) -> PulseTriple<T> {
        let q = T::FRAC_PI_4();
        let h = T::FRAC_PI_2();
        let o = T::zero();
        match self {
            PauliGate::I => PulseTriple::new(o, o, o),
            PauliGate::X => PulseTriple::new(q, -h, -q),
            PauliGate::Y => PulseTriple::new(o, -h, o),
            PauliGate::Z => PulseTriple::new(-q, o, -q),
        }
    }

    /// `1`, `iσx`, `iσy` or `iσz`.
    pub fn matrix<T: Real>(self) -> ComplexMatrix2<T> {
        let i = c(T::zero(), T::one());
        match self {
            PauliGate::I => ComplexMatrix2::identity(),
            PauliGate::X => pauli::<T>(Pauli::X).scale(i),
            PauliGate::Y => pauli::<T>(Pauli::Y).scale(i),
            PauliGate::Z => pauli::<T>(Pauli::Z).scale(i),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PauliGate::I => "I",
            PauliGate::X => "X",
            PauliGate::Y => "Y",
            PauliGate::Z => "Z",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "ID" | "1" => Some(PauliGate::I),
            "X" | "IX" => Some(PauliGate::X),
            "Y" | "IY" => Some(PauliGate::Y),
            "Z" | "IZ" => Some(PauliGate::Z),
            _ => None,
        }
    }
}
