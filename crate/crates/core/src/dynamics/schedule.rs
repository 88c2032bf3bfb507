use crate::error::{Error, Result};
use crate::quantum::{Axis, ComplexMatrix2, ControlSegment, PulseTriple};
use crate::scalar::Real;

pub const GAME_SEGMENTS: usize = 9;

/// Axis layout of a full game: three Z-Y-Z rounds.
pub const GAME_AXES: [Axis; GAME_SEGMENTS] = [
    Axis::Z,
    Axis::Y,
    Axis::Z,
    Axis::Z,
    Axis::Y,
    Axis::Z,
    Axis::Z,
    Axis::Y,
    Axis::Z,
];

/// Piecewise-constant control Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule<T> {
    segments: Vec<ControlSegment<T>>,
}

impl<T: Real> Schedule<T> {
    pub fn new(segments: Vec<ControlSegment<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument(
                "schedule needs at least one segment".into(),
            ));
        }
        Ok(Self { segments })
    }

    /// Rounds A₁, B, A₂ laid out as nine segments of length `dt`.
    pub fn game(
        alice_first: &PulseTriple<T>,
        bob: &PulseTriple<T>,
        alice_second: &PulseTriple<T>,
        dt: T,
    ) -> Result<Self> {
        let mut segments = Vec::with_capacity(GAME_SEGMENTS);
        for p in [alice_first, bob, alice_second] {
            segments.extend(p.segments(dt)?);
        }
        Ok(Self { segments })
    }

    /// The nine coefficients `α` in round order.
    pub fn from_coefficients(alpha: &[T], dt: T) -> Result<Self> {
        if alpha.len() != GAME_SEGMENTS {
            return Err(Error::DimensionMismatch {
                expected: GAME_SEGMENTS,
                got: alpha.len(),
            });
        }
        let segments = alpha
            .iter()
            .zip(GAME_AXES)
            .map(|(&a, axis)| ControlSegment::new(a, axis, dt))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { segments })
    }

    /// `n` zero-amplitude segments of length `dt`.
    pub fn idle(n: usize, dt: T) -> Result<Self> {
        let segments = (0..n.max(1))
            .map(|_| ControlSegment::new(T::zero(), Axis::Z, dt))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[ControlSegment<T>] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().map(|s| s.duration()).sum()
    }

    /// Start time of each segment.
    pub fn start_times(&self) -> Vec<T> {
        let mut t = T::zero();
        self.segments
            .iter()
            .map(|s| {
                let start = t;
                t = t + s.duration();
                start
            })
            .collect()
    }

    /// True for the nine-segment Z,Y,Z,… layout with a common duration.
    pub fn is_game_layout(&self) -> bool {
        self.segments.len() == GAME_SEGMENTS
            && self
                .segments
                .iter()
                .zip(GAME_AXES)
                .all(|(s, a)| s.axis == a)
            && self
                .segments
                .iter()
                .all(|s| s.duration() == self.segments[0].duration())
    }

    /// Product of the segment unitaries, last segment leftmost.
    pub fn unitary(&self) -> ComplexMatrix2<T> {
        self.segments
            .iter()
            .fold(ComplexMatrix2::identity(), |acc, s| s.unitary() * acc)
    }
}
