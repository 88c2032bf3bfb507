use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quantum::{pauli, ComplexMatrix2, Pauli};
use crate::scalar::Real;

/// The three decoherence channels the game is studied under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `L = σ₋`, decay towards `|0⟩`.
    AmplitudeDamping,
    /// `L = σ₊`, pumping towards `|1⟩`.
    AmplitudeRaising,
    /// `L = σz`, dephasing.
    PhaseDamping,
}

impl Channel {
    pub const ALL: [Channel; 3] = [
        Channel::AmplitudeDamping,
        Channel::AmplitudeRaising,
        Channel::PhaseDamping,
    ];

    pub fn operator<T: Real>(self) -> ComplexMatrix2<T> {
        match self {
            Channel::AmplitudeDamping => pauli(Pauli::Minus),
            Channel::AmplitudeRaising => pauli(Pauli::Plus),
            Channel::PhaseDamping => pauli(Pauli::Z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::AmplitudeDamping => "amplitude-damping",
            Channel::AmplitudeRaising => "amplitude-raising",
            Channel::PhaseDamping => "phase-damping",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "amplitude-damping" | "ad" | "sminus" => Ok(Channel::AmplitudeDamping),
            "amplitude-raising" | "ar" | "splus" => Ok(Channel::AmplitudeRaising),
            "phase-damping" | "pd" | "sz" => Ok(Channel::PhaseDamping),
            other => Err(Error::InvalidArgument(format!("unknown channel '{other}'"))),
        }
    }
}

/// One dissipator term `γ (L ρ L† − ½{L†L, ρ})`, with the products cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindbladTerm<T> {
    pub operator: ComplexMatrix2<T>,
    pub rate: T,
    pub(crate) op_dag: ComplexMatrix2<T>,
    pub(crate) op_dag_op: ComplexMatrix2<T>,
}

impl<T: Real> LindbladTerm<T> {
    pub fn new(operator: ComplexMatrix2<T>, rate: T) -> Result<Self> {
        if !(rate >= T::zero()) || !rate.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "decoherence rate {rate} must be >= 0"
            )));
        }
        if !operator.is_finite() {
            return Err(Error::InvalidArgument(
                "non-finite Lindblad operator".into(),
            ));
        }
        let op_dag = operator.adjoint();
        Ok(Self {
            operator,
            rate,
            op_dag,
            op_dag_op: op_dag * operator,
        })
    }
}

/// The dissipative part of the master equation.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NoiseModel<T> {
    terms: Vec<LindbladTerm<T>>,
}

impl<T: Real> NoiseModel<T> {
    pub fn noiseless() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn new(channels: impl IntoIterator<Item = (ComplexMatrix2<T>, T)>) -> Result<Self> {
        let terms = channels
            .into_iter()
            .map(|(op, rate)| LindbladTerm::new(op, rate))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    pub fn preset(channel: Channel, gamma: T) -> Result<Self> {
        Self::new([(channel.operator(), gamma)])
    }

    pub fn terms(&self) -> &[LindbladTerm<T>] {
        &self.terms
    }

    pub fn is_noiseless(&self) -> bool {
        self.terms.iter().all(|t| t.rate == T::zero())
    }
}
