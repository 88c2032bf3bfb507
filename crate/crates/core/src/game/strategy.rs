use crate::error::{Error, Result};
use crate::quantum::{PauliGate, PulseTriple};
use crate::scalar::Real;

/// Alice moves in rounds one and three, Bob in round two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    pub fn rounds(self) -> usize {
        match self {
            Role::Alice => 2,
            Role::Bob => 1,
        }
    }

    pub fn opponent(self) -> Role {
        match self {
            Role::Alice => Role::Bob,
            Role::Bob => Role::Alice,
        }
    }

    /// Indices of this player's segments in the nine-segment schedule.
    pub fn segment_indices(self) -> &'static [usize] {
        match self {
            Role::Alice => &[0, 1, 2, 6, 7, 8],
            Role::Bob => &[3, 4, 5],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::Alice => "alice",
            Role::Bob => "bob",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StrategyKind<T> {
    /// Fixed pulses, one triple per round.
    Deterministic(Vec<PulseTriple<T>>),
    /// A distribution over triples, drawn independently in every round.
    Mixed(Vec<(PulseTriple<T>, T)>),
}

/// One realisation of a strategy with its probability.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<T> {
    pub rounds: Vec<PulseTriple<T>>,
    pub probability: T,
    /// Support index chosen in each round (all zero for deterministic play).
    pub choice: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Strategy<T> {
    role: Role,
    kind: StrategyKind<T>,
}

const PROBABILITY_TOL: f64 = 1e-12;

impl<T: Real> Strategy<T> {
    pub fn deterministic(role: Role, rounds: Vec<PulseTriple<T>>) -> Result<Self> {
        if rounds.len() != role.rounds() {
            return Err(Error::DimensionMismatch {
                expected: role.rounds(),
                got: rounds.len(),
            });
        }
        Ok(Self {
            role,
            kind: StrategyKind::Deterministic(rounds),
        })
    }

    pub fn mixed(role: Role, support: Vec<(PulseTriple<T>, T)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidArgument(
                "mixed strategy needs a support".into(),
            ));
        }
        if support.iter().any(|(_, p)| !(*p >= T::zero())) {
            return Err(Error::InvalidArgument("negative probability".into()));
        }
        let total: T = support.iter().map(|(_, p)| *p).sum();
        if (total - T::one()).abs() > T::tol(PROBABILITY_TOL) {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self {
            role,
            kind: StrategyKind::Mixed(support),
        })
    }

    /// Identity pulses in every round.
    pub fn identity(role: Role) -> Self {
        Self {
            role,
            kind: StrategyKind::Deterministic(vec![PulseTriple::zero(); role.rounds()]),
        }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn kind(&self) -> &StrategyKind<T> {
        &self.kind
    }

    /// Every realisation, enumerated with the first round outermost.
    pub fn branches(&self) -> Vec<Branch<T>> {
        match &self.kind {
            StrategyKind::Deterministic(rounds) => vec![Branch {
                rounds: rounds.clone(),
                probability: T::one(),
                choice: vec![0; rounds.len()],
            }],
            StrategyKind::Mixed(support) => {
                let mut out = vec![Branch {
                    rounds: Vec::new(),
                    probability: T::one(),
                    choice: Vec::new(),
                }];
                for _ in 0..self.role.rounds() {
                    out = out
                        .into_iter()
                        .flat_map(|b| {
                            support.iter().enumerate().map(move |(i, (p, w))| {
                                let mut next = b.clone();
                                next.rounds.push(*p);
                                next.probability = next.probability * *w;
                                next.choice.push(i);
                                next
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }
}

/// Uniform mixture of the four Pauli gates in every round.
pub fn pauli_strategy<T: Real>(role: Role) -> Strategy<T> {
    let q = T::lit(0.25);
    Strategy {
        role,
        kind: StrategyKind::Mixed(PauliGate::ALL.iter().map(|g| (g.pulses(), q)).collect()),
    }
}
