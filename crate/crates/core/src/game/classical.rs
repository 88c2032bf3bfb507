/// A classical move on the hidden coin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalMove {
    /// No flip.
    N,
    /// Flip.
    F,
}

impl ClassicalMove {
    pub const ALL: [ClassicalMove; 2] = [ClassicalMove::N, ClassicalMove::F];
}

/// Bob's payoff for the classical game. The coin starts heads up; moves are
/// applied as Alice, Bob, Alice; heads at the end pays Bob `+1`, tails `-1`.
pub fn classical_payoff(alice: (ClassicalMove, ClassicalMove), bob: ClassicalMove) -> i32 {
    let flips = [alice.0, bob, alice.1]
        .iter()
        .filter(|&&m| m == ClassicalMove::F)
        .count();
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}
