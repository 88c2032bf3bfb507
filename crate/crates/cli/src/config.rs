//! Run configuration, read from a single JSON document.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use qflip::game::pauli_strategy;
use qflip::{Channel, DensityMatrix, PauliGate, PulseTriple, Role, Strategy};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate,
    Sweep,
    Optimize,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Optimize => "optimize",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Ground,
    Excited,
    Plus,
    Mixed,
}

impl InitialState {
    pub fn density(self) -> DensityMatrix<f64> {
        match self {
            InitialState::Ground => DensityMatrix::ground(),
            InitialState::Excited => DensityMatrix::excited(),
            InitialState::Plus => DensityMatrix::plus(),
            InitialState::Mixed => DensityMatrix::maximally_mixed(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleName {
    Alice,
    Bob,
}

impl From<RoleName> for Role {
    fn from(r: RoleName) -> Role {
        match r {
            RoleName::Alice => Role::Alice,
            RoleName::Bob => Role::Bob,
        }
    }
}

/// Linearly spaced rates, both ends included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GammaRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportPoint {
    pub pulses: [f64; 3],
    pub probability: f64,
}

/// How one player chooses pulses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategySpec {
    /// Uniformly random Pauli gate, independently in every round.
    Pauli,
    /// Zero pulses in every round.
    Identity,
    /// One pulse triple per round.
    Pulses { pulses: Vec<[f64; 3]> },
    /// One named gate (`I`, `X`, `Y`, `Z`) per round.
    Gates { gates: Vec<String> },
    /// Independent draw from `support` in every round.
    Mixed { support: Vec<SupportPoint> },
}

impl StrategySpec {
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, StrategySpec::Pauli | StrategySpec::Mixed { .. })
    }

    pub fn build(&self, role: Role, field: &str) -> Result<Strategy<f64>, CliError> {
        let rounds = role.rounds();
        let check_len = |n: usize| {
            if n == rounds {
                Ok(())
            } else {
                Err(CliError::config(
                    field,
                    format!("{} plays {rounds} round(s), got {n}", role.name()),
                ))
            }
        };
        let strategy = match self {
            StrategySpec::Pauli => pauli_strategy(role),
            StrategySpec::Identity => Strategy::identity(role),
            StrategySpec::Pulses { pulses } => {
                check_len(pulses.len())?;
                let rounds = pulses.iter().map(|p| PulseTriple(*p)).collect();
                Strategy::deterministic(role, rounds)
                    .map_err(|e| CliError::config(&format!("{field}.pulses"), e.to_string()))?
            }
            StrategySpec::Gates { gates } => {
                check_len(gates.len())?;
                let rounds = gates
                    .iter()
                    .map(|g| {
                        PauliGate::parse(g).map(|g| g.pulses()).ok_or_else(|| {
                            CliError::config(
                                &format!("{field}.gates"),
                                format!("unknown gate `{g}`"),
                            )
                        })
                    })
                    .collect::<Result<_, _>>()?;
                Strategy::deterministic(role, rounds)
                    .map_err(|e| CliError::config(&format!("{field}.gates"), e.to_string()))?
            }
            StrategySpec::Mixed { support } => {
                let points = support
                    .iter()
                    .map(|s| (PulseTriple(s.pulses), s.probability))
                    .collect();
                Strategy::mixed(role, points)
                    .map_err(|e| CliError::config(&format!("{field}.support"), e.to_string()))?
            }
        };
        Ok(strategy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default)]
    pub role: Option<RoleName>,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grad_tol")]
    pub grad_tol: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub bounds: Option<[f64; 2]>,
    #[serde(default)]
    pub initial_guess: Option<Vec<f64>>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            role: None,
            starts: default_starts(),
            seed: 0,
            grad_tol: default_grad_tol(),
            max_iterations: default_max_iterations(),
            bounds: None,
            initial_guess: None,
        }
    }
}

fn default_starts() -> usize {
    16
}

fn default_grad_tol() -> f64 {
    1e-6
}

fn default_max_iterations() -> usize {
    500
}

fn default_steps() -> usize {
    qflip::dynamics::DEFAULT_STEPS_PER_SEGMENT
}

fn default_dt() -> f64 {
    1.0
}

fn default_pauli() -> StrategySpec {
    StrategySpec::Pauli
}

fn default_initial() -> InitialState {
    InitialState::Ground
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepColumns {
    #[serde(default)]
    pub optimize_alice: bool,
    #[serde(default)]
    pub optimize_bob: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// `none` or a preset channel name.
    #[serde(default = "default_channel")]
    pub channel: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_range: Option<GammaRange>,
    #[serde(default = "default_initial")]
    pub initial_state: InitialState,
    #[serde(default = "default_steps")]
    pub steps_per_segment: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// All nine coefficients in game order; replaces `alice` and `bob`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "default_pauli")]
    pub alice: StrategySpec,
    #[serde(default = "default_pauli")]
    pub bob: StrategySpec,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub sweep: SweepColumns,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_channel() -> String {
    "none".into()
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("every field has a default")
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub gamma: Option<f64>,
    pub channel: Option<String>,
    pub steps_per_segment: Option<usize>,
    pub starts: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." {
                "<root>".to_string()
            } else {
                path
            };
            CliError::config(&field, e.into_inner().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config("--config", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.optimizer.seed = seed;
        }
        if let Some(dir) = &o.out_dir {
            self.out_dir = Some(dir.clone());
        }
        if let Some(g) = o.gamma {
            self.gamma = Some(g);
            self.gamma_range = None;
        }
        if let Some(ch) = &o.channel {
            self.channel = ch.clone();
        }
        if let Some(n) = o.steps_per_segment {
            self.steps_per_segment = n;
        }
        if let Some(n) = o.starts {
            self.optimizer.starts = n;
        }
    }

    /// `None` for a noiseless run.
    pub fn channel(&self) -> Result<Option<Channel>, CliError> {
        if self.channel.eq_ignore_ascii_case("none") {
            return Ok(None);
        }
        Channel::from_str(&self.channel)
            .map(Some)
            .map_err(|e| CliError::config("channel", e.to_string()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// The single rate used by `simulate` and `optimize`.
    pub fn single_gamma(&self) -> Result<f64, CliError> {
        if self.gamma_range.is_some() {
            return Err(CliError::config(
                "gamma_range",
                "only `sweep` accepts a range; use `gamma`",
            ));
        }
        let g = self.gamma.unwrap_or(0.0);
        check_gamma(g, "gamma")?;
        if g > 0.0 && self.channel()?.is_none() {
            return Err(CliError::config(
                "channel",
                "a positive gamma needs a noise channel",
            ));
        }
        Ok(g)
    }

    /// Rates visited by `sweep`, in output order.
    pub fn gammas(&self) -> Result<Vec<f64>, CliError> {
        let values = match (&self.gamma, &self.gamma_range) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "gamma_range",
                    "give either `gamma` or `gamma_range`",
                ))
            }
            (Some(g), None) => vec![*g],
            (None, Some(r)) => {
                if r.count == 0 {
                    return Err(CliError::config("gamma_range.count", "must be >= 1"));
                }
                if !r.start.is_finite() || !r.stop.is_finite() {
                    return Err(CliError::config("gamma_range", "endpoints must be finite"));
                }
                r.values()
            }
            (None, None) => {
                return Err(CliError::config(
                    "gamma_range",
                    "sweep needs `gamma` or `gamma_range`",
                ))
            }
        };
        for g in &values {
            check_gamma(
                *g,
                if self.gamma.is_some() {
                    "gamma"
                } else {
                    "gamma_range"
                },
            )?;
        }
        if self.channel()?.is_none() {
            return Err(CliError::config("channel", "sweep needs a noise channel"));
        }
        Ok(values)
    }

    pub fn check_numerics(&self) -> Result<(), CliError> {
        if self.steps_per_segment == 0 {
            return Err(CliError::config("steps_per_segment", "must be >= 1"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(CliError::config("dt", "must be finite and > 0"));
        }
        let o = &self.optimizer;
        if o.starts == 0 {
            return Err(CliError::config("optimizer.starts", "must be >= 1"));
        }
        if !(o.grad_tol.is_finite() && o.grad_tol > 0.0) {
            return Err(CliError::config(
                "optimizer.grad_tol",
                "must be finite and > 0",
            ));
        }
        if let Some([lo, hi]) = o.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::config("optimizer.bounds", "need finite lo < hi"));
            }
        }
        Ok(())
    }

    /// Alice's and Bob's strategies, or the nine `alpha` coefficients split
    /// into deterministic rounds.
    pub fn strategies(&self) -> Result<(Strategy<f64>, Strategy<f64>), CliError> {
        if let Some(alpha) = &self.alpha {
            if alpha.len() != 9 {
                return Err(CliError::config(
                    "alpha",
                    format!("needs 9 coefficients, got {}", alpha.len()),
                ));
            }
            if alpha.iter().any(|a| !a.is_finite()) {
                return Err(CliError::config("alpha", "coefficients must be finite"));
            }
            let t = |i: usize| PulseTriple([alpha[i], alpha[i + 1], alpha[i + 2]]);
            let alice = Strategy::deterministic(Role::Alice, vec![t(0), t(6)]).expect("two rounds");
            let bob = Strategy::deterministic(Role::Bob, vec![t(3)]).expect("one round");
            return Ok((alice, bob));
        }
        Ok((
            self.alice.build(Role::Alice, "alice")?,
            self.bob.build(Role::Bob, "bob")?,
        ))
    }
}

fn check_gamma(g: f64, field: &str) -> Result<(), CliError> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(CliError::config(
            field,
            format!("rate must be finite and >= 0, got {g}"),
        ))
    }
}
