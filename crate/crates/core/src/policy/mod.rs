//! Comparison policies: given a challenger and the incumbent, spend
//! evaluations through the oracle and decide which one survives.

mod fixed;
mod reactive;
mod ssm;

pub use fixed::fixed_compare;
pub use reactive::{reactive_compare, statistical_guard, ComparisonState, GuardCheck, GuardParams};
pub use ssm::{ssm_compare, ContinuationRegion, IndifferenceZone, SsmParams};

use std::fmt;

use crate::oracle::{Configuration, Oracle, OracleError, Regime, StochasticObjective};
use crate::stats::{StatsError, Tail};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolicyError {
    #[error(transparent)]
    Oracle(OracleError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("invalid policy parameters: {0}")]
    InvalidParams(String),
    #[error("challenger and incumbent are the same configuration")]
    SameConfiguration,
}

impl From<OracleError> for PolicyError {
    fn from(e: OracleError) -> Self {
        PolicyError::Oracle(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Tail of the paired test (`challenger - incumbent`) that favours the challenger.
    pub fn tail(self) -> Tail {
        match self {
            Direction::Minimize => Tail::Lower,
            Direction::Maximize => Tail::Upper,
        }
    }

    /// Strict comparison: is `a` better than `b`?
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Minimize => a < b,
            Direction::Maximize => a > b,
        }
    }

    /// Positive when `a` improves on `b`.
    pub fn improvement(self, a: f64, b: f64) -> f64 {
        match self {
            Direction::Minimize => b - a,
            Direction::Maximize => a - b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Challenger,
    Incumbent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    Statistical,
    Heuristic,
    BudgetTruncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub winner: Winner,
    pub resolution: Resolution,
    /// Evaluations per configuration behind the decision.
    pub samples_used: usize,
    /// Reactive policy only: the minimum sample size estimated from the
    /// observed effect at the time of the decision, if one was computed.
    pub target_samples: Option<u64>,
}

/// A comparison policy with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    Reactive(GuardParams),
    Fixed { n: usize },
    Ssm(SsmParams),
}

impl Policy {
    /// Sampling regime the policy expects from its oracle.
    pub fn regime(&self) -> Regime {
        match self {
            Policy::Ssm(_) => Regime::Independent,
            Policy::Reactive(_) | Policy::Fixed { .. } => Regime::Crn,
        }
    }

    /// Short label usable in file names.
    pub fn label(&self) -> String {
        match self {
            Policy::Reactive(_) => "reactive".to_string(),
            Policy::Fixed { n } => format!("fixed{n}"),
            Policy::Ssm(_) => "ssm".to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        match self {
            Policy::Reactive(p) => p.validate(),
            Policy::Fixed { n } if *n == 0 => {
                Err(PolicyError::InvalidParams("fixed sample size must be at least 1".into()))
            }
            Policy::Fixed { .. } => Ok(()),
            Policy::Ssm(p) => p.validate(),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Reactive(p) => {
                write!(
                    f,
                    "reactive alpha={} beta={} delta={} nmin={} nmax=",
                    p.requirements().alpha_req(),
                    p.requirements().beta_req(),
                    p.delta_fraction(),
                    p.n_min()
                )?;
                match p.n_max() {
                    Some(n) => write!(f, "{n}"),
                    None => f.write_str("inf"),
                }
            }
            Policy::Fixed { n } => write!(f, "fixed n={n}"),
            Policy::Ssm(p) => {
                let (iz, delta) = match p.indifference {
                    IndifferenceZone::Absolute(d) => ("absolute", d),
                    IndifferenceZone::Relative(d) => ("relative", d),
                };
                write!(f, "ssm alpha={} delta={} n0={} c={} iz={}", p.alpha, delta, p.n0, p.c, iz)
            }
        }
    }
}

/// A policy bound to the state it carries across the comparisons of one search.
#[derive(Debug, Clone)]
pub struct Comparator {
    policy: Policy,
    state: ComparisonState,
    direction: Direction,
}

impl Comparator {
    pub fn new(policy: Policy, direction: Direction) -> Result<Self, PolicyError> {
        policy.validate()?;
        Ok(Self { policy, state: ComparisonState::default(), direction })
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn state(&self) -> &ComparisonState {
        &self.state
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn compare<O: StochasticObjective>(
        &mut self,
        challenger: &Configuration,
        incumbent: &Configuration,
        oracle: &mut Oracle<O>,
    ) -> Result<Decision, PolicyError> {
        if challenger.key() == incumbent.key() {
            return Err(PolicyError::SameConfiguration);
        }
        match &self.policy {
            Policy::Reactive(params) => {
                reactive_compare(challenger, incumbent, oracle, params, &mut self.state, self.direction)
            }
            Policy::Fixed { n } => fixed_compare(challenger, incumbent, oracle, *n, self.direction),
            Policy::Ssm(params) => ssm_compare(challenger, incumbent, oracle, params, self.direction),
        }
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Brings both configurations to `n` evaluations. `Ok(false)` on budget exhaustion.
pub(crate) fn extend_both<O: StochasticObjective>(
    oracle: &mut Oracle<O>,
    challenger: &Configuration,
    incumbent: &Configuration,
    n: usize,
) -> Result<bool, PolicyError> {
    for config in [incumbent, challenger] {
        match oracle.sample_prefix(config, n) {
            Ok(_) => {}
            Err(OracleError::BudgetExhausted { .. }) => return Ok(false),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(true)
}

/// Compares estimators over the first `n` positions of both configurations;
/// ties keep the incumbent.
pub(crate) fn heuristic_decision<O: StochasticObjective>(
    oracle: &Oracle<O>,
    challenger: &Configuration,
    incumbent: &Configuration,
    n: usize,
    direction: Direction,
    resolution: Resolution,
) -> Decision {
    let ch = &oracle.values(challenger)[..n];
    let inc = &oracle.values(incumbent)[..n];
    let winner = if n > 0 && direction.is_better(mean(ch), mean(inc)) {
        Winner::Challenger
    } else {
        Winner::Incumbent
    };
    Decision { winner, resolution, samples_used: n, target_samples: None }
}

/// Decision on whatever the two configurations have in common after the
/// budget ran out.
pub(crate) fn truncated_decision<O: StochasticObjective>(
    oracle: &Oracle<O>,
    challenger: &Configuration,
    incumbent: &Configuration,
    direction: Direction,
) -> Decision {
    let n = oracle.values(challenger).len().min(oracle.values(incumbent).len());
    heuristic_decision(oracle, challenger, incumbent, n, direction, Resolution::BudgetTruncated)
}
