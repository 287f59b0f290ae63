use crate::oracle::{Configuration, Oracle, StochasticObjective};

use super::{extend_both, heuristic_decision, truncated_decision, Decision, Direction, PolicyError, Resolution};

/// Compares sample means at a fixed sample size `n`; ties keep the incumbent.
pub fn fixed_compare<O: StochasticObjective>(
    challenger: &Configuration,
    incumbent: &Configuration,
    oracle: &mut Oracle<O>,
    n: usize,
    direction: Direction,
) -> Result<Decision, PolicyError> {
    if n == 0 {
        return Err(PolicyError::InvalidParams("fixed sample size must be at least 1".into()));
    }
    if !extend_both(oracle, challenger, incumbent, n)? {
        return Ok(truncated_decision(oracle, challenger, incumbent, direction));
    }
    Ok(heuristic_decision(oracle, challenger, incumbent, n, direction, Resolution::Heuristic))
}
