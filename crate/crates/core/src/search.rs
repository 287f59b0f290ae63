//! Random local search: uniform proposals in a box around the incumbent,
//! every accept/reject decision delegated to a comparison policy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{Configuration, Oracle, OracleCounters, SeedStream, StochasticObjective};
use crate::policy::{Comparator, PolicyError, Resolution, Winner};

/// Stream id reserved for the proposal generator.
const PROPOSAL_STREAM: u64 = u64::MAX - 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("step size must lie in (0, 1], got {0}")]
    InvalidStepSize(f64),
    #[error("empty or inverted domain interval at coordinate {0}")]
    InvalidDomain(usize),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialConfiguration {
    /// Uniform over the domain, drawn from the proposal stream.
    Uniform,
    Given(Configuration),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    step_size: f64,
    bounds: Vec<(f64, f64)>,
    budget: u64,
    initial: InitialConfiguration,
}

impl SearchParams {
    pub fn new(step_size: f64, bounds: Vec<(f64, f64)>, budget: u64) -> Result<Self, SearchError> {
        if !(step_size > 0.0 && step_size <= 1.0) {
            return Err(SearchError::InvalidStepSize(step_size));
        }
        if let Some(i) = bounds.iter().position(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
            return Err(SearchError::InvalidDomain(i));
        }
        Ok(Self { step_size, bounds, budget, initial: InitialConfiguration::Uniform })
    }

    pub fn with_initial(mut self, initial: InitialConfiguration) -> Self {
        self.initial = initial;
        self
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Interval proposals for a coordinate at `x` are drawn from.
    pub fn proposal_interval(&self, coordinate: usize, x: f64) -> (f64, f64) {
        let (lo, hi) = self.bounds[coordinate];
        let half = 0.5 * self.step_size * (hi - lo);
        ((x - half).max(lo), (x + half).min(hi))
    }
}

/// Samples each coordinate uniformly from the step-size box around the
/// incumbent, intersected with the domain.
pub fn propose<R: Rng + ?Sized>(incumbent: &Configuration, params: &SearchParams, rng: &mut R) -> Configuration {
    let coords = incumbent
        .coords()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let (lo, hi) = params.proposal_interval(i, x);
            if lo < hi {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect();
    Configuration::new(coords)
}

fn uniform_point<R: Rng + ?Sized>(bounds: &[(f64, f64)], rng: &mut R) -> Configuration {
    let coords = bounds
        .iter()
        .map(|&(lo, hi)| if lo < hi { rng.random_range(lo..=hi) } else { lo })
        .collect();
    Configuration::new(coords)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub spent: u64,
    pub best: Configuration,
    pub best_noiseless: f64,
    /// Samples per configuration in the comparison that produced this row
    /// (0 for the initial row).
    pub comparison_samples: usize,
}

#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub points: Vec<TracePoint>,
    pub counters: OracleCounters,
    pub spent: u64,
}

impl SearchTrace {
    pub fn final_point(&self) -> &TracePoint {
        self.points.last().expect("trace always holds the initial point")
    }

    /// Comparison rows (everything but the initial point).
    pub fn comparisons(&self) -> &[TracePoint] {
        &self.points[1..]
    }
}

/// Runs one search until the budget is spent. Evaluation seeds and proposals
/// are both derived from `master_seed`.
pub fn run_search<O: StochasticObjective>(
    objective: O,
    comparator: &mut Comparator,
    params: &SearchParams,
    master_seed: u64,
) -> Result<SearchTrace, SearchError> {
    let seeds = SeedStream::new(master_seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seeds.seed(PROPOSAL_STREAM, 0));
    let mut oracle = Oracle::new(objective, seeds, comparator.policy().regime(), params.budget);

    let mut incumbent = match &params.initial {
        InitialConfiguration::Uniform => uniform_point(&params.bounds, &mut rng),
        InitialConfiguration::Given(c) => c.clone(),
    };
    let mut points = vec![TracePoint {
        spent: 0,
        best_noiseless: oracle.noiseless_value(&incumbent),
        best: incumbent.clone(),
        comparison_samples: 0,
    }];

    while !oracle.ledger().is_exhausted() {
        let challenger = loop {
            let candidate = propose(&incumbent, params, &mut rng);
            if candidate.key() != incumbent.key() {
                break candidate;
            }
        };
        let decision = comparator.compare(&challenger, &incumbent, &mut oracle)?;
        if decision.winner == Winner::Challenger {
            incumbent = challenger;
        }
        points.push(TracePoint {
            spent: oracle.ledger().spent(),
            best_noiseless: oracle.noiseless_value(&incumbent),
            best: incumbent.clone(),
            comparison_samples: decision.samples_used,
        });
        if decision.resolution == Resolution::BudgetTruncated {
            break;
        }
    }

    Ok(SearchTrace { points, counters: oracle.counters(), spent: oracle.ledger().spent() })
}
