//! Stochastic objective evaluation with common random numbers, a
//! per-configuration evaluation memory and a global budget ledger.
//!
//! Seed index `i` (1-based) maps to the simulation seed `xi_i`. Under
//! [`Regime::Crn`] every configuration sees the same `xi_i` at position `i`;
//! under [`Regime::Independent`] the seed is additionally keyed by the
//! configuration so distinct configurations draw from disjoint streams.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::benchmarks::BenchmarkSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("evaluation budget exhausted ({total} evaluations)")]
    BudgetExhausted { total: u64 },
    #[error("seed index {requested} skips ahead of the {recorded} recorded evaluations")]
    GapInSequence { requested: usize, recorded: usize },
    #[error("seed indices start at 1")]
    ZeroIndex,
    #[error("configuration has {got} coordinates, objective expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} = {value} lies outside [{lo}, {hi}]")]
    OutOfDomain { index: usize, value: f64, lo: f64, hi: f64 },
}

/// A simulator `F(x, xi)`: deterministic given the configuration and the seed.
pub trait StochasticObjective {
    fn bounds(&self) -> &[(f64, f64)];

    fn dimension(&self) -> usize {
        self.bounds().len()
    }

    /// Expected value `f(x)`; used for scoring only.
    fn noiseless(&self, x: &[f64]) -> f64;

    fn simulate(&self, x: &[f64], seed: u64) -> f64;
}

/// A benchmark function with its box domain materialized.
#[derive(Debug, Clone)]
pub struct NoisyBenchmark {
    spec: BenchmarkSpec,
    bounds: Vec<(f64, f64)>,
}

impl NoisyBenchmark {
    pub fn new(spec: BenchmarkSpec) -> Self {
        Self { bounds: spec.bounds(), spec }
    }

    pub fn spec(&self) -> &BenchmarkSpec {
        &self.spec
    }
}

impl StochasticObjective for NoisyBenchmark {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn noiseless(&self, x: &[f64]) -> f64 {
        self.spec.noiseless(x)
    }

    fn simulate(&self, x: &[f64], seed: u64) -> f64 {
        self.spec.noisy(x, standard_normal(seed))
    }
}

impl<T: StochasticObjective + ?Sized> StochasticObjective for &T {
    fn bounds(&self) -> &[(f64, f64)] {
        (**self).bounds()
    }

    fn noiseless(&self, x: &[f64]) -> f64 {
        (**self).noiseless(x)
    }

    fn simulate(&self, x: &[f64], seed: u64) -> f64 {
        (**self).simulate(x, seed)
    }
}

/// Standard normal draw determined entirely by `seed`.
pub fn standard_normal(seed: u64) -> f64 {
    ChaCha8Rng::seed_from_u64(seed).sample(StandardNormal)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based seed derivation keyed by `(master, stream, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    master_seed: u64,
}

impl SeedStream {
    /// Stream id of the shared CRN stream.
    pub const SHARED: u64 = 0;

    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn seed(&self, stream: u64, index: u64) -> u64 {
        let h = splitmix64(self.master_seed);
        let h = splitmix64(h ^ stream.wrapping_mul(0xd6e8_feb8_6659_fd93));
        splitmix64(h ^ index)
    }

    pub fn normal(&self, stream: u64, index: u64) -> f64 {
        standard_normal(self.seed(stream, index))
    }

    /// Child stream for sub-experiment `id` (e.g. a macroreplication).
    pub fn child(&self, id: u64) -> SeedStream {
        SeedStream::new(self.seed(u64::MAX, id))
    }
}

/// A point in the decision space, keyed by the exact bit pattern of its
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    coords: Vec<f64>,
    key: Vec<u64>,
}

impl Configuration {
    pub fn new(coords: Vec<f64>) -> Self {
        let key = coords.iter().map(|c| c.to_bits()).collect();
        Self { coords, key }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn key(&self) -> &[u64] {
        &self.key
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Nonzero stream id used by the independent-sampling regime.
    pub fn stream_id(&self) -> u64 {
        let id = self.key.iter().fold(0x51_7cc1_b727_220a_u64, |h, &bits| splitmix64(h ^ bits));
        if id == SeedStream::SHARED {
            1
        } else {
            id
        }
    }

    pub fn check_bounds(&self, bounds: &[(f64, f64)]) -> Result<(), OracleError> {
        if bounds.len() != self.coords.len() {
            return Err(OracleError::DimensionMismatch { expected: bounds.len(), got: self.coords.len() });
        }
        for (index, (&value, &(lo, hi))) in self.coords.iter().zip(bounds).enumerate() {
            if !(value >= lo && value <= hi) {
                return Err(OracleError::OutOfDomain { index, value, lo, hi });
            }
        }
        Ok(())
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Position `i` uses the same seed for every configuration.
    Crn,
    /// Each configuration has its own stream.
    Independent,
}

/// Append-only record of noisy evaluations per configuration.
#[derive(Debug, Clone, Default)]
pub struct EvaluationMemory {
    values: HashMap<Vec<u64>, Vec<f64>>,
}

impl EvaluationMemory {
    pub fn values(&self, config: &Configuration) -> &[f64] {
        self.values.get(config.key()).map_or(&[], Vec::as_slice)
    }

    pub fn len_of(&self, config: &Configuration) -> usize {
        self.values(config).len()
    }

    pub fn configurations(&self) -> usize {
        self.values.len()
    }

    pub fn total_recorded(&self) -> usize {
        self.values.values().map(Vec::len).sum()
    }

    fn push(&mut self, config: &Configuration, value: f64) {
        match self.values.get_mut(config.key()) {
            Some(list) => list.push(value),
            None => {
                self.values.insert(config.key().to_vec(), vec![value]);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetLedger {
    total: u64,
    spent: u64,
}

impl BudgetLedger {
    pub fn new(total: u64) -> Self {
        Self { total, spent: 0 }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn remaining(&self) -> u64 {
        self.total - self.spent
    }

    pub fn is_exhausted(&self) -> bool {
        self.spent >= self.total
    }

    fn spend_one(&mut self) -> Result<(), OracleError> {
        if self.is_exhausted() {
            return Err(OracleError::BudgetExhausted { total: self.total });
        }
        self.spent += 1;
        Ok(())
    }
}

/// Evaluation counters independent of the ledger, for accounting checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCounters {
    pub simulator_calls: u64,
    pub cache_hits: u64,
}

/// One macroreplication's view of the simulator.
#[derive(Debug, Clone)]
pub struct Oracle<O> {
    objective: O,
    seeds: SeedStream,
    regime: Regime,
    memory: EvaluationMemory,
    ledger: BudgetLedger,
    counters: OracleCounters,
}

impl<O: StochasticObjective> Oracle<O> {
    pub fn new(objective: O, seeds: SeedStream, regime: Regime, budget: u64) -> Self {
        Self {
            objective,
            seeds,
            regime,
            memory: EvaluationMemory::default(),
            ledger: BudgetLedger::new(budget),
            counters: OracleCounters::default(),
        }
    }

    pub fn objective(&self) -> &O {
        &self.objective
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn seeds(&self) -> SeedStream {
        self.seeds
    }

    pub fn memory(&self) -> &EvaluationMemory {
        &self.memory
    }

    pub fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }

    pub fn counters(&self) -> OracleCounters {
        self.counters
    }

    pub fn values(&self, config: &Configuration) -> &[f64] {
        self.memory.values(config)
    }

    /// The seed `xi_i` this oracle feeds the simulator at position `seed_index`.
    pub fn seed_for(&self, config: &Configuration, seed_index: usize) -> u64 {
        let stream = match self.regime {
            Regime::Crn => SeedStream::SHARED,
            Regime::Independent => config.stream_id(),
        };
        self.seeds.seed(stream, seed_index as u64)
    }

    /// `F(config, xi_{seed_index})`, served from memory when already recorded.
    pub fn evaluate(&mut self, config: &Configuration, seed_index: usize) -> Result<f64, OracleError> {
        if seed_index == 0 {
            return Err(OracleError::ZeroIndex);
        }
        let recorded = self.memory.len_of(config);
        if seed_index <= recorded {
            self.counters.cache_hits += 1;
            return Ok(self.memory.values(config)[seed_index - 1]);
        }
        if seed_index > recorded + 1 {
            return Err(OracleError::GapInSequence { requested: seed_index, recorded });
        }
        config.check_bounds(self.objective.bounds())?;
        self.ledger.spend_one()?;
        let value = self.objective.simulate(config.coords(), self.seed_for(config, seed_index));
        self.counters.simulator_calls += 1;
        self.memory.push(config, value);
        Ok(value)
    }

    /// The first `n` evaluations of `config`, simulating missing positions in
    /// order. On budget exhaustion the positions simulated so far stay recorded.
    pub fn sample_prefix(&mut self, config: &Configuration, n: usize) -> Result<&[f64], OracleError> {
        let recorded = self.memory.len_of(config);
        self.counters.cache_hits += n.min(recorded) as u64;
        for index in recorded + 1..=n {
            self.evaluate(config, index)?;
        }
        Ok(&self.memory.values(config)[..n])
    }

    pub fn noiseless_value(&self, config: &Configuration) -> f64 {
        self.objective.noiseless(config.coords())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::BenchmarkFunction;
    use approx::assert_abs_diff_eq;

    fn griewank(noise: f64) -> NoisyBenchmark {
        NoisyBenchmark::new(BenchmarkSpec::new(BenchmarkFunction::Griewank, 4, noise).unwrap())
    }

    fn point(v: [f64; 4]) -> Configuration {
        Configuration::new(v.to_vec())
    }

    #[test]
    fn cache_hits_are_free_and_stable() {
        let mut oracle = Oracle::new(griewank(0.1), SeedStream::new(5), Regime::Crn, 10);
        let x = point([10.0, -3.0, 200.0, 1.0]);
        let first = oracle.evaluate(&x, 1).unwrap();
        assert_eq!(oracle.ledger().spent(), 1);
        let again = oracle.evaluate(&x, 1).unwrap();
        assert_eq!(first.to_bits(), again.to_bits());
        assert_eq!(oracle.ledger().spent(), 1);
        assert_eq!(oracle.counters().cache_hits, 1);
    }

    #[test]
    fn gap_and_zero_index_are_rejected() {
        let mut oracle = Oracle::new(griewank(0.1), SeedStream::new(5), Regime::Crn, 10);
        let x = point([1.0; 4]);
        assert_eq!(oracle.evaluate(&x, 0), Err(OracleError::ZeroIndex));
        assert_eq!(
            oracle.evaluate(&x, 3),
            Err(OracleError::GapInSequence { requested: 3, recorded: 0 })
        );
        assert_eq!(oracle.ledger().spent(), 0);
    }

    #[test]
    fn out_of_domain_rejected() {
        let mut oracle = Oracle::new(griewank(0.1), SeedStream::new(5), Regime::Crn, 10);
        let x = point([1.0, 700.0, 0.0, 0.0]);
        assert!(matches!(oracle.evaluate(&x, 1), Err(OracleError::OutOfDomain { index: 1, .. })));
        let short = Configuration::new(vec![0.0; 3]);
        assert!(matches!(oracle.evaluate(&short, 1), Err(OracleError::DimensionMismatch { .. })));
    }

    #[test]
    fn budget_exhaustion() {
        let mut oracle = Oracle::new(griewank(0.1), SeedStream::new(5), Regime::Crn, 3);
        let x = point([1.0; 4]);
        assert_eq!(oracle.sample_prefix(&x, 5), Err(OracleError::BudgetExhausted { total: 3 }));
        assert_eq!(oracle.values(&x).len(), 3);
        assert_eq!(oracle.ledger().spent(), 3);
        // cached positions still served
        assert!(oracle.sample_prefix(&x, 3).is_ok());
    }

    #[test]
    fn prefix_accounting() {
        let mut oracle = Oracle::new(griewank(0.2), SeedStream::new(9), Regime::Crn, 100);
        let x = point([5.0, 5.0, -5.0, 0.5]);
        let p4 = oracle.sample_prefix(&x, 4).unwrap().to_vec();
        assert_eq!(oracle.ledger().spent(), 4);
        oracle.sample_prefix(&x, 2).unwrap();
        assert_eq!(oracle.ledger().spent(), 4);
        let p7 = oracle.sample_prefix(&x, 7).unwrap().to_vec();
        assert_eq!(oracle.ledger().spent(), 7);
        assert_eq!(&p7[..4], &p4[..]);
        assert_eq!(oracle.counters().simulator_calls, 7);
    }

    #[test]
    fn crn_difference_matches_noise_model() {
        let seeds = SeedStream::new(77);
        let bench = griewank(0.1);
        let mut oracle = Oracle::new(bench.clone(), seeds, Regime::Crn, 100);
        let a = point([100.0, -250.0, 30.0, 4.0]);
        let b = point([-10.0, 500.0, 2.0, -90.0]);
        let (fa, fb) = (bench.noiseless(a.coords()), bench.noiseless(b.coords()));
        for i in 1..=20 {
            let da = oracle.evaluate(&a, i).unwrap();
            let db = oracle.evaluate(&b, i).unwrap();
            let z = seeds.normal(SeedStream::SHARED, i as u64);
            let expected = fa - fb + 0.1 * z * (fa.abs() - fb.abs());
            assert_abs_diff_eq!(da - db, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn independent_streams_are_uncorrelated() {
        let seeds = SeedStream::new(3);
        let a = point([1.0, 2.0, 3.0, 4.0]);
        let b = point([1.0, 2.0, 3.0, 4.000001]);
        let m = 10_000;
        let za: Vec<f64> = (1..=m).map(|i| seeds.normal(a.stream_id(), i)).collect();
        let zb: Vec<f64> = (1..=m).map(|i| seeds.normal(b.stream_id(), i)).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ma, mb) = (mean(&za), mean(&zb));
        let cov: f64 = za.iter().zip(&zb).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>();
        let va: f64 = za.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = zb.iter().map(|y| (y - mb).powi(2)).sum();
        let corr = cov / (va * vb).sqrt();
        // 4 standard errors of a null correlation
        assert!(corr.abs() < 4.0 / (m as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn replay_is_bit_identical() {
        let run = || {
            let mut oracle = Oracle::new(griewank(0.05), SeedStream::new(2024), Regime::Independent, 50);
            let a = point([1.0, 2.0, 3.0, 4.0]);
            let b = point([-1.0, 2.0, 3.0, 4.0]);
            let mut out = oracle.sample_prefix(&a, 10).unwrap().to_vec();
            out.extend_from_slice(oracle.sample_prefix(&b, 10).unwrap());
            out.into_iter().map(f64::to_bits).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn noiseless_matches_monte_carlo_mean() {
        let bench = griewank(0.1);
        let x = point([300.0, -120.0, 45.0, 5.0]);
        let f = bench.noiseless(x.coords());
        let seeds = SeedStream::new(1);
        let m = 100_000;
        let mean = (1..=m).map(|i| bench.simulate(x.coords(), seeds.seed(0, i))).sum::<f64>() / m as f64;
        assert!((mean - f).abs() <= 3.0 * 0.1 * f.abs() / (m as f64).sqrt());
    }

    #[test]
    fn minimizers_score_zero() {
        let r = NoisyBenchmark::new(BenchmarkSpec::new(BenchmarkFunction::Rastrigin, 10, 0.1).unwrap());
        let oracle = Oracle::new(r, SeedStream::new(0), Regime::Crn, 0);
        assert_eq!(oracle.noiseless_value(&Configuration::new(vec![0.0; 10])), 0.0);
        let rb = NoisyBenchmark::new(BenchmarkSpec::new(BenchmarkFunction::Rosenbrock, 10, 0.1).unwrap());
        let oracle = Oracle::new(rb, SeedStream::new(0), Regime::Crn, 0);
        assert_eq!(oracle.noiseless_value(&Configuration::new(vec![1.0; 10])), 0.0);
    }
}
