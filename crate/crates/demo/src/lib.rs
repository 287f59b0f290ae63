//! WebAssembly bindings for the browser demo in `www/`.

use wasm_bindgen::prelude::*;

use reactive_sampling::benchmarks::{BenchmarkFunction, BenchmarkSpec};
use reactive_sampling::harness::parse_policy;
use reactive_sampling::oracle::NoisyBenchmark;
use reactive_sampling::policy::{Comparator, Direction};
use reactive_sampling::search::{run_search, SearchParams};
use reactive_sampling::stats::{beta_approx, required_sample_size, ErrorRequirements};

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Approximate type-II error for paired sample sizes `2..=n_max`.
#[wasm_bindgen]
pub fn type_two_error_curve(delta_norm: f64, alpha: f64, n_max: usize) -> Result<Vec<f64>, JsError> {
    (2..=n_max.max(2)).map(|n| beta_approx(delta_norm, n, alpha).map_err(js_err)).collect()
}

/// Smallest paired sample size meeting both error requirements.
#[wasm_bindgen]
pub fn required_samples(delta_norm: f64, alpha: f64, beta: f64) -> Result<f64, JsError> {
    let reqs = ErrorRequirements::new(alpha, beta).map_err(js_err)?;
    Ok(required_sample_size(delta_norm, &reqs, 2).map_err(js_err)? as f64)
}

/// Noiseless values on a `resolution` x `resolution` grid over the first two
/// coordinates, the rest held at the minimizer. Row-major, y outermost.
#[wasm_bindgen]
pub fn benchmark_slice(function: &str, dimension: usize, resolution: usize) -> Result<Vec<f64>, JsError> {
    let f: BenchmarkFunction = function.parse().map_err(js_err)?;
    let spec = BenchmarkSpec::new(f, dimension, 0.0).map_err(js_err)?;
    let (lo, hi) = f.domain();
    let mut x = f.minimizer(dimension);
    let step = (hi - lo) / (resolution.max(2) - 1) as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            x[0] = lo + i as f64 * step;
            x[1] = hi - j as f64 * step;
            out.push(spec.noiseless(&x));
        }
    }
    Ok(out)
}

/// Domain bounds `[lo, hi]` of a benchmark.
#[wasm_bindgen]
pub fn benchmark_domain(function: &str) -> Result<Vec<f64>, JsError> {
    let f: BenchmarkFunction = function.parse().map_err(js_err)?;
    let (lo, hi) = f.domain();
    Ok(vec![lo, hi])
}

/// One random local search run, flattened for plotting.
#[wasm_bindgen]
pub struct SearchRun {
    spent: Vec<f64>,
    best: Vec<f64>,
    samples: Vec<f64>,
    path: Vec<f64>,
}

#[wasm_bindgen]
impl SearchRun {
    /// Evaluations spent after each comparison (first entry is the start).
    #[wasm_bindgen(getter)]
    pub fn spent(&self) -> Vec<f64> {
        self.spent.clone()
    }

    /// Noiseless value of the incumbent after each comparison.
    #[wasm_bindgen(getter)]
    pub fn best(&self) -> Vec<f64> {
        self.best.clone()
    }

    /// Samples per configuration used by each comparison.
    #[wasm_bindgen(getter)]
    pub fn samples(&self) -> Vec<f64> {
        self.samples.clone()
    }

    /// First two incumbent coordinates after each comparison, interleaved.
    #[wasm_bindgen(getter)]
    pub fn path(&self) -> Vec<f64> {
        self.path.clone()
    }
}

/// Runs one search. `policy` uses the config-file syntax, e.g.
/// `reactive alpha=0.1 beta=0.4 delta=0.01` or `fixed n=2`.
#[wasm_bindgen]
pub fn run_search_trace(
    function: &str,
    dimension: usize,
    noise: f64,
    policy: &str,
    step: f64,
    budget: u32,
    seed: u32,
) -> Result<SearchRun, JsError> {
    let f: BenchmarkFunction = function.parse().map_err(js_err)?;
    let spec = BenchmarkSpec::new(f, dimension, noise).map_err(js_err)?;
    let policy = parse_policy(policy).map_err(js_err)?;
    let objective = NoisyBenchmark::new(spec);
    let params = SearchParams::new(step, objective.spec().bounds(), u64::from(budget)).map_err(js_err)?;
    let mut comparator = Comparator::new(policy, Direction::Minimize).map_err(js_err)?;
    let trace = run_search(&objective, &mut comparator, &params, u64::from(seed)).map_err(js_err)?;

    let points = &trace.points;
    Ok(SearchRun {
        spent: points.iter().map(|p| p.spent as f64).collect(),
        best: points.iter().map(|p| p.best_noiseless).collect(),
        samples: points.iter().map(|p| p.comparison_samples as f64).collect(),
        path: points.iter().flat_map(|p| [p.best.coords()[0], p.best.coords()[1]]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_decreases_with_n() {
        let curve = type_two_error_curve(0.8, 0.1, 30).unwrap();
        assert_eq!(curve.len(), 29);
        assert!(curve.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert_eq!(required_samples(1.0, 0.05, 0.2).unwrap(), 8.0);
    }

    #[test]
    fn slice_minimum_at_center() {
        let field = benchmark_slice("rastrigin", 10, 51).unwrap();
        assert_eq!(field.len(), 51 * 51);
        assert!(field[25 * 51 + 25].abs() < 1e-12);
        assert!(field.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn search_run_shapes() {
        let run = run_search_trace("griewank", 10, 0.1, "reactive", 1.0, 300, 7).unwrap();
        assert_eq!(run.spent().len(), run.best().len());
        assert_eq!(run.path().len(), 2 * run.spent().len());
        assert!(*run.spent().last().unwrap() <= 300.0);
    }
}
