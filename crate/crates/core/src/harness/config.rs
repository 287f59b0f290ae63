//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # Griewank, 10% noise
//! function  = griewank
//! noise     = 0.10
//! steps     = 0.2, 0.4, 1.0
//! policy    = reactive alpha=0.1 beta=0.4 delta=0.01
//! policy    = fixed n=2
//! policy    = ssm alpha=0.1 delta=0.01 n0=2 c=1 iz=relative
//! budget    = 5000
//! macroreps = 100
//! seed      = 42
//! ```

use std::collections::HashMap;
use std::path::PathBuf;

use crate::benchmarks::BenchmarkFunction;
use crate::policy::{GuardParams, IndifferenceZone, Policy, SsmParams};
use crate::stats::ErrorRequirements;

pub const DEFAULT_DIMENSION: usize = 10;
pub const DEFAULT_STRIDE: u64 = 50;
pub const DEFAULT_OUT: &str = "results";

const KEYS: [&str; 10] =
    ["function", "dimension", "noise", "steps", "policy", "budget", "macroreps", "seed", "stride", "out"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: bad value for `{key}`: {message}")]
    Malformed { key: String, line: usize, message: String },
    #[error("duplicate key `{key}` on lines {first} and {second}")]
    DuplicateKey { key: String, first: usize, second: usize },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: BenchmarkFunction,
    pub dimension: usize,
    pub noise: f64,
    pub steps: Vec<f64>,
    pub policies: Vec<Policy>,
    pub budget: u64,
    pub macroreps: u32,
    pub seed: u64,
    pub stride: u64,
    pub out: PathBuf,
}

fn malformed(key: &str, line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Malformed { key: key.to_string(), line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(key: &str, line: usize, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| malformed(key, line, format!("`{value}`: {e}")))
}

/// Parses a policy description such as `reactive alpha=0.1 beta=0.4`.
pub fn parse_policy(text: &str) -> Result<Policy, String> {
    let mut tokens = text.split_whitespace();
    let kind = tokens.next().ok_or("empty policy")?;
    let mut args: HashMap<&str, &str> = HashMap::new();
    for token in tokens {
        let (k, v) = token.split_once('=').ok_or_else(|| format!("expected name=value, got `{token}`"))?;
        if args.insert(k, v).is_some() {
            return Err(format!("parameter `{k}` given twice"));
        }
    }
    let allowed: &[&str] = match kind {
        "reactive" => &["alpha", "beta", "delta", "nmin", "nmax"],
        "fixed" => &["n"],
        "ssm" => &["alpha", "delta", "n0", "c", "iz"],
        other => return Err(format!("unknown policy `{other}` (expected reactive, fixed or ssm)")),
    };
    if let Some(k) = args.keys().find(|k| !allowed.contains(k)) {
        return Err(format!("unknown {kind} parameter `{k}`"));
    }
    fn get<T: std::str::FromStr>(args: &HashMap<&str, &str>, key: &str, default: T) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        match args.get(key) {
            Some(v) => v.parse().map_err(|e| format!("`{key}={v}`: {e}")),
            None => Ok(default),
        }
    }

    let policy = match kind {
        "reactive" => {
            let reqs = ErrorRequirements::new(get(&args, "alpha", 0.1)?, get(&args, "beta", 0.4)?)
                .map_err(|e| e.to_string())?;
            let n_max = match args.get("nmax") {
                None | Some(&"inf") => None,
                Some(v) => Some(v.parse::<usize>().map_err(|e| format!("`nmax={v}`: {e}"))?),
            };
            GuardParams::new(reqs, get(&args, "delta", 0.01)?, get(&args, "nmin", 2)?, n_max)
                .map(Policy::Reactive)
                .map_err(|e| e.to_string())?
        }
        "fixed" => {
            let n = args.get("n").ok_or("fixed policy needs `n`")?;
            Policy::Fixed { n: n.parse().map_err(|e| format!("`n={n}`: {e}"))? }
        }
        _ => {
            let delta: f64 = get(&args, "delta", 0.01)?;
            let zone = match args.get("iz").copied().unwrap_or("absolute") {
                "absolute" => IndifferenceZone::Absolute(delta),
                "relative" => IndifferenceZone::Relative(delta),
                other => return Err(format!("`iz={other}`: expected absolute or relative")),
            };
            SsmParams::new(get(&args, "alpha", 0.1)?, zone, get(&args, "n0", 2)?, get(&args, "c", 1)?)
                .map(Policy::Ssm)
                .map_err(|e| e.to_string())?
        }
    };
    policy.validate().map_err(|e| e.to_string())?;
    Ok(policy)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut values: HashMap<String, (usize, String)> = HashMap::new();
    let mut policies = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { key: key.to_string(), line });
        }
        if key == "policy" {
            policies.push(parse_policy(value).map_err(|m| malformed(key, line, m))?);
            continue;
        }
        if let Some(&first) = seen.get(key) {
            return Err(ConfigError::DuplicateKey { key: key.to_string(), first, second: line });
        }
        seen.insert(key.to_string(), line);
        values.insert(key.to_string(), (line, value.to_string()));
    }

    let required = |key: &'static str| values.get(key).ok_or(ConfigError::MissingKey(key));

    let (line, v) = required("function")?;
    let function = v.parse::<BenchmarkFunction>().map_err(|e| malformed("function", *line, e.to_string()))?;

    let (line, v) = required("noise")?;
    let noise: f64 = parse_num("noise", *line, v)?;
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(malformed("noise", *line, "must be a non-negative fraction"));
    }

    if policies.is_empty() {
        return Err(ConfigError::MissingKey("policy"));
    }

    let (line, v) = required("budget")?;
    let budget: u64 = parse_num("budget", *line, v)?;
    if budget < 1 {
        return Err(malformed("budget", *line, "must be at least 1"));
    }

    let (line, v) = required("macroreps")?;
    let macroreps: u32 = parse_num("macroreps", *line, v)?;
    if macroreps < 1 {
        return Err(malformed("macroreps", *line, "must be at least 1"));
    }

    let (line, v) = required("seed")?;
    let seed: u64 = parse_num("seed", *line, v)?;

    let dimension = match values.get("dimension") {
        Some((line, v)) => {
            let d: usize = parse_num("dimension", *line, v)?;
            if d < function.min_dimension() {
                return Err(malformed("dimension", *line, format!("{function} needs at least {}", function.min_dimension())));
            }
            d
        }
        None => DEFAULT_DIMENSION,
    };

    let steps = match values.get("steps") {
        Some((line, v)) => {
            let steps = v
                .split(',')
                .map(|s| parse_num::<f64>("steps", *line, s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if steps.is_empty() || steps.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
                return Err(malformed("steps", *line, "step sizes must lie in (0, 1]"));
            }
            steps
        }
        None => vec![1.0],
    };

    let stride = match values.get("stride") {
        Some((line, v)) => {
            let s: u64 = parse_num("stride", *line, v)?;
            if s < 1 {
                return Err(malformed("stride", *line, "must be at least 1"));
            }
            s
        }
        None => DEFAULT_STRIDE,
    };

    let out = values.get("out").map_or_else(|| PathBuf::from(DEFAULT_OUT), |(_, v)| PathBuf::from(v));

    Ok(ExperimentConfig { function, dimension, noise, steps, policies, budget, macroreps, seed, stride, out })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "function = rastrigin\nnoise = 0.05\npolicy = fixed n=1\nbudget = 100\nmacroreps = 3\nseed = 7\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.dimension, 10);
        assert_eq!(cfg.stride, 50);
        assert_eq!(cfg.steps, vec![1.0]);
        assert_eq!(cfg.out, PathBuf::from("results"));
        assert_eq!(cfg.policies, vec![Policy::Fixed { n: 1 }]);
    }

    #[test]
    fn headline_setting() {
        let text = "\
# headline experiment
function = griewank
noise = 0.10   # ten percent
steps = 1.0
policy = reactive alpha=0.1 beta=0.4 delta=0.01
budget = 5000
macroreps = 100
seed = 1
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.function, BenchmarkFunction::Griewank);
        assert_eq!(cfg.noise, 0.10);
        assert_eq!((cfg.budget, cfg.macroreps), (5000, 100));
        let Policy::Reactive(p) = &cfg.policies[0] else { panic!("not reactive") };
        assert_eq!(p.requirements().alpha_req(), 0.1);
        assert_eq!(p.requirements().beta_req(), 0.4);
        assert_eq!(p.delta_fraction(), 0.01);
        assert_eq!((p.n_min(), p.n_max()), (2, None));
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let text = format!("{MINIMAL}budget = 200\n");
        assert_eq!(
            parse_config(&text),
            Err(ConfigError::DuplicateKey { key: "budget".into(), first: 4, second: 7 })
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_config("function = griewank\ncolour = blue\n"),
            Err(ConfigError::UnknownKey { key: "colour".into(), line: 2 })
        );
        assert_eq!(parse_config("\n\nfunction griewank\n"), Err(ConfigError::Syntax { line: 3 }));
        let bad = MINIMAL.replace("budget = 100", "budget = lots");
        assert!(matches!(parse_config(&bad), Err(ConfigError::Malformed { line: 4, .. })));
        let bad = MINIMAL.replace("fixed n=1", "fixed m=1");
        assert!(matches!(parse_config(&bad), Err(ConfigError::Malformed { line: 3, .. })));
        let missing = MINIMAL.replace("seed = 7\n", "");
        assert_eq!(parse_config(&missing), Err(ConfigError::MissingKey("seed")));
    }

    #[test]
    fn policy_variants() {
        assert_eq!(parse_policy("fixed n=20").unwrap(), Policy::Fixed { n: 20 });
        let Policy::Ssm(p) = parse_policy("ssm alpha=0.05 delta=0.5 n0=3 c=2 iz=relative").unwrap() else {
            panic!()
        };
        assert_eq!((p.alpha, p.indifference, p.n0, p.c), (0.05, IndifferenceZone::Relative(0.5), 3, 2));
        let Policy::Reactive(p) = parse_policy("reactive nmax=50 nmin=3").unwrap() else { panic!() };
        assert_eq!((p.n_min(), p.n_max()), (3, Some(50)));
        assert!(parse_policy("reactive alpha=0.7").is_err());
        assert!(parse_policy("fixed n=0").is_err());
        assert!(parse_policy("fixed").is_err());
        assert!(parse_policy("bandit").is_err());
        assert!(parse_policy("ssm iz=sideways").is_err());
    }

    #[test]
    fn policy_display_round_trips() {
        for text in [
            "reactive alpha=0.1 beta=0.4 delta=0.01 nmin=2 nmax=inf",
            "reactive alpha=0.05 beta=0.2 delta=0 nmin=4 nmax=40",
            "fixed n=2",
            "ssm alpha=0.1 delta=0.01 n0=2 c=1 iz=relative",
        ] {
            let policy = parse_policy(text).unwrap();
            assert_eq!(policy.to_string(), text);
        }
    }

    #[test]
    fn range_checks() {
        for (from, to) in [
            ("noise = 0.05", "noise = -1"),
            ("macroreps = 3", "macroreps = 0"),
            ("budget = 100", "budget = 0"),
        ] {
            assert!(parse_config(&MINIMAL.replace(from, to)).is_err(), "{to}");
        }
        assert!(parse_config(&format!("{MINIMAL}steps = 0.2, 1.5\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}stride = 0\n")).is_err());
        let rosen = MINIMAL.replace("rastrigin", "rosenbrock");
        assert!(parse_config(&format!("{rosen}dimension = 1\n")).is_err());
    }
}
