use std::path::PathBuf;
use std::str::FromStr;

use crate::algorithms::{Algorithm, TieBreak, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Application {
    /// Random coverage-bonus instances.
    Synthetic,
    /// Multi-topic influence maximization.
    Influence,
    /// Multi-type sensor placement.
    Sensor,
}

impl FromStr for Application {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "synthetic" => Ok(Application::Synthetic),
            "kimk" | "influence" => Ok(Application::Influence),
            "kspk" | "sensor" | "sensors" => Ok(Application::Sensor),
            _ => Err(Error::Config(format!("unknown application {s:?}"))),
        }
    }
}

impl Application {
    pub fn name(self) -> &'static str {
        match self {
            Application::Synthetic => "synthetic",
            Application::Influence => "kimk",
            Application::Sensor => "kspk",
        }
    }
}

/// One experiment: a budget × algorithm × repetition grid over an instance.
///
/// Repetition `r` uses seed `seed + r` for whatever is random in the
/// instance: the synthetic generator, the influence thresholds, and the
/// stream order when `shuffle_seed` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub application: Application,
    /// Edge list (influence) or sensor log (sensor). Without it a synthetic
    /// graph or sensor table of size `n` is generated.
    pub input: Option<PathBuf>,
    /// Explicit per-topic weights in the edge list.
    pub explicit_weights: bool,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub budgets: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub reps: usize,
    pub out: PathBuf,
    pub mc_samples: usize,
    pub shuffle_seed: Option<u64>,
    pub max_enum: u64,
    pub cost_range: (f64, f64),
    pub avg_degree: usize,
    pub samples: usize,
    pub tie_break: TieBreak,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            application: Application::Synthetic,
            input: None,
            explicit_weights: false,
            n: 8,
            k: 3,
            epsilon: 0.1,
            budgets: Vec::new(),
            algorithms: vec![Algorithm::Laa, Algorithm::Rla],
            seed: 0,
            reps: 5,
            out: PathBuf::from("results"),
            mc_samples: 100,
            shuffle_seed: None,
            max_enum: DEFAULT_ENUMERATION_CAP,
            cost_range: (1.0, 10.0),
            avg_degree: 4,
            samples: 200,
            tie_break: TieBreak::LowestPosition,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl ExperimentConfig {
    /// Reads `key = value` lines (`#` starts a comment). Keys mirror the
    /// command-line flags; lists are comma separated.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", idx + 1)))?;
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    /// Applies one setting. Unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim_start_matches("--").replace('_', "-");
        match key.as_str() {
            "application" | "app" => self.application = value.parse()?,
            "input" => self.input = Some(PathBuf::from(value)),
            "weights" => {
                self.explicit_weights = match value {
                    "explicit" => true,
                    "derived" => false,
                    _ => return Err(Error::Config(format!("weights must be derived or explicit, got {value:?}"))),
                }
            }
            "n" => self.n = parse(&key, value)?,
            "k" => self.k = parse(&key, value)?,
            "epsilon" => self.epsilon = parse(&key, value)?,
            "budget" | "budgets" => self.budgets = list(&key, value)?,
            "algo" | "algorithms" => self.algorithms = list(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "reps" => self.reps = parse(&key, value)?,
            "out" => self.out = PathBuf::from(value),
            "mc-samples" => self.mc_samples = parse(&key, value)?,
            "shuffle-seed" => self.shuffle_seed = Some(parse(&key, value)?),
            "max-enum" => self.max_enum = parse(&key, value)?,
            "cost-range" => {
                let v: Vec<f64> = list(&key, value)?;
                match v[..] {
                    [lo, hi] => self.cost_range = (lo, hi),
                    _ => return Err(Error::Config("cost-range takes two numbers".into())),
                }
            }
            "avg-degree" => self.avg_degree = parse(&key, value)?,
            "samples" => self.samples = parse(&key, value)?,
            "tie-break" => {
                self.tie_break = match value {
                    "lowest" => TieBreak::LowestPosition,
                    "highest" => TieBreak::HighestPosition,
                    _ => return Err(Error::Config(format!("tie-break must be lowest or highest, got {value:?}"))),
                }
            }
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.budgets.is_empty() {
            return Err(Error::Config("budget list is empty".into()));
        }
        if self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("budgets must be strictly ascending".into()));
        }
        if self.budgets.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::Config("budgets must be positive".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("algorithm list is empty".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.k < 2 {
            return Err(Error::Config("k must be at least 2".into()));
        }
        if self.n == 0 && self.input.is_none() {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.mc_samples == 0 {
            return Err(Error::Config("mc-samples must be at least 1".into()));
        }
        if self.algorithms.contains(&Algorithm::Rla) && !(self.epsilon > 0.0 && self.epsilon < 0.2) {
            return Err(Error::EpsilonOutOfRange(self.epsilon));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file() {
        let cfg = ExperimentConfig::from_text(
            "# sweep\napplication = synthetic\nn = 8\nk=3\nbudget = 3, 5\nalgo = laa,rla,brute\nreps = 1\nshuffle_seed = 4 # inline\n",
        )
        .unwrap();
        assert_eq!(cfg.budgets, vec![3.0, 5.0]);
        assert_eq!(cfg.algorithms, vec![Algorithm::Laa, Algorithm::Rla, Algorithm::Brute]);
        assert_eq!(cfg.shuffle_seed, Some(4));
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate().is_err());
        cfg.budgets = vec![5.0, 3.0];
        assert!(cfg.validate().is_err());
        cfg.budgets = vec![3.0, 5.0];
        cfg.validate().unwrap();
        cfg.epsilon = 0.25;
        assert!(matches!(cfg.validate(), Err(Error::EpsilonOutOfRange(_))));
        cfg.algorithms = vec![Algorithm::Laa];
        cfg.validate().unwrap();
        cfg.reps = 0;
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::from_text("colour = red").is_err());
        assert!(ExperimentConfig::from_text("k 3").is_err());
        assert!(ExperimentConfig::from_text("algo = simplex").is_err());
    }
}
