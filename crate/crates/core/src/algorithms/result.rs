use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::Error;
use crate::kset::{Element, KSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Laa,
    Rla,
    Greedy,
    Brute,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Laa => "laa",
            Algorithm::Rla => "rla",
            Algorithm::Greedy => "greedy",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "laa" => Ok(Algorithm::Laa),
            "rla" => Ok(Algorithm::Rla),
            "greedy" => Ok(Algorithm::Greedy),
            "brute" => Ok(Algorithm::Brute),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub solution: KSet,
    /// `f(solution)`, re-evaluated once after the run without counting.
    pub value: f64,
    pub cost: f64,
    /// Oracle evaluations performed by the solver.
    pub queries: u64,
    pub wall_time: Duration,
    pub algorithm: Algorithm,
    pub params: BTreeMap<String, String>,
}

/// Per-element record of a streaming pass.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub element: Element,
    pub position: usize,
    /// `f((e, i_e))` for the LAA pass.
    pub singleton_value: Option<f64>,
    /// Marginal gain of `(e, position)` against the running solution, when
    /// it was computed.
    pub marginal: Option<f64>,
    /// Right-hand side the marginal (LAA) or density (RLA) was compared to.
    pub threshold: Option<f64>,
    pub accepted: bool,
    pub running_cost: f64,
    pub running_value: f64,
}
