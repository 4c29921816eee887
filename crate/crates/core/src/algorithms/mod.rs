//! Solvers for k-submodular maximization under a knapsack constraint.

mod brute;
mod greedy;
mod laa;
mod result;
mod rla;

pub use brute::{brute_force_opt, DEFAULT_ENUMERATION_CAP};
pub use greedy::greedy_baseline;
pub use laa::{laa, suffix_pack, LaaRun, TieBreak};
pub use result::{Algorithm, RunResult, TraceEvent};
pub use rla::{guess_set, rla, GuessRun, RlaRun};

use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::oracle::Objective;

/// Checks that the objective is defined on every element of `inst` and
/// shares its `k`.
pub(crate) fn check_compatible(inst: &KnapsackInstance, f: &dyn Objective) -> Result<()> {
    if inst.k() != f.k() {
        return Err(Error::MismatchedK {
            left: inst.k(),
            right: f.k(),
        });
    }
    match inst.universe().iter().find(|&&e| !f.contains(e)) {
        Some(&element) => Err(Error::UnknownElement { element }),
        None => Ok(()),
    }
}

/// Index of the maximum of `values` (1-based), ties resolved by `tie`.
pub(crate) fn argmax_position(values: &[f64], tie: TieBreak) -> usize {
    let mut best = 0;
    for (idx, &v) in values.iter().enumerate().skip(1) {
        let better = match tie {
            TieBreak::LowestPosition => v > values[best],
            TieBreak::HighestPosition => v >= values[best],
        };
        if better {
            best = idx;
        }
    }
    best + 1
}
