//! Single-pass linear approximation (LAA).
//!
//! Elements with `c(e) > B/2` only compete for the best singleton. The others
//! are appended to a running solution `x` whenever
//! `Δ_{(e,i_e)} f(x) ≥ c(e) f(x) / B`. The accepted sequence may overshoot
//! the budget, so the longest feasible suffix of it is kept, and the answer
//! is the better of that suffix and the best singleton.
//!
//! Query accounting: `k` singleton queries per element, plus one query for
//! the acceptance test of a cheap element (zero for the first one, whose
//! marginal against the empty k-set is its singleton value), plus at most one
//! query for the packed suffix. The total never exceeds `n(k+1)`.

use std::collections::BTreeMap;
use std::time::Instant;

use super::result::{Algorithm, RunResult, TraceEvent};
use super::{argmax_position, check_compatible};
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::kset::{Element, KSet};
use crate::oracle::CountingOracle;

/// Rule for choosing among positions with equal value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LowestPosition,
    HighestPosition,
}

/// Everything an LAA run produced, for auditing and for RLA.
#[derive(Debug, Clone)]
pub struct LaaRun {
    pub result: RunResult,
    pub trace: Vec<TraceEvent>,
    /// Accepted `(e, i_e)` tuples in acceptance order: `x^t`.
    pub accepted: Vec<(Element, usize)>,
    /// `f(x^t)`.
    pub full_value: f64,
    /// `x'`, the longest feasible suffix of the accepted sequence.
    pub packed: KSet,
    pub packed_value: f64,
    /// `(e_m, i_m)`; `None` while no singleton beats `f(0) = 0`.
    pub best_singleton: Option<(Element, usize)>,
    pub best_singleton_value: f64,
}

pub fn laa(inst: &KnapsackInstance, oracle: &CountingOracle<'_>, tie: TieBreak) -> Result<LaaRun> {
    check_compatible(inst, oracle.inner())?;
    let budget = inst.budget();
    let k = inst.k();
    if !inst.costs().iter().any(|&c| c <= budget) {
        return Err(Error::EmptyUniverse);
    }

    let start = Instant::now();
    let before = oracle.queries();

    let mut x = KSet::empty(k);
    let mut fx = 0.0;
    let mut cost_x = 0.0;
    let mut accepted = Vec::new();
    let mut best_singleton = None;
    let mut best_singleton_value = 0.0;
    let mut trace = Vec::with_capacity(inst.n());
    let mut singles = vec![0.0; k];

    for (&e, &c) in inst.universe().iter().zip(inst.costs()) {
        if c > budget {
            continue;
        }
        for (slot, i) in singles.iter_mut().zip(1..=k) {
            *slot = oracle.evaluate_unchecked(&KSet::from_pairs(k, [(e, i)])?);
        }
        let i_e = argmax_position(&singles, tie);
        let singleton_value = singles[i_e - 1];
        if singleton_value > best_singleton_value {
            best_singleton = Some((e, i_e));
            best_singleton_value = singleton_value;
        }

        let mut event = TraceEvent {
            element: e,
            position: i_e,
            singleton_value: Some(singleton_value),
            marginal: None,
            threshold: None,
            accepted: false,
            running_cost: cost_x,
            running_value: fx,
        };
        if c <= budget / 2.0 {
            let extended_value = if x.is_empty() {
                singleton_value
            } else {
                oracle.evaluate_unchecked(&x.assign(e, i_e)?)
            };
            let marginal = extended_value - fx;
            let threshold = c * fx / budget;
            event.marginal = Some(marginal);
            event.threshold = Some(threshold);
            if marginal >= threshold {
                x.insert(e, i_e)?;
                fx = extended_value;
                cost_x += c;
                accepted.push((e, i_e));
                event.accepted = true;
                event.running_cost = cost_x;
                event.running_value = fx;
            }
        }
        trace.push(event);
    }

    let packed = suffix_pack(&accepted, inst)?;
    let packed_value = if packed.len() == x.len() {
        fx
    } else if packed.is_empty() {
        0.0
    } else {
        oracle.evaluate_unchecked(&packed)
    };

    let solution = match best_singleton {
        Some((e, i)) if best_singleton_value >= packed_value => KSet::from_pairs(k, [(e, i)])?,
        _ => packed.clone(),
    };
    let queries = oracle.queries() - before;
    let wall_time = start.elapsed();

    let value = oracle.inner().evaluate(&solution);
    let cost = solution.total_cost(inst)?;
    let mut params = BTreeMap::new();
    params.insert("B".to_string(), budget.to_string());
    params.insert("k".to_string(), k.to_string());
    params.insert("tie_break".to_string(), format!("{tie:?}"));

    Ok(LaaRun {
        result: RunResult {
            solution,
            value,
            cost,
            queries,
            wall_time,
            algorithm: Algorithm::Laa,
            params,
        },
        trace,
        accepted,
        full_value: fx,
        packed,
        packed_value,
        best_singleton,
        best_singleton_value,
    })
}

/// The longest suffix of `seq` whose total cost fits in the budget.
///
/// Suffix cost grows with length, so this is also the feasible suffix of
/// maximum cost.
pub fn suffix_pack(seq: &[(Element, usize)], inst: &KnapsackInstance) -> Result<KSet> {
    let mut total = 0.0;
    let mut take = 0;
    for &(e, _) in seq.iter().rev() {
        let c = inst.cost(e).ok_or(Error::UnknownElement { element: e })?;
        if total + c > inst.budget() {
            break;
        }
        total += c;
        take += 1;
    }
    KSet::from_pairs(inst.k(), seq[seq.len() - take..].iter().copied())
}
