use std::collections::BTreeMap;
use std::time::Instant;

use super::check_compatible;
use super::result::{Algorithm, RunResult};
use crate::error::Result;
use crate::instance::KnapsackInstance;
use crate::kset::KSet;
use crate::oracle::CountingOracle;

/// Cost-benefit greedy: repeatedly adds the feasible `(e, i)` with the
/// largest marginal gain per unit cost while that gain is positive. A
/// benchmark comparator only; it carries no guarantee for non-monotone
/// objectives.
pub fn greedy_baseline(inst: &KnapsackInstance, oracle: &CountingOracle<'_>) -> Result<RunResult> {
    check_compatible(inst, oracle.inner())?;
    let start = Instant::now();
    let before = oracle.queries();
    let budget = inst.budget();
    let k = inst.k();

    let mut x = KSet::empty(k);
    let mut fx = 0.0;
    let mut cost = 0.0;
    loop {
        let mut best: Option<(KSet, f64, f64, f64)> = None;
        for (&e, &c) in inst.universe().iter().zip(inst.costs()) {
            if x.contains(e) || cost + c > budget {
                continue;
            }
            for i in 1..=k {
                let candidate = x.assign(e, i)?;
                let value = oracle.evaluate_unchecked(&candidate);
                let density = (value - fx) / c;
                if value > fx && best.as_ref().map_or(true, |b| density > b.1) {
                    best = Some((candidate, density, value, c));
                }
            }
        }
        match best {
            Some((next, _, value, c)) => {
                x = next;
                fx = value;
                cost += c;
            }
            None => break,
        }
    }
    let queries = oracle.queries() - before;
    let wall_time = start.elapsed();

    let value = oracle.inner().evaluate(&x);
    let cost = x.total_cost(inst)?;
    let mut params = BTreeMap::new();
    params.insert("B".to_string(), budget.to_string());
    params.insert("k".to_string(), k.to_string());
    Ok(RunResult {
        solution: x,
        value,
        cost,
        queries,
        wall_time,
        algorithm: Algorithm::Greedy,
        params,
    })
}
