use std::collections::BTreeMap;
use std::time::Instant;

use super::check_compatible;
use super::result::{Algorithm, RunResult};
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::kset::KSet;
use crate::oracle::{CountingOracle, Objective};

/// Default cap on `(k+1)^n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 5_000_000;

/// Exact optimum over every feasible assignment of the universe.
///
/// Assignments are visited in lexicographic order of the position vector
/// `(x(e_1), ..., x(e_n))` and only strict improvements are kept, so ties
/// resolve to the lexicographically smallest maximizer. Branches that exceed
/// the budget are pruned.
pub fn brute_force_opt(inst: &KnapsackInstance, f: &dyn Objective, cap: u64) -> Result<RunResult> {
    check_compatible(inst, f)?;
    let states = ((inst.k() + 1) as f64).powi(inst.n() as i32);
    if states > cap as f64 {
        return Err(Error::InstanceTooLarge { states, cap });
    }
    let start = Instant::now();
    let oracle = CountingOracle::new(f);
    let mut search = Search {
        inst,
        oracle: &oracle,
        current: KSet::empty(inst.k()),
        best: KSet::empty(inst.k()),
        best_value: f64::NEG_INFINITY,
    };
    search.visit(0, 0.0)?;
    let Search { best, .. } = search;
    let queries = oracle.queries();
    let wall_time = start.elapsed();

    let value = f.evaluate(&best);
    let cost = best.total_cost(inst)?;
    let mut params = BTreeMap::new();
    params.insert("B".to_string(), inst.budget().to_string());
    params.insert("k".to_string(), inst.k().to_string());
    params.insert("max_enum".to_string(), cap.to_string());
    Ok(RunResult {
        solution: best,
        value,
        cost,
        queries,
        wall_time,
        algorithm: Algorithm::Brute,
        params,
    })
}

struct Search<'a, 'o> {
    inst: &'a KnapsackInstance,
    oracle: &'a CountingOracle<'o>,
    current: KSet,
    best: KSet,
    best_value: f64,
}

impl Search<'_, '_> {
    fn visit(&mut self, depth: usize, cost: f64) -> Result<()> {
        if depth == self.inst.n() {
            let value = self.oracle.evaluate_unchecked(&self.current);
            if value > self.best_value {
                self.best_value = value;
                self.best = self.current.clone();
            }
            return Ok(());
        }
        self.visit(depth + 1, cost)?;
        let e = self.inst.universe()[depth];
        let c = self.inst.costs()[depth];
        if cost + c > self.inst.budget() {
            return Ok(());
        }
        for i in 1..=self.inst.k() {
            let saved = std::mem::replace(&mut self.current, KSet::empty(self.inst.k()));
            self.current = saved.assign(e, i)?;
            self.visit(depth + 1, cost + c)?;
            self.current = saved;
        }
        Ok(())
    }
}
