//! Robust linear approximation (RLA).
//!
//! LAA brackets the optimum: with `Γ = f(s_b)`, `Γ ≤ opt ≤ 19Γ`. For every
//! guess `v = (1+ε)^i` in that bracket a candidate `s_v` is grown in one
//! pass, admitting `(e, i_v)` when it fits and its density gain reaches
//! `τ_v = 2v / (5B)`. The answer is the best of `s_b`, LAA's best singleton
//! and every `s_v`.

use std::collections::BTreeMap;
use std::time::Instant;

use super::laa::{laa, LaaRun, TieBreak};
use super::result::{Algorithm, RunResult, TraceEvent};
use super::argmax_position;
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::kset::KSet;
use crate::oracle::CountingOracle;

/// Candidate solution grown for one guess of the optimum.
#[derive(Debug, Clone)]
pub struct GuessRun {
    pub guess: f64,
    pub threshold: f64,
    pub solution: KSet,
    pub value: f64,
    pub cost: f64,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, Clone)]
pub struct RlaRun {
    pub result: RunResult,
    pub laa: LaaRun,
    /// `Γ = f(s_b)`.
    pub gamma: f64,
    pub guesses: Vec<GuessRun>,
}

/// `{(1+ε)^i : i ∈ ℤ, Γ ≤ (1+ε)^i ≤ 19Γ}` in ascending order; empty when
/// `Γ ≤ 0`.
pub fn guess_set(gamma: f64, epsilon: f64) -> Vec<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Vec::new();
    }
    let base = 1.0 + epsilon;
    let upper = 19.0 * gamma;
    let pow = |i: i32| base.powi(i);
    let mut lo = (gamma.ln() / base.ln()).ceil() as i32;
    while pow(lo) < gamma {
        lo += 1;
    }
    while pow(lo - 1) >= gamma {
        lo -= 1;
    }
    let mut hi = (upper.ln() / base.ln()).floor() as i32;
    while pow(hi) > upper {
        hi -= 1;
    }
    while pow(hi + 1) <= upper {
        hi += 1;
    }
    (lo..=hi).map(pow).collect()
}

pub fn rla(
    inst: &KnapsackInstance,
    oracle: &CountingOracle<'_>,
    epsilon: f64,
    tie: TieBreak,
) -> Result<RlaRun> {
    if !(epsilon > 0.0 && epsilon < 0.2) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let start = Instant::now();
    let before = oracle.queries();
    let base = laa(inst, oracle, tie)?;
    let gamma = base.result.value;
    let budget = inst.budget();
    let k = inst.k();

    let mut guesses: Vec<GuessRun> = guess_set(gamma, epsilon)
        .into_iter()
        .map(|guess| GuessRun {
            guess,
            threshold: 2.0 * guess / (5.0 * budget),
            solution: KSet::empty(k),
            value: 0.0,
            cost: 0.0,
            trace: Vec::new(),
        })
        .collect();

    let mut evals = vec![0.0; k];
    let mut values = vec![0.0; k];
    let mut extended = Vec::with_capacity(k);
    for (&e, &c) in inst.universe().iter().zip(inst.costs()) {
        if c > budget {
            continue;
        }
        for g in guesses.iter_mut() {
            extended.clear();
            for i in 1..=k {
                let candidate = g.solution.assign(e, i)?;
                evals[i - 1] = oracle.evaluate_unchecked(&candidate);
                values[i - 1] = evals[i - 1] - g.value;
                extended.push(candidate);
            }
            let i_v = argmax_position(&values, tie);
            let marginal = values[i_v - 1];
            let accept = g.cost + c <= budget && marginal / c >= g.threshold;
            if accept {
                g.solution = extended.swap_remove(i_v - 1);
                g.value = evals[i_v - 1];
                g.cost += c;
            }
            g.trace.push(TraceEvent {
                element: e,
                position: i_v,
                singleton_value: None,
                marginal: Some(marginal),
                threshold: Some(g.threshold),
                accepted: accept,
                running_cost: g.cost,
                running_value: g.value,
            });
        }
    }

    let mut solution = base.result.solution.clone();
    let mut best = base.result.value;
    if let Some((e, i)) = base.best_singleton {
        if base.best_singleton_value > best {
            solution = KSet::from_pairs(k, [(e, i)])?;
            best = base.best_singleton_value;
        }
    }
    for g in &guesses {
        if g.value > best {
            solution = g.solution.clone();
            best = g.value;
        }
    }
    let queries = oracle.queries() - before;
    let wall_time = start.elapsed();

    let value = oracle.inner().evaluate(&solution);
    let cost = solution.total_cost(inst)?;
    let mut params = BTreeMap::new();
    params.insert("B".to_string(), budget.to_string());
    params.insert("k".to_string(), k.to_string());
    params.insert("epsilon".to_string(), epsilon.to_string());
    params.insert("guesses".to_string(), guesses.len().to_string());
    params.insert("tie_break".to_string(), format!("{tie:?}"));

    Ok(RlaRun {
        result: RunResult {
            solution,
            value,
            cost,
            queries,
            wall_time,
            algorithm: Algorithm::Rla,
            params,
        },
        laa: base,
        gamma,
        guesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kset::Element;
    use crate::oracle::{CoverageBonusEntry, CoverageBonusObjective, CoverageBonusSpec, ZeroObjective};

    #[test]
    fn guess_set_brackets() {
        for &(gamma, eps) in &[(1.0, 0.1), (4.0, 0.05), (0.37, 0.15), (1234.5, 0.1), (1e-6, 0.1)] {
            let a = guess_set(gamma, eps);
            assert!(!a.is_empty());
            let bound = (19f64.ln() / (1.0 + eps).ln()).ceil() as usize + 1;
            assert!(a.len() <= bound);
            for &v in &a {
                assert!(v >= gamma && v <= 19.0 * gamma, "{v} outside [{gamma}, {}]", 19.0 * gamma);
            }
            // maximality: neighbours fall outside the bracket
            assert!(a[0] / (1.0 + eps) < gamma);
            assert!(a[a.len() - 1] * (1.0 + eps) > 19.0 * gamma);
        }
        assert!(guess_set(0.0, 0.1).is_empty());
        assert!(guess_set(-1.0, 0.1).is_empty());
    }

    #[test]
    fn guess_set_for_unit_gamma() {
        // (1.1)^0 = 1 through (1.1)^30 ≈ 17.45; (1.1)^31 ≈ 19.19 > 19.
        let a = guess_set(1.0, 0.1);
        assert_eq!(a.len(), 31);
        assert_eq!(a[0], 1.0);
    }

    fn coverage_example() -> (KnapsackInstance, CoverageBonusObjective) {
        let inst = KnapsackInstance::new(vec![0, 1, 2], 2, vec![1.0, 2.0, 3.0], 4.0).unwrap();
        let entries = [(0, vec![1]), (1, vec![2, 3]), (2, vec![1, 2, 3, 4])]
            .into_iter()
            .map(|(element, items): (Element, Vec<u32>)| CoverageBonusEntry {
                element,
                items,
                bonus: vec![0.0, 0.0],
            })
            .collect();
        let f = CoverageBonusObjective::new(CoverageBonusSpec { k: 2, entries }).unwrap();
        (inst, f)
    }

    #[test]
    fn coverage_example_dominates_laa() {
        let (inst, f) = coverage_example();
        let o = CountingOracle::new(&f);
        let run = rla(&inst, &o, 0.1, TieBreak::default()).unwrap();
        assert!(run.result.value >= 4.0);
        assert!(run.result.value >= run.laa.result.value);
        assert!(run.result.cost <= 4.0);
        assert_eq!(run.gamma, 4.0);
        assert_eq!(run.result.queries, o.queries());
        for g in &run.guesses {
            assert!(g.cost <= 4.0);
        }
    }

    #[test]
    fn degenerate_zero_objective() {
        let inst = KnapsackInstance::new(vec![0, 1], 2, vec![1.0, 1.0], 4.0).unwrap();
        let f = ZeroObjective::new(2, [0, 1]);
        let o = CountingOracle::new(&f);
        let run = rla(&inst, &o, 0.1, TieBreak::default()).unwrap();
        assert_eq!(run.gamma, 0.0);
        assert!(run.guesses.is_empty());
        assert_eq!(run.result.value, 0.0);
        assert_eq!(run.result.solution, run.laa.result.solution);
        assert_eq!(run.result.queries, run.laa.result.queries);
    }

    #[test]
    fn epsilon_range() {
        let (inst, f) = coverage_example();
        let o = CountingOracle::new(&f);
        for eps in [0.0, -0.1, 0.2, 0.5, f64::NAN] {
            assert!(matches!(
                rla(&inst, &o, eps, TieBreak::default()),
                Err(Error::EpsilonOutOfRange(_))
            ));
        }
    }
}
