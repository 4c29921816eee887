//! Seeded synthetic instances, graphs and sensor logs.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::applications::{normalized_linear_costs, readings_matrix, Ridge, SensorTable, TopicGraph};
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::oracle::{CoverageBonusEntry, CoverageBonusSpec};

use super::{InstanceBundle, ObjectiveSpec, Provenance};

/// Knobs of the random coverage-bonus family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    /// Each element covers `1..=max_items` shared items.
    pub max_items: usize,
    /// Chance that an element carries a negative bonus.
    pub negative_prob: f64,
    pub cost_range: (f64, f64),
    /// `B` is drawn uniformly from this fraction range of the total cost.
    pub budget_fraction: (f64, f64),
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            max_items: 4,
            negative_prob: 0.5,
            cost_range: (1.0, 10.0),
            budget_fraction: (0.2, 0.8),
        }
    }
}

fn quarter(rng: &mut ChaCha8Rng, max: u32) -> f64 {
    rng.gen_range(0..=max) as f64 * 0.25
}

/// Random coverage-bonus instance with elements `0..n`.
///
/// An element with a negative bonus `−a` at one position owns `p ≥ a`
/// items that no other negative element covers, which keeps `f ≥ 0`; its
/// other positions get at least `+a`, which keeps every pairwise sum
/// nonnegative. Element 0 is negative and element 1 covers everything
/// element 0 covers, so for `n ≥ 2` some marginal is strictly negative.
pub fn gen_random_instance(n: usize, k: usize, seed: u64, params: &FamilyParams) -> Result<InstanceBundle> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::Config("k must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = (n / 2 + 2) as u32;
    let mut next_private = pool;
    let mut entries: Vec<CoverageBonusEntry> = Vec::with_capacity(n);
    let mut privates: Vec<Vec<u32>> = Vec::new();

    for e in 0..n {
        let count = rng.gen_range(1..=params.max_items.max(1)).min(pool as usize);
        let mut items: BTreeSet<u32> = sample(&mut rng, pool as usize, count)
            .into_iter()
            .map(|i| i as u32)
            .collect();
        let negative = match e {
            0 => n >= 2 || rng.gen_bool(params.negative_prob),
            1 => false,
            _ => rng.gen_bool(params.negative_prob),
        };
        let mut bonus = vec![0.0; k];
        if negative {
            let p = rng.gen_range(1..=2u32);
            let own: Vec<u32> = (next_private..next_private + p).collect();
            next_private += p;
            items.extend(&own);
            privates.push(own);
            let a = rng.gen_range(1..=4 * p) as f64 * 0.25;
            let j = rng.gen_range(0..k);
            for (i, w) in bonus.iter_mut().enumerate() {
                *w = if i == j { -a } else { a + quarter(&mut rng, 4) };
            }
        } else {
            for w in bonus.iter_mut() {
                *w = quarter(&mut rng, 4);
            }
            if e == 1 {
                items.extend(&entries[0].items);
            } else if !privates.is_empty() && rng.gen_bool(0.3) {
                let pick = rng.gen_range(0..privates.len());
                items.extend(&privates[pick]);
            }
        }
        entries.push(CoverageBonusEntry {
            element: e,
            items: items.into_iter().collect(),
            bonus,
        });
    }

    let (lo, hi) = params.cost_range;
    let costs: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let (flo, fhi) = params.budget_fraction;
    let budget = rng.gen_range(flo..=fhi) * costs.iter().sum::<f64>();
    let instance = KnapsackInstance::new((0..n).collect(), k, costs, budget)?;
    Ok(InstanceBundle {
        instance,
        objective: ObjectiveSpec::CoverageBonus(CoverageBonusSpec { k, entries }),
        provenance: Provenance::Generated { seed, n, k },
    })
}

/// Directed graph where each node links to `1..=2·avg_out` distinct random
/// targets (capped at `nodes − 1`).
pub fn random_graph(nodes: usize, avg_out: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    if nodes < 2 {
        return edges;
    }
    for u in 0..nodes {
        let d = rng.gen_range(1..=(2 * avg_out).max(1)).min(nodes - 1);
        for t in sample(&mut rng, nodes - 1, d) {
            edges.push((u, if t >= u { t + 1 } else { t }));
        }
    }
    edges
}

/// Sensors on a line observing a shared smooth field. Type `t` reads the
/// field scaled by `0.5^t` plus independent noise, so higher types have
/// small variances and negative entropies.
pub fn synthetic_sensor_table(locations: usize, types: usize, samples: usize, seed: u64) -> Result<SensorTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pos: Vec<f64> = (0..locations).map(|_| rng.gen::<f64>()).collect();
    let mut rows = vec![vec![vec![0.0; samples]; locations]; types];
    for s in 0..samples {
        let modes: Vec<(f64, f64)> = (1..=3)
            .map(|m| (rng.sample::<f64, _>(StandardNormal) / m as f64, rng.gen::<f64>() * std::f64::consts::TAU))
            .collect();
        for (loc, &x) in pos.iter().enumerate() {
            let field: f64 = modes
                .iter()
                .enumerate()
                .map(|(m, &(a, phase))| a * ((m + 1) as f64 * std::f64::consts::PI * x + phase).sin())
                .sum();
            for (t, table) in rows.iter_mut().enumerate() {
                let scale = 0.5f64.powi(t as i32);
                let noise: f64 = rng.sample(StandardNormal);
                table[loc][s] = scale * (field + 0.3 * noise);
            }
        }
    }
    SensorTable::new(
        (0..locations).map(|l| format!("s{l}")).collect(),
        (1..=types).map(|t| format!("m{t}")).collect(),
        rows.iter().map(|r| readings_matrix(r)).collect(),
    )
}

/// Influence instance over every node, priced by out-degree.
pub fn influence_bundle(
    graph: TopicGraph,
    samples: usize,
    seed: u64,
    budget: f64,
    cost_range: (f64, f64),
    provenance: Provenance,
) -> Result<InstanceBundle> {
    let scores: Vec<f64> = (0..graph.node_count()).map(|u| graph.out_degree(u) as f64).collect();
    let costs = normalized_linear_costs(&scores, cost_range.0, cost_range.1)?;
    let instance = KnapsackInstance::new((0..graph.node_count()).collect(), graph.k(), costs, budget)?;
    Ok(InstanceBundle {
        instance,
        objective: ObjectiveSpec::Influence { graph, samples, seed },
        provenance,
    })
}

/// Sensor placement instance over every location, priced by reading
/// variance.
pub fn sensor_bundle(
    table: SensorTable,
    ridge: Ridge,
    budget: f64,
    cost_range: (f64, f64),
    provenance: Provenance,
) -> Result<InstanceBundle> {
    let costs = normalized_linear_costs(&table.variance_scores(), cost_range.0, cost_range.1)?;
    let instance = KnapsackInstance::new((0..table.locations()).collect(), table.types(), costs, budget)?;
    Ok(InstanceBundle {
        instance,
        objective: ObjectiveSpec::Sensor { table, ridge },
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kset::KSet;
    use crate::oracle::Objective;

    #[test]
    fn deterministic() {
        let p = FamilyParams::default();
        assert_eq!(gen_random_instance(8, 3, 42, &p).unwrap(), gen_random_instance(8, 3, 42, &p).unwrap());
        assert_ne!(gen_random_instance(8, 3, 42, &p).unwrap(), gen_random_instance(8, 3, 43, &p).unwrap());
    }

    #[test]
    fn constraints_hold() {
        let p = FamilyParams::default();
        for seed in 0..50 {
            let b = gen_random_instance(2 + seed as usize % 10, 2 + seed as usize % 3, seed, &p).unwrap();
            let ObjectiveSpec::CoverageBonus(spec) = &b.objective else { panic!() };
            for e in &spec.entries {
                for i in 0..spec.k {
                    for j in 0..spec.k {
                        if i != j {
                            assert!(e.bonus[i] + e.bonus[j] >= 0.0);
                        }
                    }
                }
            }
            let inst = &b.instance;
            assert!(inst.costs().iter().all(|c| (1.0..=10.0).contains(c)));
            let total: f64 = inst.costs().iter().sum();
            assert!(inst.budget() >= 0.2 * total - 1e-9 && inst.budget() <= 0.8 * total + 1e-9);

            let f = b.build_objective().unwrap();
            let a = &spec.entries[0];
            let j = a.bonus.iter().position(|&w| w < 0.0).unwrap() + 1;
            let base = KSet::from_pairs(spec.k, [(1, 1)]).unwrap();
            let with = base.assign(0, j).unwrap();
            assert!(f.evaluate(&with) < f.evaluate(&base));
        }
    }

    #[test]
    fn graph_shape() {
        let edges = random_graph(50, 3, 1);
        assert!(edges.iter().all(|&(u, v)| u != v && u < 50 && v < 50));
        let mut uniq = edges.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), edges.len());
        assert_eq!(random_graph(50, 3, 1), edges);
        assert!(random_graph(1, 3, 1).is_empty());
    }

    #[test]
    fn sensor_table_shape() {
        let t = synthetic_sensor_table(6, 3, 40, 5).unwrap();
        assert_eq!((t.locations(), t.types(), t.samples()), (6, 3, 40));
        let v = t.variance_scores();
        assert!(v.iter().all(|&x| x > 0.0));
    }
}
