//! Fixtures shared by the criterion benchmarks.

use ksmk_core::applications::{LtObjective, TopicGraph};
use ksmk_core::io::{gen_random_instance, random_graph, FamilyParams, InstanceBundle};
use ksmk_core::{CoverageBonusObjective, KnapsackInstance, ObjectiveSpec};

/// Random coverage-bonus instance with `n` elements and its objective.
pub fn coverage(n: usize, k: usize, seed: u64) -> (KnapsackInstance, CoverageBonusObjective) {
    let InstanceBundle { instance, objective, .. } =
        gen_random_instance(n, k, seed, &FamilyParams::default()).expect("valid family parameters");
    let ObjectiveSpec::CoverageBonus(spec) = objective else {
        unreachable!("generator emits coverage-bonus instances")
    };
    (instance, CoverageBonusObjective::new(spec).expect("generator respects pairwise bonuses"))
}

/// Influence objective on a random graph with unit costs and budget `budget`.
pub fn influence(nodes: usize, k: usize, samples: usize, budget: f64, seed: u64) -> (KnapsackInstance, LtObjective) {
    let edges = random_graph(nodes, 4, seed);
    let g = TopicGraph::with_derived_weights(nodes, k, edges, seed).expect("edges within range");
    let inst = KnapsackInstance::new((0..nodes).collect(), k, vec![1.0; nodes], budget).expect("valid instance");
    (inst, LtObjective::new(g, samples, seed).expect("samples > 0"))
}
