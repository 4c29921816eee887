use std::collections::BTreeMap;
use std::fs::File;
use std::time::Duration;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Application, ExperimentConfig};
use crate::algorithms::{brute_force_opt, greedy_baseline, laa, rla, Algorithm, RunResult, TieBreak};
use crate::applications::{Ridge, TopicGraph};
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::kset::KSet;
use crate::io::{
    gen_random_instance, influence_bundle, parse_edge_list, parse_sensor_readings, random_graph,
    sensor_bundle, synthetic_sensor_table, FamilyParams, InstanceBundle, Provenance, WeightMode,
};
use crate::oracle::{CountingOracle, Objective};

/// One `results.csv` row. Failed runs carry `NaN` value and time and zero
/// queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algorithm: String,
    #[serde(rename = "B")]
    pub budget: f64,
    pub rep: usize,
    pub value: f64,
    pub queries: u64,
    pub millis: f64,
    pub seed: u64,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.value.is_nan()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub application: Application,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub rows: Vec<ResultRow>,
    /// `algorithm B=… rep=…: error` for every failed row.
    pub failures: Vec<String>,
}

/// Runs one algorithm on one instance with a fresh counting oracle. When no
/// element fits the budget the streaming solvers report the empty k-set,
/// which is then the only feasible solution.
pub fn solve(
    algorithm: Algorithm,
    inst: &KnapsackInstance,
    f: &dyn Objective,
    epsilon: f64,
    tie: TieBreak,
    max_enum: u64,
) -> Result<RunResult> {
    if matches!(algorithm, Algorithm::Laa | Algorithm::Rla) && inst.costs().iter().all(|&c| c > inst.budget()) {
        if algorithm == Algorithm::Rla && !(epsilon > 0.0 && epsilon < 0.2) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        let mut params = BTreeMap::new();
        params.insert("B".to_string(), inst.budget().to_string());
        params.insert("k".to_string(), inst.k().to_string());
        return Ok(RunResult {
            solution: KSet::empty(inst.k()),
            value: 0.0,
            cost: 0.0,
            queries: 0,
            wall_time: Duration::ZERO,
            algorithm,
            params,
        });
    }
    let oracle = CountingOracle::new(f);
    match algorithm {
        Algorithm::Laa => laa(inst, &oracle, tie).map(|r| r.result),
        Algorithm::Rla => rla(inst, &oracle, epsilon, tie).map(|r| r.result),
        Algorithm::Greedy => greedy_baseline(inst, &oracle),
        Algorithm::Brute => brute_force_opt(inst, f, max_enum),
    }
}

fn rep_seed(cfg: &ExperimentConfig, rep: usize) -> u64 {
    cfg.seed.wrapping_add(rep as u64)
}

/// Builds the instance for each repetition, with budget set to the first
/// budget of the sweep.
pub fn load_instances(cfg: &ExperimentConfig) -> Result<Vec<InstanceBundle>> {
    let budget = *cfg
        .budgets
        .first()
        .ok_or_else(|| Error::Config("budget list is empty".into()))?;
    let shared = match cfg.application {
        Application::Synthetic => None,
        Application::Influence => {
            let (g, prov) = load_graph(cfg)?;
            Some(Shared::Graph(g, prov))
        }
        Application::Sensor => Some(load_sensors(cfg, budget)?),
    };
    (0..cfg.reps)
        .map(|rep| {
            let seed = rep_seed(cfg, rep);
            let mut bundle = match (&shared, cfg.application) {
                (_, Application::Synthetic) => gen_random_instance(cfg.n, cfg.k, seed, &FamilyParams::default())?,
                (Some(Shared::Graph(g, prov)), _) => {
                    influence_bundle(g.clone(), cfg.mc_samples, seed, budget, cfg.cost_range, prov.clone())?
                }
                (Some(Shared::Bundle(b)), _) => b.clone(),
                (None, _) => unreachable!(),
            };
            bundle.instance = bundle.instance.with_budget(budget)?;
            if let Some(s) = cfg.shuffle_seed {
                let mut order: Vec<usize> = (0..bundle.instance.n()).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(s.wrapping_add(rep as u64)));
                bundle.instance = bundle.instance.reordered(&order)?;
            }
            Ok(bundle)
        })
        .collect()
}

enum Shared {
    Graph(TopicGraph, Provenance),
    Bundle(InstanceBundle),
}

fn load_graph(cfg: &ExperimentConfig) -> Result<(TopicGraph, Provenance)> {
    match &cfg.input {
        Some(path) => {
            let mode = if cfg.explicit_weights {
                WeightMode::Explicit
            } else {
                WeightMode::Derived { seed: cfg.seed }
            };
            let g = parse_edge_list(File::open(path)?, cfg.k, mode)?;
            Ok((g, Provenance::File(path.clone())))
        }
        None => {
            let edges = random_graph(cfg.n, cfg.avg_degree, cfg.seed);
            let g = TopicGraph::with_derived_weights(cfg.n, cfg.k, edges, cfg.seed)?;
            Ok((g, Provenance::Generated { seed: cfg.seed, n: cfg.n, k: cfg.k }))
        }
    }
}

fn load_sensors(cfg: &ExperimentConfig, budget: f64) -> Result<Shared> {
    let (table, prov) = match &cfg.input {
        Some(path) => (parse_sensor_readings(File::open(path)?)?.table, Provenance::File(path.clone())),
        None => (
            synthetic_sensor_table(cfg.n, cfg.k, cfg.samples, cfg.seed)?,
            Provenance::Generated { seed: cfg.seed, n: cfg.n, k: cfg.k },
        ),
    };
    Ok(Shared::Bundle(sensor_bundle(table, Ridge::default(), budget, cfg.cost_range, prov)?))
}

/// Runs the full grid. Budgets vary slowest, then algorithms, then
/// repetitions; per-run failures become marked rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let bundles = load_instances(cfg)?;
    run_bundles(cfg, &bundles)
}

/// Runs the grid over prepared per-repetition bundles.
pub fn run_bundles(cfg: &ExperimentConfig, bundles: &[InstanceBundle]) -> Result<ResultTable> {
    cfg.validate()?;
    if bundles.len() != cfg.reps {
        return Err(Error::Config(format!(
            "{} instances for {} repetitions",
            bundles.len(),
            cfg.reps
        )));
    }
    let objectives = bundles
        .iter()
        .map(|b| b.build_objective())
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    for &budget in &cfg.budgets {
        for &alg in &cfg.algorithms {
            for rep in 0..cfg.reps {
                cells.push((budget, alg, rep));
            }
        }
    }
    let outcomes: Vec<(ResultRow, Option<String>)> = cells
        .into_par_iter()
        .map(|(budget, alg, rep)| {
            let run = bundles[rep].instance.with_budget(budget).and_then(|inst| {
                solve(alg, &inst, objectives[rep].as_ref(), cfg.epsilon, cfg.tie_break, cfg.max_enum)
            });
            let seed = rep_seed(cfg, rep);
            let mut row = ResultRow {
                algorithm: alg.name().to_string(),
                budget,
                rep,
                value: f64::NAN,
                queries: 0,
                millis: f64::NAN,
                seed,
            };
            match run {
                Ok(r) => {
                    row.value = r.value;
                    row.queries = r.queries;
                    row.millis = r.wall_time.as_secs_f64() * 1e3;
                    (row, None)
                }
                Err(e) => (row, Some(format!("{} B={budget} rep={rep}: {e}", alg.name()))),
            }
        })
        .collect();
    let (rows, failures): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    Ok(ResultTable {
        application: cfg.application,
        n: bundles[0].instance.n(),
        k: bundles[0].instance.k(),
        epsilon: cfg.epsilon,
        rows,
        failures: failures.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n: 8,
            k: 3,
            budgets: vec![3.0, 5.0],
            algorithms: vec![Algorithm::Laa, Algorithm::Rla, Algorithm::Brute],
            reps: 1,
            seed: 7,
            ..Default::default()
        }
    }

    #[test]
    fn grid_rows_and_dominance() {
        let table = run_experiment(&small()).unwrap();
        assert_eq!(table.rows.len(), 6);
        for b in [3.0, 5.0] {
            let get = |a: &str| {
                table
                    .rows
                    .iter()
                    .find(|r| r.algorithm == a && r.budget == b)
                    .unwrap()
                    .clone()
            };
            let (l, r, o) = (get("laa"), get("rla"), get("brute"));
            assert!(!l.failed() && !r.failed() && !o.failed());
            assert!(r.value >= l.value);
            assert!(o.value >= r.value);
        }
    }

    #[test]
    fn deterministic_columns() {
        let cfg = ExperimentConfig { reps: 2, shuffle_seed: Some(3), ..small() };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!((x.value.to_bits(), x.queries, x.seed), (y.value.to_bits(), y.queries, y.seed));
        }
    }

    #[test]
    fn budget_below_every_cost() {
        for seed in 0..20 {
            let cfg = ExperimentConfig { seed, budgets: vec![0.5], ..small() };
            let t = run_experiment(&cfg).unwrap();
            assert!(t.failures.is_empty());
            assert!(t.rows.iter().all(|r| r.value == 0.0));
        }
    }

    #[test]
    fn empty_budgets_rejected() {
        let cfg = ExperimentConfig { budgets: vec![], ..small() };
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn brute_too_large_is_a_failure_row() {
        let cfg = ExperimentConfig {
            n: 30,
            budgets: vec![20.0],
            algorithms: vec![Algorithm::Laa, Algorithm::Brute],
            max_enum: 1000,
            ..small()
        };
        let table = run_experiment(&cfg).unwrap();
        assert!(!table.rows[0].failed());
        assert!(table.rows[1].failed());
        assert_eq!(table.failures.len(), 1);
    }

    #[test]
    fn applications_run() {
        let cfg = ExperimentConfig {
            application: Application::Influence,
            n: 40,
            k: 2,
            mc_samples: 20,
            budgets: vec![10.0, 20.0],
            algorithms: vec![Algorithm::Laa, Algorithm::Rla, Algorithm::Greedy],
            ..small()
        };
        let t = run_experiment(&cfg).unwrap();
        assert!(t.failures.is_empty(), "{:?}", t.failures);
        let cfg = ExperimentConfig {
            application: Application::Sensor,
            n: 12,
            k: 3,
            samples: 60,
            ..cfg
        };
        let t = run_experiment(&cfg).unwrap();
        assert!(t.failures.is_empty(), "{:?}", t.failures);
    }
}
