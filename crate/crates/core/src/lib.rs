//! Non-monotone k-submodular maximization under a knapsack constraint.
//!
//! The crate provides the k-set algebra ([`KSet`]), knapsack instances, a
//! query-counting oracle, two linear-query streaming solvers ([`laa`] and
//! [`rla`]), an exhaustive reference solver, k-submodularity certification,
//! the influence-spread and sensor-entropy objectives, dataset parsers and
//! the experiment runner behind the `ksmk` command-line tool.

pub mod algorithms;
pub mod applications;
pub mod error;
pub mod experiment;
pub mod instance;
pub mod io;
pub mod kset;
pub mod oracle;
pub mod verify;

pub use algorithms::{
    brute_force_opt, greedy_baseline, laa, rla, suffix_pack, Algorithm, LaaRun, RlaRun,
    RunResult, TieBreak, TraceEvent, DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, Result};
pub use instance::{normalize_instance, KnapsackInstance};
pub use kset::{Element, KSet};
pub use oracle::{
    make_coverage_bonus, CountingOracle, CoverageBonusEntry, CoverageBonusObjective,
    CoverageBonusSpec, ModularObjective, Objective, ZeroObjective,
};
pub use applications::{
    GaussianEntropyObjective, LtObjective, Ridge, SensorTable, TopicGraph,
};
pub use experiment::{run_experiment, ExperimentConfig, ResultRow, ResultTable};
pub use io::{InstanceBundle, ObjectiveSpec, Provenance};
pub use verify::{check_ksubmodularity, CheckMode, KSubReport};
