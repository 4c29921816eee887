//! Dataset parsers, the instance text format and seeded generators.

mod edge_list;
mod generate;
mod instance_file;
mod sensors;

use std::path::PathBuf;

pub use edge_list::{parse_edge_list, parse_edge_list_lenient, EdgeListReport, WeightMode};
pub use generate::{
    gen_random_instance, influence_bundle, random_graph, sensor_bundle, synthetic_sensor_table,
    FamilyParams,
};
pub use instance_file::{read_instance, write_instance};
pub use sensors::{parse_sensor_readings, parse_sensor_readings_with, SensorOptions, SensorReport};

use crate::applications::{GaussianEntropyObjective, LtObjective, Ridge, SensorTable, TopicGraph};
use crate::error::Result;
use crate::instance::KnapsackInstance;
use crate::oracle::{CoverageBonusObjective, CoverageBonusSpec, Objective};

/// The objective an instance is solved against.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    CoverageBonus(CoverageBonusSpec),
    Influence {
        graph: TopicGraph,
        samples: usize,
        seed: u64,
    },
    Sensor {
        table: SensorTable,
        ridge: Ridge,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Generated { seed: u64, n: usize, k: usize },
    File(PathBuf),
    Inline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBundle {
    pub instance: KnapsackInstance,
    pub objective: ObjectiveSpec,
    pub provenance: Provenance,
}

impl InstanceBundle {
    pub fn build_objective(&self) -> Result<Box<dyn Objective + Send>> {
        Ok(match &self.objective {
            ObjectiveSpec::CoverageBonus(spec) => Box::new(CoverageBonusObjective::new(spec.clone())?),
            ObjectiveSpec::Influence { graph, samples, seed } => {
                Box::new(LtObjective::new(graph.clone(), *samples, *seed)?)
            }
            ObjectiveSpec::Sensor { table, ridge } => {
                Box::new(GaussianEntropyObjective::from_table(table, *ridge)?)
            }
        })
    }
}
