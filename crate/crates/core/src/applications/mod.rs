//! Influence spread and sensor placement objectives, and the cost model
//! used to price their elements.

mod costs;
mod entropy;
mod lt;

pub use costs::normalized_linear_costs;
pub use entropy::{
    gaussian_entropy_objective, readings_matrix, GaussianEntropyObjective, Ridge, SensorTable,
};
pub use lt::{lt_exact_spread, lt_spread_estimate, LtObjective, TopicGraph};
