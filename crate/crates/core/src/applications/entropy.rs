//! Multi-type sensor placement scored by Gaussian differential entropy.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kset::{Element, KSet};
use crate::oracle::Objective;

const LN_2PI_E: f64 = 2.837_877_066_409_345_3;

/// Aligned readings: `readings[t]` is a `locations × samples` matrix for
/// measurement type `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorTable {
    sensor_ids: Vec<String>,
    type_names: Vec<String>,
    readings: Vec<DMatrix<f64>>,
}

impl SensorTable {
    pub fn new(
        sensor_ids: Vec<String>,
        type_names: Vec<String>,
        readings: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if type_names.len() != readings.len() || readings.is_empty() {
            return Err(Error::InvalidInstance(format!(
                "{} type names for {} reading matrices",
                type_names.len(),
                readings.len()
            )));
        }
        let (rows, cols) = readings[0].shape();
        if rows != sensor_ids.len() || rows == 0 {
            return Err(Error::InvalidInstance(format!(
                "{rows} reading rows for {} sensors",
                sensor_ids.len()
            )));
        }
        if readings.iter().any(|m| m.shape() != (rows, cols)) {
            return Err(Error::InvalidInstance("reading matrices differ in shape".into()));
        }
        if cols < 2 {
            return Err(Error::InvalidInstance("need at least two samples".into()));
        }
        Ok(Self {
            sensor_ids,
            type_names,
            readings,
        })
    }

    pub fn locations(&self) -> usize {
        self.sensor_ids.len()
    }

    pub fn types(&self) -> usize {
        self.type_names.len()
    }

    pub fn samples(&self) -> usize {
        self.readings[0].ncols()
    }

    pub fn sensor_ids(&self) -> &[String] {
        &self.sensor_ids
    }

    pub fn type_names(&self) -> &[String] {
        &self.type_names
    }

    pub fn readings(&self, t: usize) -> &DMatrix<f64> {
        &self.readings[t]
    }

    /// Joint sample covariance of all `(location, type)` variables, indexed
    /// `location * types + type`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let (n, k, m) = (self.locations(), self.types(), self.samples());
        let mut data = DMatrix::zeros(n * k, m);
        for loc in 0..n {
            for t in 0..k {
                let row = self.readings[t].row(loc);
                let mean = row.mean();
                for s in 0..m {
                    data[(loc * k + t, s)] = row[s] - mean;
                }
            }
        }
        (&data * data.transpose()) / (m as f64 - 1.0)
    }

    /// Mean per-type reading variance of each location.
    pub fn variance_scores(&self) -> Vec<f64> {
        (0..self.locations())
            .map(|loc| {
                self.readings
                    .iter()
                    .map(|m| m.row(loc).variance() * m.ncols() as f64 / (m.ncols() as f64 - 1.0))
                    .sum::<f64>()
                    / self.types() as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ridge {
    /// Adds `factor · mean(diag Σ)` to the diagonal.
    Relative(f64),
    /// No regularization; singular covariances are rejected.
    None,
}

impl Default for Ridge {
    fn default() -> Self {
        Ridge::Relative(1e-6)
    }
}

/// `f(x) = H(S_x)` where `S_x = {(e, x(e))}` and
/// `H(S) = ½ log((2πe)^{|S|} det Σ_S)`, with `H(∅) = 0`.
pub struct GaussianEntropyObjective {
    locations: usize,
    k: usize,
    cov: DMatrix<f64>,
}

impl GaussianEntropyObjective {
    pub fn from_table(table: &SensorTable, ridge: Ridge) -> Result<Self> {
        Self::from_covariance(table.locations(), table.types(), table.covariance(), ridge)
    }

    /// `cov` is indexed `location * k + (position - 1)`.
    pub fn from_covariance(
        locations: usize,
        k: usize,
        mut cov: DMatrix<f64>,
        ridge: Ridge,
    ) -> Result<Self> {
        let dim = locations * k;
        if cov.shape() != (dim, dim) {
            return Err(Error::InvalidInstance(format!(
                "covariance is {:?}, expected {dim}x{dim}",
                cov.shape()
            )));
        }
        match ridge {
            Ridge::Relative(factor) => {
                let shift = factor * cov.diagonal().mean();
                for d in 0..dim {
                    cov[(d, d)] += shift;
                }
            }
            Ridge::None => {}
        }
        if cov.clone().cholesky().is_none() {
            return Err(Error::SingularCovariance);
        }
        Ok(Self { locations, k, cov })
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    fn variables(&self, x: &KSet) -> Vec<usize> {
        x.iter().map(|(e, i)| e * self.k + i - 1).collect()
    }

    /// Entropy of the variables `idx`.
    pub fn entropy(&self, idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return 0.0;
        }
        let m = idx.len();
        let sub = DMatrix::from_fn(m, m, |a, b| self.cov[(idx[a], idx[b])]);
        let log_det = match sub.cholesky() {
            Some(c) => 2.0 * c.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>(),
            None => f64::NEG_INFINITY,
        };
        0.5 * (m as f64 * LN_2PI_E + log_det)
    }
}

impl Objective for GaussianEntropyObjective {
    fn k(&self) -> usize {
        self.k
    }

    fn contains(&self, e: Element) -> bool {
        e < self.locations
    }

    fn evaluate(&self, x: &KSet) -> f64 {
        self.entropy(&self.variables(x))
    }
}

/// Convenience wrapper for a single evaluation.
pub fn gaussian_entropy_objective(table: &SensorTable, x: &KSet) -> Result<f64> {
    if let Some(e) = x.support().find(|&e| e >= table.locations()) {
        return Err(Error::UnknownElement { element: e });
    }
    let f = GaussianEntropyObjective::from_table(table, Ridge::default())?;
    Ok(f.evaluate(x))
}

/// Row-major nested readings as a matrix.
pub fn readings_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let cols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c])
}
