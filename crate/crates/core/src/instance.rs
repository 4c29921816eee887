use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::kset::Element;

/// A knapsack-constrained problem instance: ground set order, `k`, costs and
/// budget. The universe order is the stream order used by the single-pass
/// solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    universe: Vec<Element>,
    k: usize,
    costs: Vec<f64>,
    budget: f64,
    index: HashMap<Element, usize>,
}

impl KnapsackInstance {
    /// `costs[j]` is the cost of `universe[j]`.
    pub fn new(universe: Vec<Element>, k: usize, costs: Vec<f64>, budget: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInstance(format!("k must be at least 2, got {k}")));
        }
        if universe.len() != costs.len() {
            return Err(Error::InvalidInstance(format!(
                "{} elements but {} costs",
                universe.len(),
                costs.len()
            )));
        }
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::InvalidInstance(format!("budget must be positive, got {budget}")));
        }
        let mut index = HashMap::with_capacity(universe.len());
        for (j, (&e, &c)) in universe.iter().zip(&costs).enumerate() {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "cost of element {e} must be positive, got {c}"
                )));
            }
            if index.insert(e, j).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate element {e}")));
            }
        }
        Ok(Self {
            universe,
            k,
            costs,
            budget,
            index,
        })
    }

    pub fn universe(&self) -> &[Element] {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// Costs aligned with [`KnapsackInstance::universe`].
    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, e: Element) -> Option<f64> {
        self.index.get(&e).map(|&j| self.costs[j])
    }

    pub fn contains(&self, e: Element) -> bool {
        self.index.contains_key(&e)
    }

    /// Same elements and costs under a different budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        Self::new(self.universe.clone(), self.k, self.costs.clone(), budget)
    }

    /// Same elements in a different stream order.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let universe = order.iter().map(|&j| self.universe[j]).collect();
        let costs = order.iter().map(|&j| self.costs[j]).collect();
        Self::new(universe, self.k, costs, self.budget)
    }

    /// Keeps only the elements satisfying `keep`, preserving order.
    pub fn restricted<F>(&self, mut keep: F) -> Result<Self>
    where
        F: FnMut(Element, f64) -> bool,
    {
        let (universe, costs) = self
            .universe
            .iter()
            .zip(&self.costs)
            .filter(|&(&e, &c)| keep(e, c))
            .map(|(&e, &c)| (e, c))
            .unzip();
        Self::new(universe, self.k, costs, self.budget)
    }

    /// Drops every element with `c(e) > B`. Fails with
    /// [`Error::EmptyUniverse`] when nothing is left.
    pub fn normalized(&self) -> Result<Self> {
        let budget = self.budget;
        let out = self.restricted(|_, c| c <= budget)?;
        if out.universe.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        Ok(out)
    }

    pub fn is_normalized(&self) -> bool {
        self.costs.iter().all(|&c| c <= self.budget)
    }
}

/// Free-function form of [`KnapsackInstance::normalized`].
pub fn normalize_instance(inst: &KnapsackInstance) -> Result<KnapsackInstance> {
    inst.normalized()
}
