//! Objective functions over k-sets and the query-counting oracle wrapper.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::kset::{Element, KSet};

/// A normalized set function `f: (k+1)^V → ℝ` with `f(0) = 0`.
///
/// Implementations must be deterministic: the same k-set always yields the
/// same value.
pub trait Objective: Sync {
    fn k(&self) -> usize;

    /// Whether `e` belongs to the ground set the objective is defined on.
    fn contains(&self, e: Element) -> bool;

    /// `f(x)`. Callers guarantee `supp(x)` lies in the ground set.
    fn evaluate(&self, x: &KSet) -> f64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn k(&self) -> usize {
        (**self).k()
    }
    fn contains(&self, e: Element) -> bool {
        (**self).contains(e)
    }
    fn evaluate(&self, x: &KSet) -> f64 {
        (**self).evaluate(x)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn k(&self) -> usize {
        (**self).k()
    }
    fn contains(&self, e: Element) -> bool {
        (**self).contains(e)
    }
    fn evaluate(&self, x: &KSet) -> f64 {
        (**self).evaluate(x)
    }
}

/// Wraps an objective and counts every evaluation.
///
/// The counter is atomic, so one oracle may be shared across threads; the
/// solvers nevertheless use one oracle per run.
pub struct CountingOracle<'a> {
    inner: &'a dyn Objective,
    queries: AtomicU64,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn Objective) -> Self {
        Self {
            inner,
            queries: AtomicU64::new(0),
        }
    }

    pub fn inner(&self) -> &'a dyn Objective {
        self.inner
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_counter(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    /// Counted `f(x)`, after checking `x` against the ground set.
    pub fn evaluate(&self, x: &KSet) -> Result<f64> {
        self.check(x)?;
        Ok(self.evaluate_unchecked(x))
    }

    /// Counted `f(x)` without validation. Used by the solvers once the
    /// instance has been checked against the objective.
    pub(crate) fn evaluate_unchecked(&self, x: &KSet) -> f64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(x)
    }

    /// `Δ_{(e,i)} f(x)` computed from scratch: two queries.
    pub fn marginal_gain(&self, x: &KSet, e: Element, i: usize) -> Result<f64> {
        let fx = self.evaluate(x)?;
        self.marginal_gain_cached(x, fx, e, i)
    }

    /// `Δ_{(e,i)} f(x)` given the caller's cached `f(x)`: one query.
    pub fn marginal_gain_cached(&self, x: &KSet, fx: f64, e: Element, i: usize) -> Result<f64> {
        let extended = x.assign(e, i)?;
        Ok(self.evaluate(&extended)? - fx)
    }

    fn check(&self, x: &KSet) -> Result<()> {
        if x.k() != self.inner.k() {
            return Err(Error::MismatchedK {
                left: x.k(),
                right: self.inner.k(),
            });
        }
        match x.support().find(|&e| !self.inner.contains(e)) {
            Some(element) => Err(Error::UnknownElement { element }),
            None => Ok(()),
        }
    }
}

/// One row of a [`CoverageBonusObjective`]: the element's coverage items and
/// its `k` per-position bonus weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageBonusEntry {
    pub element: Element,
    pub items: Vec<u32>,
    pub bonus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageBonusSpec {
    pub k: usize,
    pub entries: Vec<CoverageBonusEntry>,
}

/// `f(x) = |⋃_{e ∈ supp(x)} C(e)| + Σ_{e ∈ supp(x)} w_{e, x(e)}`.
///
/// The coverage term is position independent and submodular; the bonus term
/// is modular in `(e, i)`. With `w_{e,i} + w_{e,j} ≥ 0` for all `i ≠ j`
/// the function is k-submodular while negative bonuses make it non-monotone.
#[derive(Debug, Clone)]
pub struct CoverageBonusObjective {
    spec: CoverageBonusSpec,
    rows: HashMap<Element, usize>,
    dense_items: Vec<Vec<u32>>,
    item_count: usize,
}

impl CoverageBonusObjective {
    /// Validates the spec, including the pairwise constraint on bonuses.
    pub fn new(spec: CoverageBonusSpec) -> Result<Self> {
        for entry in &spec.entries {
            for i in 0..spec.k {
                for j in (i + 1)..spec.k {
                    if entry.bonus[i] + entry.bonus[j] < 0.0 {
                        return Err(Error::PairwiseViolation {
                            element: entry.element,
                            i: i + 1,
                            j: j + 1,
                        });
                    }
                }
            }
        }
        Self::new_unchecked(spec)
    }

    /// Builds the objective without the pairwise bonus check. The result may
    /// not be k-submodular; this exists to construct mutants for the
    /// certification checks.
    pub fn new_unchecked(spec: CoverageBonusSpec) -> Result<Self> {
        if spec.k == 0 {
            return Err(Error::InvalidInstance("k must be positive".into()));
        }
        let mut rows = HashMap::with_capacity(spec.entries.len());
        let mut item_ids: HashMap<u32, u32> = HashMap::new();
        let mut dense_items = Vec::with_capacity(spec.entries.len());
        for (row, entry) in spec.entries.iter().enumerate() {
            if entry.bonus.len() != spec.k {
                return Err(Error::InvalidInstance(format!(
                    "element {} has {} bonus columns, expected {}",
                    entry.element,
                    entry.bonus.len(),
                    spec.k
                )));
            }
            if entry.bonus.iter().any(|w| !w.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "element {} has a non-finite bonus",
                    entry.element
                )));
            }
            if rows.insert(entry.element, row).is_some() {
                return Err(Error::InvalidInstance(format!(
                    "duplicate element {}",
                    entry.element
                )));
            }
            let mut dense: Vec<u32> = entry
                .items
                .iter()
                .map(|item| {
                    let next = item_ids.len() as u32;
                    *item_ids.entry(*item).or_insert(next)
                })
                .collect();
            dense.sort_unstable();
            dense.dedup();
            dense_items.push(dense);
        }
        Ok(Self {
            spec,
            rows,
            dense_items,
            item_count: item_ids.len(),
        })
    }

    pub fn spec(&self) -> &CoverageBonusSpec {
        &self.spec
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.spec.entries.iter().map(|entry| entry.element)
    }
}

/// Free-function constructor mirroring [`CoverageBonusObjective::new`].
pub fn make_coverage_bonus(spec: CoverageBonusSpec) -> Result<CoverageBonusObjective> {
    CoverageBonusObjective::new(spec)
}

impl Objective for CoverageBonusObjective {
    fn k(&self) -> usize {
        self.spec.k
    }

    fn contains(&self, e: Element) -> bool {
        self.rows.contains_key(&e)
    }

    fn evaluate(&self, x: &KSet) -> f64 {
        let mut covered = vec![0u64; self.item_count.div_ceil(64)];
        let mut count = 0usize;
        let mut bonus = 0.0;
        for (e, i) in x.iter() {
            let row = self.rows[&e];
            bonus += self.spec.entries[row].bonus[i - 1];
            for &item in &self.dense_items[row] {
                let (word, bit) = (item as usize / 64, item % 64);
                if covered[word] & (1 << bit) == 0 {
                    covered[word] |= 1 << bit;
                    count += 1;
                }
            }
        }
        count as f64 + bonus
    }
}

/// `f(x) = Σ_{e ∈ supp(x)} w(e, x(e))`. Modular, hence k-submodular with
/// every inequality tight.
#[derive(Debug, Clone)]
pub struct ModularObjective {
    k: usize,
    weights: HashMap<Element, Vec<f64>>,
}

impl ModularObjective {
    pub fn new(k: usize, weights: HashMap<Element, Vec<f64>>) -> Self {
        Self { k, weights }
    }

    /// `f(x) = |supp(x)|` over the given elements.
    pub fn cardinality(k: usize, elements: impl IntoIterator<Item = Element>) -> Self {
        Self::new(k, elements.into_iter().map(|e| (e, vec![1.0; k])).collect())
    }
}

impl Objective for ModularObjective {
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, e: Element) -> bool {
        self.weights.contains_key(&e)
    }
    fn evaluate(&self, x: &KSet) -> f64 {
        x.iter().map(|(e, i)| self.weights[&e][i - 1]).sum()
    }
}

/// `f ≡ 0` over a fixed ground set.
#[derive(Debug, Clone)]
pub struct ZeroObjective {
    k: usize,
    elements: Vec<Element>,
}

impl ZeroObjective {
    pub fn new(k: usize, elements: impl IntoIterator<Item = Element>) -> Self {
        let mut elements: Vec<_> = elements.into_iter().collect();
        elements.sort_unstable();
        Self { k, elements }
    }
}

impl Objective for ZeroObjective {
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, e: Element) -> bool {
        self.elements.binary_search(&e).is_ok()
    }
    fn evaluate(&self, _: &KSet) -> f64 {
        0.0
    }
}
