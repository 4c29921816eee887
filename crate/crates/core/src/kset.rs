//! The k-set: k pairwise-disjoint subsets of a ground set.
//!
//! A k-set `(X_1, ..., X_k)` is stored as a map from element to its position
//! `i ∈ 1..=k`. An element absent from the map is unassigned (position 0).
//! Because every element maps to at most one position, the implied subsets
//! are disjoint by construction; [`KSet::parts`] recovers the tuple form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;

/// Element identifier within a ground set.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KSet {
    k: usize,
    positions: BTreeMap<Element, usize>,
}

impl KSet {
    /// The empty k-set `0 = (∅, ..., ∅)`.
    pub fn empty(k: usize) -> Self {
        Self {
            k,
            positions: BTreeMap::new(),
        }
    }

    /// Builds a k-set from `(element, position)` pairs.
    pub fn from_pairs<I>(k: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Element, usize)>,
    {
        let mut x = Self::empty(k);
        for (e, i) in pairs {
            x.insert(e, i)?;
        }
        Ok(x)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `x(e)`: the position of `e`, or 0 when unassigned.
    pub fn position(&self, e: Element) -> usize {
        self.positions.get(&e).copied().unwrap_or(0)
    }

    pub fn contains(&self, e: Element) -> bool {
        self.positions.contains_key(&e)
    }

    /// Number of assigned elements, `|supp(x)|`.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Assigned `(element, position)` pairs in ascending element order.
    pub fn iter(&self) -> impl Iterator<Item = (Element, usize)> + '_ {
        self.positions.iter().map(|(&e, &i)| (e, i))
    }

    /// `supp(x)` in ascending element order.
    pub fn support(&self) -> impl Iterator<Item = Element> + '_ {
        self.positions.keys().copied()
    }

    /// `supp_i(x) = X_i`.
    pub fn part(&self, i: usize) -> BTreeSet<Element> {
        self.iter().filter(|&(_, p)| p == i).map(|(e, _)| e).collect()
    }

    /// The tuple form `(X_1, ..., X_k)`.
    pub fn parts(&self) -> Vec<BTreeSet<Element>> {
        let mut parts = vec![BTreeSet::new(); self.k];
        for (e, i) in self.iter() {
            parts[i - 1].insert(e);
        }
        parts
    }

    /// `x ⊔ (e, i)` with value semantics: `self` is left untouched.
    pub fn assign(&self, e: Element, i: usize) -> Result<KSet> {
        let mut next = self.clone();
        next.insert(e, i)?;
        Ok(next)
    }

    /// In-place variant of [`KSet::assign`].
    pub fn insert(&mut self, e: Element, i: usize) -> Result<()> {
        if i == 0 || i > self.k {
            return Err(Error::PositionOutOfRange {
                position: i,
                k: self.k,
            });
        }
        if self.positions.contains_key(&e) {
            return Err(Error::ElementAlreadyAssigned { element: e });
        }
        self.positions.insert(e, i);
        Ok(())
    }

    /// `x ⊔ y`: `Z_i = X_i ∪ Y_i \ ⋃_{j≠i} (X_j ∪ Y_j)`.
    ///
    /// Elements placed at different positions by `x` and `y` are dropped.
    pub fn join(&self, other: &KSet) -> Result<KSet> {
        self.check_k(other)?;
        let mut positions = self.positions.clone();
        for (e, i) in other.iter() {
            match positions.get(&e) {
                None => {
                    positions.insert(e, i);
                }
                Some(&p) if p != i => {
                    positions.remove(&e);
                }
                Some(_) => {}
            }
        }
        Ok(KSet {
            k: self.k,
            positions,
        })
    }

    /// `x ⊓ y = (X_1 ∩ Y_1, ..., X_k ∩ Y_k)`.
    pub fn meet(&self, other: &KSet) -> Result<KSet> {
        self.check_k(other)?;
        let positions = self
            .iter()
            .filter(|&(e, i)| other.position(e) == i)
            .collect();
        Ok(KSet {
            k: self.k,
            positions,
        })
    }

    /// `x ⊑ y` iff `X_i ⊆ Y_i` for every `i`.
    pub fn is_subset_of(&self, other: &KSet) -> bool {
        self.k == other.k && self.iter().all(|(e, i)| other.position(e) == i)
    }

    /// `c(x)`, the total cost of `supp(x)`.
    pub fn total_cost(&self, inst: &KnapsackInstance) -> Result<f64> {
        self.support().try_fold(0.0, |acc, e| {
            inst.cost(e)
                .map(|c| acc + c)
                .ok_or(Error::UnknownElement { element: e })
        })
    }

    fn check_k(&self, other: &KSet) -> Result<()> {
        if self.k != other.k {
            return Err(Error::MismatchedK {
                left: self.k,
                right: other.k,
            });
        }
        Ok(())
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (e, i)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "({e},{i})")?;
        }
        f.write_str("}")
    }
}
