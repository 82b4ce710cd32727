use std::collections::BTreeMap;

use crate::graph::{NodeId, NodeSet};
use crate::scalar::Scalar;

/// Sparse real-valued community membership with per-node seed floors.
///
/// Seeds have floor 1, every other node floor 0. Zero entries are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVector<T> {
    values: BTreeMap<NodeId, T>,
    seeds: NodeSet,
}

impl<T: Scalar> MembershipVector<T> {
    /// `c = s = indicator(seeds)`, with the seeds as floors.
    pub fn from_seeds(seeds: &NodeSet) -> Self {
        MembershipVector {
            values: seeds.iter().map(|v| (v, T::one())).collect(),
            seeds: seeds.clone(),
        }
    }

    /// Indicator of `set` with no floors.
    pub fn indicator(set: &NodeSet) -> Self {
        Self::from_values(set.iter().map(|v| (v, T::one())))
    }

    /// Arbitrary values with no floors.
    pub fn from_values(values: impl IntoIterator<Item = (NodeId, T)>) -> Self {
        MembershipVector {
            values: values.into_iter().filter(|(_, x)| *x != T::zero()).collect(),
            seeds: NodeSet::empty(),
        }
    }

    pub fn with_seeds(mut self, seeds: &NodeSet) -> Self {
        self.seeds = seeds.clone();
        self
    }

    pub fn seeds(&self) -> &NodeSet {
        &self.seeds
    }

    pub fn get(&self, v: NodeId) -> T {
        self.values.get(&v).copied().unwrap_or_else(T::zero)
    }

    pub fn floor(&self, v: NodeId) -> T {
        if self.seeds.contains(v) {
            T::one()
        } else {
            T::zero()
        }
    }

    pub fn set(&mut self, v: NodeId, x: T) {
        if x == T::zero() {
            self.values.remove(&v);
        } else {
            self.values.insert(v, x);
        }
    }

    /// Nonzero entries in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, T)> + '_ {
        self.values.iter().map(|(&v, &x)| (v, x))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn support(&self) -> NodeSet {
        self.values.keys().copied().collect()
    }

    /// `{ i | c_i ≥ threshold }`.
    pub fn threshold(&self, threshold: T) -> NodeSet {
        self.iter().filter(|&(_, x)| x >= threshold).map(|(v, _)| v).collect()
    }

    /// `max(s, min(1, c))` componentwise.
    pub fn project(&self) -> Self {
        let mut out = MembershipVector {
            values: BTreeMap::new(),
            seeds: self.seeds.clone(),
        };
        for (v, x) in self.iter() {
            out.set(v, x.min(T::one()).max(self.floor(v)));
        }
        for v in self.seeds.iter() {
            if out.get(v) < T::one() {
                out.set(v, T::one());
            }
        }
        out
    }

    /// `s_i ≤ c_i ≤ 1` everywhere.
    pub fn is_feasible(&self) -> bool {
        self.iter().all(|(v, x)| x >= self.floor(v) && x <= T::one())
            && self.seeds.iter().all(|v| self.get(v) >= T::one())
    }

    /// Largest distance of any coordinate from `{0, 1}`.
    pub fn max_fractionality(&self) -> T {
        self.iter()
            .map(|(_, x)| x.min(T::one() - x).abs())
            .fold(T::zero(), T::max)
    }

    /// `max_i |c_i − other_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let a = self.iter().map(|(v, x)| (x - other.get(v)).abs());
        let b = other.iter().map(|(v, x)| (x - self.get(v)).abs());
        a.chain(b).fold(T::zero(), T::max)
    }
}
