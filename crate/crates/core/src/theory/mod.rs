//! Oracles for the recovery guarantees: seed-centered BFS layers, the
//! dense-and-isolated condition, (α,β)-cluster checks and exhaustive search
//! over small graphs.

mod brute;
mod recovery;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{edge_weight_sets, volume, Adjacency, NodeId, NodeSet};
use crate::objective::conductance_discrete;
use crate::scalar::Scalar;

pub use brute::{brute_force_optimum, graph_hash, BruteForceOptimum, GoldenRecord, BRUTE_FORCE_LIMIT};
pub use recovery::{verify_recovery, Algorithm, Divergence, RecoveryReport};

/// Largest layer whose subsets are enumerated by [`CheckMode::Exhaustive`].
pub const EXHAUSTIVE_LAYER_LIMIT: usize = 20;

/// `D_0 ⊂ D_1 ⊂ … ⊂ D_{n*}`, where `D_t` holds the community nodes within
/// distance `t` of a seed inside the induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub layers: Vec<NodeSet>,
}

impl LayerDecomposition {
    /// Index of the last layer, which equals the whole community.
    pub fn n_star(&self) -> usize {
        self.layers.len() - 1
    }

    /// Nodes at distance exactly `t`.
    pub fn shell(&self, t: usize) -> Vec<NodeId> {
        match t {
            0 => self.layers[0].as_slice().to_vec(),
            _ => self.layers[t]
                .iter()
                .filter(|&v| !self.layers[t - 1].contains(v))
                .collect(),
        }
    }
}

fn check_community<G: Adjacency>(g: &G, community: &NodeSet, seeds: &NodeSet) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    community.validate(g.node_count())?;
    if !seeds.is_subset(community) {
        return Err(Error::invalid("seeds must lie inside the community"));
    }
    Ok(())
}

/// BFS from the seeds restricted to the subgraph induced by `community`.
pub fn layer_decomposition<G: Adjacency>(g: &G, community: &NodeSet, seeds: &NodeSet) -> Result<LayerDecomposition> {
    check_community(g, community, seeds)?;
    let mut dist: std::collections::HashMap<NodeId, usize> = seeds.iter().map(|s| (s, 0)).collect();
    let mut queue: VecDeque<NodeId> = seeds.iter().collect();
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in g.neighbors(u) {
            if community.contains(v) && !dist.contains_key(&v) {
                dist.insert(v, du + 1);
                queue.push_back(v);
            }
        }
    }
    if let Some(v) = community.iter().find(|v| !dist.contains_key(v)) {
        return Err(Error::DisconnectedCommunity(g.label(v)));
    }
    let depth = dist.values().copied().max().unwrap_or(0);
    let layers = (0..=depth)
        .map(|t| community.iter().filter(|v| dist[v] <= t).collect())
        .collect();
    Ok(LayerDecomposition { layers })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Only the layers `D_0, …, D_{n*}`.
    #[default]
    Layers,
    /// Every `D_{t-1} ∪ X` with `X` a nonempty subset of the `t`-th shell.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationSide {
    Density,
    Isolation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseIsolatedReport<T> {
    pub holds: bool,
    pub violated_subset: Option<NodeSet>,
    pub violated_node: Option<NodeId>,
    pub side: Option<ViolationSide>,
    pub sigma: T,
    /// Number of centered subsets examined.
    pub subsets_checked: usize,
}

/// Sign of `2a_iC/a_iV − (a_CC/a_CV − σ)` scaled by `a_iV·a_CV > 0`. The
/// integer part is exact, so the comparison is exact at `σ = 0`.
fn margin<T: Scalar>(links: usize, degree: usize, internal: usize, vol: usize, sigma: T) -> T {
    let exact = 2 * links as i128 * vol as i128 - internal as i128 * degree as i128;
    T::lit(exact as f64) + sigma * T::from_count(degree) * T::from_count(vol)
}

struct Checker<'a, T, G> {
    g: &'a G,
    community: &'a NodeSet,
    seeds: &'a NodeSet,
    sigma: T,
    /// Outsiders with positive degree, ascending.
    outsiders: Vec<NodeId>,
}

impl<T: Scalar, G: Adjacency> Checker<'_, T, G> {
    fn violation(&self, c: &NodeSet) -> Option<(NodeId, ViolationSide)> {
        let internal = edge_weight_sets(self.g, c, c);
        let vol = volume(self.g, c);
        let links = |i: NodeId| self.g.neighbors(i).iter().filter(|&&u| c.contains(u)).count();

        let exempt = internal == 0 && self.sigma == T::zero() && c == self.seeds;
        if !exempt {
            for i in c.iter() {
                if !(margin(links(i), self.g.degree(i), internal, vol, self.sigma) > T::zero()) {
                    return Some((i, ViolationSide::Density));
                }
            }
        }

        let mut boundary: Vec<NodeId> = c
            .iter()
            .flat_map(|v| self.g.neighbors(v).iter().copied())
            .filter(|&u| !self.community.contains(u))
            .collect();
        boundary.sort_unstable();
        boundary.dedup();
        let mut worst = boundary
            .into_iter()
            .find(|&i| margin(links(i), self.g.degree(i), internal, vol, self.sigma) > T::zero());
        // Outsiders with no link into C all share the condition 0 ≤ a_CC/a_CV − σ.
        if margin(0, 1, internal, vol, self.sigma) > T::zero() {
            let far = self.outsiders.iter().copied().find(|&i| links(i) == 0);
            worst = match (worst, far) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        worst.map(|i| (i, ViolationSide::Isolation))
    }
}

/// Checks the dense-and-isolated condition on seed-centered subsets, stopping
/// at the first violation. Subsets are visited in layer order.
///
/// The density clause is waived for `C = S` when `a_SS = 0` and `σ = 0`,
/// since the optimizers retain seeds unconditionally.
pub fn check_dense_isolated<T: Scalar, G: Adjacency>(
    g: &G,
    community: &NodeSet,
    seeds: &NodeSet,
    sigma: T,
    mode: CheckMode,
) -> Result<DenseIsolatedReport<T>> {
    if !(sigma >= T::zero()) {
        return Err(Error::invalid("sigma must be nonnegative"));
    }
    let layers = layer_decomposition(g, community, seeds)?;
    if mode == CheckMode::Exhaustive {
        for t in 1..=layers.n_star() {
            let free = layers.shell(t).len();
            if free > EXHAUSTIVE_LAYER_LIMIT {
                return Err(Error::ScopeTooLarge {
                    free,
                    limit: EXHAUSTIVE_LAYER_LIMIT,
                });
            }
        }
    }
    let checker = Checker {
        g,
        community,
        seeds,
        sigma,
        outsiders: (0..g.node_count() as NodeId)
            .filter(|&v| !community.contains(v) && g.degree(v) > 0)
            .collect(),
    };
    let mut report = DenseIsolatedReport {
        holds: true,
        violated_subset: None,
        violated_node: None,
        side: None,
        sigma,
        subsets_checked: 0,
    };
    let visit = |c: NodeSet, report: &mut DenseIsolatedReport<T>| -> bool {
        report.subsets_checked += 1;
        match checker.violation(&c) {
            Some((node, side)) => {
                report.holds = false;
                report.violated_subset = Some(c);
                report.violated_node = Some(node);
                report.side = Some(side);
                false
            }
            None => true,
        }
    };

    if !visit(layers.layers[0].clone(), &mut report) {
        return Ok(report);
    }
    for t in 1..=layers.n_star() {
        match mode {
            CheckMode::Layers => {
                if !visit(layers.layers[t].clone(), &mut report) {
                    return Ok(report);
                }
            }
            CheckMode::Exhaustive => {
                let shell = layers.shell(t);
                let base = layers.layers[t - 1].as_slice();
                for mask in 1u32..(1u32 << shell.len()) {
                    let c: NodeSet = base
                        .iter()
                        .copied()
                        .chain(shell.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v))
                        .collect();
                    if !visit(c, &mut report) {
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Whether `a_iC ≥ β|C|` for every `i ∈ C` and `a_iC ≤ α|C|` for every `i ∉ C`.
pub fn check_alpha_beta<T: Scalar, G: Adjacency>(g: &G, community: &NodeSet, alpha: T, beta: T) -> Result<bool> {
    if !(T::zero() <= alpha && alpha < beta && beta <= T::one()) {
        return Err(Error::invalid("expected 0 ≤ alpha < beta ≤ 1"));
    }
    community.validate(g.node_count())?;
    let size = T::from_count(community.len());
    let links = |i: NodeId| g.neighbors(i).iter().filter(|&&u| community.contains(u)).count();
    let inside = community.iter().all(|i| T::from_count(links(i)) >= beta * size);
    // Outsiders without links satisfy 0 ≤ α|C| trivially.
    let outside = community
        .iter()
        .flat_map(|v| g.neighbors(v).iter().copied())
        .filter(|&u| !community.contains(u))
        .all(|i| T::from_count(links(i)) <= alpha * size);
    Ok(inside && outside)
}

/// `β = (1−φ(C))/(2|C|) · min_{i∈C} a_iV` and `α` the same factor times the
/// largest degree among outsiders linked to `C` (0 when there are none).
/// `None` when some linked outsider has degree at least the smallest
/// community degree.
pub fn derive_alpha_beta<T: Scalar, G: Adjacency>(g: &G, community: &NodeSet) -> Result<Option<(T, T)>> {
    if community.is_empty() {
        return Err(Error::invalid("community is empty"));
    }
    let phi: T = conductance_discrete(g, community)?;
    let factor = (T::one() - phi) / T::from_count(2 * community.len());
    let min_inside = community.iter().map(|i| g.degree(i)).min().unwrap_or(0);
    let max_outside = community
        .iter()
        .flat_map(|v| g.neighbors(v).iter().copied())
        .filter(|&u| !community.contains(u))
        .map(|u| g.degree(u))
        .max();
    let beta = factor * T::from_count(min_inside);
    Ok(match max_outside {
        None => Some((T::zero(), beta)),
        Some(d) if min_inside > d => Some((factor * T::from_count(d), beta)),
        Some(_) => None,
    })
}
