//! Immutable sparse undirected graphs and the set/vector edge-weight queries.
//!
//! Node ids are contiguous `0..n`; the label each node had in its source file
//! is kept alongside so results can be reported in the caller's ids.

pub(crate) mod load;
mod neighborhood;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::objective::MembershipVector;
use crate::scalar::Scalar;

pub use load::{load_communities, load_edge_list, load_lfr_communities, GraphFormat, LoaderOptions};
pub use neighborhood::{grow_neighborhood, LocalNeighborhood, UNLIMITED};

pub type NodeId = u32;

/// Read access to an undirected graph. Detection code is written against this
/// trait so that adjacency reads can be instrumented.
pub trait Adjacency {
    fn node_count(&self) -> usize;
    fn degree(&self, v: NodeId) -> usize;
    fn neighbors(&self, v: NodeId) -> &[NodeId];
    /// Sum of all degrees, `a_VV`.
    fn total_volume(&self) -> usize;
    /// Identifier of `v` in the source data.
    fn label(&self, v: NodeId) -> u64;
}

/// Compressed adjacency storage. Neighbor lists are sorted and symmetric,
/// without self-loops or duplicates.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Vec<u64>,
    label_index: HashMap<u64, NodeId>,
}

impl Graph {
    /// Builds a graph on nodes `0..n` whose labels equal their ids.
    /// Self-loops are dropped and duplicate edges collapsed.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let labels = (0..n as u64).collect();
        Self::build(labels, edges)
    }

    pub(crate) fn build(labels: Vec<u64>, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let n = labels.len();
        let mut lists: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge ({u}, {v}) out of range");
            if u == v {
                continue;
            }
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as NodeId))
            .collect();
        Graph {
            offsets,
            targets,
            labels,
            label_index,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Internal id of the node carrying `label`.
    pub fn node_of(&self, label: u64) -> Result<NodeId> {
        self.label_index
            .get(&label)
            .copied()
            .ok_or(Error::UnknownNode(label))
    }

    /// Maps source labels to a node set.
    pub fn node_set_of(&self, labels: &[u64]) -> Result<NodeSet> {
        let ids = labels
            .iter()
            .map(|&l| self.node_of(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(NodeSet::new(ids))
    }

    /// Sorted source labels of `set`.
    pub fn labels_of(&self, set: &NodeSet) -> Vec<u64> {
        let mut out: Vec<u64> = set.iter().map(|v| self.labels[v as usize]).collect();
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.labels.len() as NodeId
    }
}

impl Adjacency for Graph {
    fn node_count(&self) -> usize {
        self.labels.len()
    }

    fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn total_volume(&self) -> usize {
        self.targets.len()
    }

    fn label(&self, v: NodeId) -> u64 {
        self.labels[v as usize]
    }
}

/// Wraps a graph and records every node whose neighbor list is read.
pub struct AccessProbe<'g, G> {
    inner: &'g G,
    touched: RefCell<BTreeSet<NodeId>>,
}

impl<'g, G: Adjacency> AccessProbe<'g, G> {
    pub fn new(inner: &'g G) -> Self {
        AccessProbe {
            inner,
            touched: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn read_nodes(&self) -> BTreeSet<NodeId> {
        self.touched.borrow().clone()
    }
}

impl<G: Adjacency> Adjacency for AccessProbe<'_, G> {
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }
    fn degree(&self, v: NodeId) -> usize {
        self.inner.degree(v)
    }
    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.touched.borrow_mut().insert(v);
        self.inner.neighbors(v)
    }
    fn total_volume(&self) -> usize {
        self.inner.total_volume()
    }
    fn label(&self, v: NodeId) -> u64 {
        self.inner.label(v)
    }
}

/// A sorted set of node ids with constant-time membership tests.
#[derive(Debug, Clone, Default)]
pub struct NodeSet {
    members: Vec<NodeId>,
    index: HashSet<NodeId>,
}

impl NodeSet {
    pub fn new(ids: impl IntoIterator<Item = NodeId>) -> Self {
        let mut members: Vec<NodeId> = ids.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let index = members.iter().copied().collect();
        NodeSet { members, index }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.index.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.members
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn intersection_len(&self, other: &NodeSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().filter(|&v| large.contains(v)).count()
    }

    /// Checks that every id is below `node_count`.
    pub fn validate(&self, node_count: usize) -> Result<()> {
        match self.members.last() {
            Some(&v) if v as usize >= node_count => Err(Error::UnknownNode(v as u64)),
            _ => Ok(()),
        }
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for NodeSet {}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        NodeSet::new(iter)
    }
}

/// `a_xy`: number of ordered pairs `(i, j)` with `i ∈ x`, `j ∈ y` joined by an edge.
pub fn edge_weight_sets<G: Adjacency>(g: &G, x: &NodeSet, y: &NodeSet) -> usize {
    let (outer, inner) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    outer
        .iter()
        .map(|i| g.neighbors(i).iter().filter(|&&j| inner.contains(j)).count())
        .sum()
}

/// `a_xV`: the volume of `x`.
pub fn volume<G: Adjacency>(g: &G, x: &NodeSet) -> usize {
    x.iter().map(|i| g.degree(i)).sum()
}

/// `xᵀ A y`, iterating the edges incident to the support of the sparser vector.
pub fn edge_weight_membership<T: Scalar, G: Adjacency>(
    g: &G,
    x: &MembershipVector<T>,
    y: &MembershipVector<T>,
) -> T {
    let (outer, inner) = if x.support_len() <= y.support_len() {
        (x, y)
    } else {
        (y, x)
    };
    let mut total = T::zero();
    for (i, xi) in outer.iter() {
        let row: T = g.neighbors(i).iter().map(|&j| inner.get(j)).sum();
        total = total + xi * row;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_weights() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        let all = NodeSet::new(0..3);
        assert_eq!(edge_weight_sets(&g, &all, &all), 6);
        assert_eq!(edge_weight_sets(&g, &NodeSet::empty(), &all), 0);
        assert_eq!(g.total_volume(), 6);
        assert_eq!((0..3).map(|v| g.degree(v)).collect::<Vec<_>>(), vec![2, 2, 2]);
    }

    #[test]
    fn bridge_between_triangles() {
        let g = fixtures::two_triangles();
        let left = NodeSet::new([0, 1, 2]);
        let right = NodeSet::new([3, 4, 5]);
        assert_eq!(edge_weight_sets(&g, &left, &right), 1);
        assert_eq!(edge_weight_sets(&g, &left, &left), 6);
        assert_eq!(volume(&g, &left), 7);
    }

    #[test]
    fn membership_bilinear_form() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let x = MembershipVector::from_values([(0, 1.0), (1, 0.5)]);
        assert_eq!(edge_weight_membership(&g, &x, &x), 1.0);
        let zero = MembershipVector::<f64>::from_values([]);
        assert_eq!(edge_weight_membership(&g, &x, &zero), 0.0);
    }

    #[test]
    fn self_loops_and_duplicates_collapse() {
        let g = Graph::from_edges(2, [(0, 0), (0, 1), (1, 0)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_volume(), 2);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn node_set_dedups_and_sorts() {
        let s = NodeSet::new([3, 1, 3, 2]);
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert!(s.contains(2) && !s.contains(0));
        assert!(s.validate(4).is_ok());
        assert!(s.validate(3).is_err());
    }

    #[test]
    fn probe_records_reads() {
        let g = fixtures::two_triangles();
        let probe = AccessProbe::new(&g);
        let _ = probe.neighbors(2);
        let _ = probe.degree(5);
        assert_eq!(probe.read_nodes().into_iter().collect::<Vec<_>>(), vec![2]);
    }
}
