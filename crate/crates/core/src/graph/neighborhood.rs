//! Restriction of a detection run to a bounded region around the seeds.

use std::collections::{HashMap, HashSet};

use super::{Adjacency, NodeId, NodeSet};
use crate::error::{Error, Result};

/// Neighborhood limit meaning "no restriction".
pub const UNLIMITED: usize = usize::MAX;

/// Node set grown from the seeds, with an induced-subgraph view in local
/// indices `0..len()`. Degrees are the degrees in the full graph.
#[derive(Debug, Clone)]
pub struct LocalNeighborhood {
    nodes: NodeSet,
    limit: usize,
    /// Local index -> graph node id, in ascending id order.
    global: Vec<NodeId>,
    local: HashMap<NodeId, usize>,
    degree: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl LocalNeighborhood {
    fn from_nodes<G: Adjacency>(g: &G, nodes: NodeSet, limit: usize) -> Self {
        let global: Vec<NodeId> = nodes.iter().collect();
        let local: HashMap<NodeId, usize> = global.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut degree = Vec::with_capacity(global.len());
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for &v in &global {
            degree.push(g.degree(v));
            targets.extend(g.neighbors(v).iter().filter_map(|u| local.get(u).copied()));
            offsets.push(targets.len());
        }
        LocalNeighborhood {
            nodes,
            limit,
            global,
            local,
            degree,
            offsets,
            targets,
        }
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn global_id(&self, local: usize) -> NodeId {
        self.global[local]
    }

    pub fn local_id(&self, v: NodeId) -> Option<usize> {
        self.local.get(&v).copied()
    }

    /// Degree in the full graph.
    pub fn degree(&self, local: usize) -> usize {
        self.degree[local]
    }

    /// Neighbors inside the neighborhood, as local indices.
    pub fn neighbors(&self, local: usize) -> &[usize] {
        &self.targets[self.offsets[local]..self.offsets[local + 1]]
    }
}

/// Grows a region from `seeds`: whole BFS frontiers are added while they fit
/// under `limit`; the last, partial frontier is filled by descending
/// `a_iN / a_iV` (ties to the smaller id) until the region holds `limit` nodes.
pub fn grow_neighborhood<G: Adjacency>(g: &G, seeds: &NodeSet, limit: usize) -> Result<LocalNeighborhood> {
    if seeds.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    seeds.validate(g.node_count())?;
    if limit < seeds.len() {
        return Err(Error::invalid(format!(
            "neighborhood limit {limit} is smaller than the seed count {}",
            seeds.len()
        )));
    }

    let mut members: HashSet<NodeId> = HashSet::new();
    // a_iN for every node adjacent to the region but outside it.
    let mut links: HashMap<NodeId, usize> = HashMap::new();
    let add = |v: NodeId, members: &mut HashSet<NodeId>, links: &mut HashMap<NodeId, usize>| {
        members.insert(v);
        links.remove(&v);
        for &u in g.neighbors(v) {
            if !members.contains(&u) {
                *links.entry(u).or_insert(0) += 1;
            }
        }
    };
    for v in seeds.iter() {
        add(v, &mut members, &mut links);
    }

    loop {
        if links.is_empty() || members.len() >= limit {
            break;
        }
        let mut frontier: Vec<NodeId> = links.keys().copied().collect();
        if members.len() + frontier.len() <= limit {
            frontier.sort_unstable();
            for v in frontier {
                add(v, &mut members, &mut links);
            }
            continue;
        }
        let room = limit - members.len();
        // a_iN/a_iV descending, compared exactly by cross-multiplication.
        frontier.sort_unstable_by(|&a, &b| {
            let lhs = links[&a] as u128 * g.degree(b) as u128;
            let rhs = links[&b] as u128 * g.degree(a) as u128;
            rhs.cmp(&lhs).then(a.cmp(&b))
        });
        for v in frontier.into_iter().take(room) {
            members.insert(v);
        }
        break;
    }

    Ok(LocalNeighborhood::from_nodes(g, NodeSet::new(members), limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{AccessProbe, Graph};

    #[test]
    fn limit_not_binding_takes_component() {
        // 30-node path plus a separate edge.
        let mut edges: Vec<(NodeId, NodeId)> = (0..29).map(|i| (i, i + 1)).collect();
        edges.push((30, 31));
        let g = Graph::from_edges(32, edges);
        let n = grow_neighborhood(&g, &NodeSet::new([5]), 1000).unwrap();
        assert_eq!(n.nodes(), &NodeSet::new(0..30));
    }

    #[test]
    fn star_tie_break_prefers_small_ids() {
        let g = Graph::from_edges(6, (1..6).map(|leaf| (0, leaf)));
        let n = grow_neighborhood(&g, &NodeSet::new([0]), 3).unwrap();
        assert_eq!(n.nodes(), &NodeSet::new([0, 1, 2]));
    }

    #[test]
    fn limit_equal_to_seed_count() {
        let g = fixtures::two_triangles();
        let seeds = NodeSet::new([0, 4]);
        let n = grow_neighborhood(&g, &seeds, 2).unwrap();
        assert_eq!(n.nodes(), &seeds);
        assert!(grow_neighborhood(&g, &seeds, 1).is_err());
    }

    #[test]
    fn ratio_rule_in_partial_frontier() {
        // Seed 0 with neighbors 1 and 2. Node 1 connects to 3 (degree 1) and
        // to 4 (degree 3, one edge into the region). Limit 4 after {0,1,2}
        // leaves room for one of {3, 4}: 3 has ratio 1/1, 4 has 1/3.
        let g = Graph::from_edges(7, [(0, 1), (0, 2), (1, 4), (1, 3), (4, 5), (4, 6)]);
        let n = grow_neighborhood(&g, &NodeSet::new([0]), 4).unwrap();
        assert_eq!(n.nodes(), &NodeSet::new([0, 1, 2, 3]));
    }

    #[test]
    fn isolated_seed_returns_seed() {
        let g = Graph::from_edges(3, [(0, 1)]);
        let n = grow_neighborhood(&g, &NodeSet::new([2]), 1000).unwrap();
        assert_eq!(n.nodes(), &NodeSet::new([2]));
    }

    #[test]
    fn local_view_is_induced() {
        let g = fixtures::two_triangles();
        let n = grow_neighborhood(&g, &NodeSet::new([0]), 4).unwrap();
        // {0,1,2} then one of the frontier {3}.
        assert_eq!(n.nodes(), &NodeSet::new([0, 1, 2, 3]));
        let l3 = n.local_id(3).unwrap();
        assert_eq!(n.degree(l3), 3);
        assert_eq!(n.neighbors(l3).len(), 1);
    }

    #[test]
    fn reads_only_the_region() {
        let g = fixtures::disconnected_clique();
        let probe = AccessProbe::new(&g);
        let n = grow_neighborhood(&probe, &NodeSet::new([7]), 1000).unwrap();
        assert_eq!(n.nodes(), &NodeSet::new(5..10));
        assert!(probe.read_nodes().iter().all(|v| n.nodes().contains(*v)));
    }

    #[test]
    fn deterministic() {
        let g = fixtures::karate();
        let a = grow_neighborhood(&g, &NodeSet::new([16]), 10).unwrap();
        let b = grow_neighborhood(&g, &NodeSet::new([16]), 10).unwrap();
        assert_eq!(a.nodes(), b.nodes());
        assert_eq!(a.len(), 10);
    }
}
