//! Seeded random graph generators for tests and experiments.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId, NodeSet};

/// Erdős–Rényi `G(n, p)`.
pub fn random_graph(seed: u64, n: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Each of `0..n` independently with probability `p`.
pub fn random_subset(seed: u64, n: usize, p: f64) -> NodeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n as NodeId).filter(|_| rng.gen_bool(p)).collect()
}

/// A planted community with its seeds.
#[derive(Debug, Clone)]
pub struct PlantedCommunity {
    pub graph: Graph,
    pub community: NodeSet,
    pub seeds: NodeSet,
}

/// A clique or quasi-clique of 4–8 nodes (ids `0..k`) that is either a
/// separate component or linked only to high-degree hubs of a random
/// background graph. The single seed has no edges leaving the community.
pub fn planted_clique_with_hubs(seed: u64) -> PlantedCommunity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k: usize = rng.gen_range(4..=8);
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for u in 0..k as NodeId {
        for v in u + 1..k as NodeId {
            edges.insert((u, v));
        }
    }
    // Quasi-clique: drop a few internal edges, keeping every degree ≥ k − 2.
    if rng.gen_bool(0.5) {
        let drops = rng.gen_range(1..=k / 3);
        let mut candidates: Vec<(NodeId, NodeId)> = edges.iter().copied().collect();
        candidates.shuffle(&mut rng);
        let mut removed = vec![0usize; k];
        for (u, v) in candidates.into_iter().take(drops) {
            if removed[u as usize] == 0 && removed[v as usize] == 0 {
                edges.remove(&(u, v));
                removed[u as usize] += 1;
                removed[v as usize] += 1;
            }
        }
    }

    let isolated = rng.gen_bool(0.3);
    let background = if isolated { 0 } else { rng.gen_range(60..=100) };
    let hubs = if isolated { 0 } else { rng.gen_range(1..=3) };
    let n = k + background;
    let seed_node: NodeId = rng.gen_range(0..k as NodeId);

    if !isolated {
        let base = k as NodeId;
        // Sparse background.
        for u in 0..background as NodeId {
            for v in u + 1..background as NodeId {
                if rng.gen_bool(0.04) {
                    edges.insert((base + u, base + v));
                }
            }
        }
        // Hubs are the first background nodes, each tied to most of the background.
        for h in 0..hubs as NodeId {
            for v in hubs as NodeId..background as NodeId {
                if rng.gen_bool(0.6) {
                    edges.insert((base + h, base + v));
                }
            }
        }
        // Non-seed members get at most one hub link each.
        for member in (0..k as NodeId).filter(|&m| m != seed_node) {
            if rng.gen_bool(0.5) {
                let h = rng.gen_range(0..hubs as NodeId);
                edges.insert((member, base + h));
            }
        }
    }

    PlantedCommunity {
        graph: Graph::from_edges(n, edges),
        community: NodeSet::new(0..k as NodeId),
        seeds: NodeSet::new([seed_node]),
    }
}
