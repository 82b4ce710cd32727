//! Small bundled graphs used by tests, examples and the CLI.

use std::path::Path;

use crate::graph::load::parse_edge_list;
use crate::graph::{Graph, NodeSet};

fn parse(name: &str, text: &str) -> Graph {
    parse_edge_list(Path::new(name), text).expect("bundled fixture parses")
}

fn parse_communities(graph: &Graph, text: &str) -> Vec<NodeSet> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let labels: Vec<u64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            graph.node_set_of(&labels).unwrap()
        })
        .collect()
}

pub const KARATE: &str = include_str!("../data/karate.txt");
pub const KARATE_COMMUNITIES: &str = include_str!("../data/karate_communities.txt");
pub const TWO_TRIANGLES: &str = include_str!("../data/two_triangles.txt");
pub const DISCONNECTED_CLIQUE: &str = include_str!("../data/disconnected_clique.txt");
pub const CLIQUE_WITH_TAIL: &str = include_str!("../data/clique_with_tail.txt");
pub const CLIQUE_WITH_PENDANT: &str = include_str!("../data/clique_with_pendant.txt");

/// Zachary's karate club, labels `0..34`.
pub fn karate() -> Graph {
    parse("karate.txt", KARATE)
}

/// The two factions of the karate club.
pub fn karate_communities() -> Vec<NodeSet> {
    parse_communities(&karate(), KARATE_COMMUNITIES)
}

/// Triangles `{0,1,2}` and `{3,4,5}` joined by the edge `2–3`.
pub fn two_triangles() -> Graph {
    parse("two_triangles.txt", TWO_TRIANGLES)
}

/// A 5-cycle on `0..5` and a separate 5-clique on `5..10`.
pub fn disconnected_clique() -> Graph {
    parse("disconnected_clique.txt", DISCONNECTED_CLIQUE)
}

/// Clique nodes of [`disconnected_clique`].
pub fn disconnected_clique_members() -> NodeSet {
    NodeSet::new(5..10)
}

/// A 5-clique on `0..5` with three attachments: node 5 (degree 3, neighbor of
/// 4), and the degree-2 tail nodes 8 (neighbor of 1) and 10 (neighbor of 2).
pub fn clique_with_tail() -> Graph {
    parse("clique_with_tail.txt", CLIQUE_WITH_TAIL)
}

/// Clique nodes of [`clique_with_tail`] and [`clique_with_pendant`].
pub fn clique_members() -> NodeSet {
    NodeSet::new(0..5)
}

/// The tail node `l1` of [`clique_with_tail`]: degree 2, one edge into the clique.
pub const TAIL_NODE: u32 = 8;

/// A 5-clique on `0..5` with a degree-1 node 5 attached to node 4.
pub fn clique_with_pendant() -> Graph {
    parse("clique_with_pendant.txt", CLIQUE_WITH_PENDANT)
}
