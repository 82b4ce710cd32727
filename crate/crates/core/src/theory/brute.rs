use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{edge_weight_sets, volume, Adjacency, NodeId, NodeSet};
use crate::scalar::Scalar;

/// Largest number of free (non-seed) nodes the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceOptimum<T> {
    pub community: NodeSet,
    pub phi_sigma: T,
}

#[derive(Clone, Copy)]
struct Candidate {
    internal: u64,
    vol: u64,
    size: u32,
    mask: u32,
}

/// Enumerates every `S ∪ X` with `X ⊆ scope \ S` and returns the minimizer of
/// `φ_σ = 1 − a_CC/a_CV − σ`. Ties go to the smaller set, then to the
/// lexicographically smaller sorted id list. Sets of zero volume are skipped.
pub fn brute_force_optimum<T: Scalar, G: Adjacency + Sync>(
    g: &G,
    seeds: &NodeSet,
    sigma: T,
    scope: &NodeSet,
) -> Result<BruteForceOptimum<T>> {
    if seeds.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    seeds.validate(g.node_count())?;
    scope.validate(g.node_count())?;
    let free: Vec<NodeId> = scope.iter().filter(|&v| !seeds.contains(v)).collect();
    if free.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::ScopeTooLarge {
            free: free.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let base_internal = edge_weight_sets(g, seeds, seeds) as u64;
    let base_vol = volume(g, seeds) as u64;
    // Per free node: neighbors among the free nodes as a bitmask, links to seeds, degree.
    let info: Vec<(u32, u64, u64)> = free
        .iter()
        .map(|&v| {
            let mut bits = 0u32;
            let mut to_seeds = 0u64;
            for &u in g.neighbors(v) {
                if let Ok(k) = free.binary_search(&u) {
                    bits |= 1 << k;
                } else if seeds.contains(u) {
                    to_seeds += 1;
                }
            }
            (bits, to_seeds, g.degree(v) as u64)
        })
        .collect();
    let evaluate = |mask: u32| {
        let (mut internal, mut vol) = (base_internal, base_vol);
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (bits, to_seeds, degree) = info[k];
            internal += 2 * to_seeds + (bits & mask).count_ones() as u64;
            vol += degree;
        }
        Candidate {
            internal,
            vol,
            size: mask.count_ones(),
            mask,
        }
    };
    let members = |mask: u32| -> Vec<NodeId> {
        let mut out: Vec<NodeId> = seeds
            .iter()
            .chain(free.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v))
            .collect();
        out.sort_unstable();
        out
    };
    // Total order: larger a_CC/a_CV first, then fewer nodes, then lexicographic.
    let better = |a: &Candidate, b: &Candidate| -> Ordering {
        let lhs = a.internal as u128 * b.vol as u128;
        let rhs = b.internal as u128 * a.vol as u128;
        rhs.cmp(&lhs)
            .then(a.size.cmp(&b.size))
            .then_with(|| members(a.mask).cmp(&members(b.mask)))
    };
    let best = (0u32..(1u32 << free.len()))
        .into_par_iter()
        .map(evaluate)
        .filter(|c| c.vol > 0)
        .min_by(|a, b| better(a, b))
        .ok_or(Error::UndefinedObjective("every candidate community has zero volume"))?;

    let cut = T::from_count((best.vol - best.internal) as usize);
    Ok(BruteForceOptimum {
        community: members(best.mask).into_iter().collect(),
        phi_sigma: cut / T::from_count(best.vol as usize) - sigma,
    })
}

/// SHA-256 over the sorted edge list in source labels, hex encoded.
pub fn graph_hash<G: Adjacency>(g: &G) -> String {
    let mut edges: Vec<(u64, u64)> = Vec::new();
    for u in 0..g.node_count() as NodeId {
        for &v in g.neighbors(u) {
            let (a, b) = (g.label(u), g.label(v));
            if a < b {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    let mut hasher = Sha256::new();
    for (a, b) in edges {
        hasher.update(format!("{a} {b}\n").as_bytes());
    }
    hasher.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One oracle result: `hash seeds sigma community phi_sigma`, with node lists
/// comma-separated in source labels and `φ_σ` at 15 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRecord {
    pub graph_hash: String,
    pub seeds: Vec<u64>,
    pub sigma: f64,
    pub community: Vec<u64>,
    pub phi_sigma: f64,
}

fn join(ids: &[u64]) -> String {
    ids.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn split(field: &str) -> Result<Vec<u64>> {
    field
        .split(',')
        .map(|t| t.parse().map_err(|_| Error::invalid(format!("bad node id {t:?}"))))
        .collect()
}

impl GoldenRecord {
    pub fn new<T: Scalar>(
        g: &crate::graph::Graph,
        seeds: &NodeSet,
        sigma: T,
        optimum: &BruteForceOptimum<T>,
    ) -> Self {
        GoldenRecord {
            graph_hash: graph_hash(g),
            seeds: g.labels_of(seeds),
            sigma: sigma.as_f64(),
            community: g.labels_of(&optimum.community),
            phi_sigma: optimum.phi_sigma.as_f64(),
        }
    }

    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {:.14e}",
            self.graph_hash,
            join(&self.seeds),
            self.sigma,
            join(&self.community),
            self.phi_sigma
        )
    }

    pub fn parse(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [hash, seeds, sigma, community, phi] = fields[..] else {
            return Err(Error::invalid(format!("expected 5 fields, found {}", fields.len())));
        };
        let number = |t: &str| t.parse::<f64>().map_err(|_| Error::invalid(format!("bad number {t:?}")));
        Ok(GoldenRecord {
            graph_hash: hash.to_string(),
            seeds: split(seeds)?,
            sigma: number(sigma)?,
            community: split(community)?,
            phi_sigma: number(phi)?,
        })
    }
}
