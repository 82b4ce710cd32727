//! Conductance, its alternative form, σ-conductance and its gradient.
//!
//! The free functions evaluate from scratch on the full graph and serve as the
//! reference. [`ObjectiveContext`] keeps `a_cc`, `a_cV` and `Σ c_i² d_i` cached
//! over a [`LocalNeighborhood`](crate::graph::LocalNeighborhood) and updates them
//! per coordinate, which is what the optimizers use.

mod context;
mod membership;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{edge_weight_membership, edge_weight_sets, volume, Adjacency, NodeId, NodeSet};
use crate::scalar::Scalar;

pub use context::ObjectiveContext;
pub use membership::MembershipVector;

/// `φ(C) = a_CC̄ / a_CV`.
pub fn conductance_discrete<T: Scalar, G: Adjacency>(g: &G, c: &NodeSet) -> Result<T> {
    let vol = volume(g, c);
    if vol == 0 {
        return Err(Error::UndefinedObjective("community has zero volume"));
    }
    let internal = edge_weight_sets(g, c, c);
    Ok(T::from_count(vol - internal) / T::from_count(vol))
}

/// `φ_alt(C) = a_CC̄ / min(a_CV, a_C̄V)`.
pub fn conductance_alt<T: Scalar, G: Adjacency>(g: &G, c: &NodeSet) -> Result<T> {
    let vol = volume(g, c);
    let rest = g.total_volume() - vol;
    if vol == 0 || rest == 0 {
        return Err(Error::UndefinedObjective(
            "alternative conductance needs positive volume on both sides",
        ));
    }
    let cut = vol - edge_weight_sets(g, c, c);
    Ok(T::from_count(cut) / T::from_count(vol.min(rest)))
}

/// The three sums σ-conductance is built from.
struct Sums<T> {
    a_cc: T,
    a_cv: T,
    squares: T,
}

fn sums<T: Scalar, G: Adjacency>(g: &G, c: &MembershipVector<T>) -> Result<Sums<T>> {
    let mut a_cv = T::zero();
    let mut squares = T::zero();
    for (i, ci) in c.iter() {
        let d = T::from_count(g.degree(i));
        a_cv = a_cv + ci * d;
        squares = squares + ci * ci * d;
    }
    if a_cv <= T::zero() {
        return Err(Error::UndefinedObjective("membership has zero weighted volume"));
    }
    Ok(Sums {
        a_cc: edge_weight_membership(g, c, c),
        a_cv,
        squares,
    })
}

/// `φ_σ(c) = 1 − a_cc/a_cV − σ Σc_i²d_i / a_cV`.
pub fn sigma_conductance<T: Scalar, G: Adjacency>(g: &G, c: &MembershipVector<T>, sigma: T) -> Result<T> {
    let s = sums(g, c)?;
    Ok(T::one() - s.a_cc / s.a_cv - sigma * s.squares / s.a_cv)
}

/// Nodes whose gradient can differ from the generic outside value: the support
/// of `c`, its neighbors, and the seeds.
pub fn default_touched<T: Scalar, G: Adjacency>(g: &G, c: &MembershipVector<T>) -> NodeSet {
    let mut out = BTreeSet::new();
    for (i, _) in c.iter() {
        out.insert(i);
        out.extend(g.neighbors(i).iter().copied());
    }
    out.extend(c.seeds().iter());
    NodeSet::new(out)
}

/// `∇φ_σ(c)_i` for every node in `touched` (default: [`default_touched`]).
pub fn sigma_conductance_gradient<T: Scalar, G: Adjacency>(
    g: &G,
    c: &MembershipVector<T>,
    sigma: T,
    touched: Option<&NodeSet>,
) -> Result<Vec<(NodeId, T)>> {
    let s = sums(g, c)?;
    let owned;
    let touched = match touched {
        Some(t) => t,
        None => {
            owned = default_touched(g, c);
            &owned
        }
    };
    let two = T::lit(2.0);
    let vol2 = s.a_cv * s.a_cv;
    Ok(touched
        .iter()
        .map(|i| {
            let d = T::from_count(g.degree(i));
            let a_ic: T = g.neighbors(i).iter().map(|&j| c.get(j)).sum();
            let grad = d * s.a_cc / vol2 - two * a_ic / s.a_cv
                + sigma * (d * s.squares / vol2 - two * c.get(i) * d / s.a_cv);
            (i, grad)
        })
        .collect())
}

/// KKT violation of a single coordinate with value `c`, floor `s` and gradient `grad`.
pub(crate) fn kkt_violation<T: Scalar>(c: T, floor: T, grad: T) -> T {
    let at_upper = c >= T::one();
    let at_lower = c <= floor;
    match (at_lower, at_upper) {
        (true, true) => T::zero(),
        (true, false) => (-grad).max(T::zero()),
        (false, true) => grad.max(T::zero()),
        (false, false) => grad.abs(),
    }
}

/// Largest violation of the seed-floored KKT conditions; zero exactly at KKT points.
pub fn kkt_residual<T: Scalar, G: Adjacency>(g: &G, c: &MembershipVector<T>, sigma: T) -> Result<T> {
    let grad = sigma_conductance_gradient(g, c, sigma, None)?;
    Ok(grad
        .into_iter()
        .map(|(i, gi)| kkt_violation(c.get(i), c.floor(i), gi))
        .fold(T::zero(), T::max))
}

/// `a_CC / |C|²`, zero for an empty set.
pub fn density<T: Scalar, G: Adjacency>(g: &G, c: &NodeSet) -> T {
    if c.is_empty() {
        return T::zero();
    }
    let n = T::from_count(c.len());
    T::from_count(edge_weight_sets(g, c, c)) / (n * n)
}

/// Density as an exact ratio `(a_CC, |C|²)` for tie-free comparisons.
pub(crate) fn density_ratio<G: Adjacency>(g: &G, c: &NodeSet) -> (u128, u128) {
    let n = c.len() as u128;
    (edge_weight_sets(g, c, c) as u128, n * n)
}
