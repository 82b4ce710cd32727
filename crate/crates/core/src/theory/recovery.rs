use std::fmt;

use super::{layer_decomposition, LayerDecomposition};
use crate::error::Result;
use crate::graph::{Adjacency, NodeId, NodeSet, UNLIMITED};
use crate::objective::MembershipVector;
use crate::optim::{em_detect, pgd_detect, EmParams, PgdParams, TracePoint};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Em,
    Pgd,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Em => "em",
            Algorithm::Pgd => "pgd",
        })
    }
}

/// First iterate that differs from the expected layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub algorithm: Algorithm,
    pub iteration: usize,
    pub expected: NodeSet,
    /// Expected members absent from the iterate (or below full membership).
    pub missing: Vec<NodeId>,
    /// Members of the iterate outside the expected set.
    pub extra: Vec<NodeId>,
    /// Coordinates strictly between 0 and 1.
    pub fractional: Vec<NodeId>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} diverges at iteration {}: missing {:?}, extra {:?}, fractional {:?}",
            self.algorithm, self.iteration, self.missing, self.extra, self.fractional
        )
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub layers: LayerDecomposition,
    pub em_iterations: usize,
    pub pgd_iterations: usize,
    pub em_community: NodeSet,
    pub pgd_community: NodeSet,
    /// Whether every PGD iterate had `φ_σ` no larger than its predecessor.
    pub pgd_monotone: bool,
    pub divergence: Option<Divergence>,
}

impl RecoveryReport {
    pub fn exact(&self) -> bool {
        self.divergence.is_none()
    }
}

fn compare<T: Scalar>(algorithm: Algorithm, iteration: usize, expected: &NodeSet, iterate: &MembershipVector<T>) -> Option<Divergence> {
    let mut missing: Vec<NodeId> = expected.iter().filter(|&v| iterate.get(v) != T::one()).collect();
    let extra: Vec<NodeId> = iterate.iter().map(|(v, _)| v).filter(|&v| !expected.contains(v)).collect();
    let fractional: Vec<NodeId> = iterate.iter().filter(|&(_, x)| x > T::zero() && x < T::one()).map(|(v, _)| v).collect();
    missing.retain(|v| !fractional.contains(v));
    if missing.is_empty() && extra.is_empty() && fractional.is_empty() {
        return None;
    }
    Some(Divergence {
        algorithm,
        iteration,
        expected: expected.clone(),
        missing,
        extra,
        fractional,
    })
}

fn compare_trace<T: Scalar>(
    algorithm: Algorithm,
    layers: &LayerDecomposition,
    trace: &[TracePoint<T>],
    community: &NodeSet,
) -> Option<Divergence> {
    for (t, point) in trace.iter().enumerate() {
        let expected = &layers.layers[t.min(layers.n_star())];
        if t > layers.n_star() {
            return compare(algorithm, t, expected, &point.iterate).or_else(|| {
                Some(Divergence {
                    algorithm,
                    iteration: t,
                    expected: expected.clone(),
                    missing: Vec::new(),
                    extra: Vec::new(),
                    fractional: Vec::new(),
                })
            });
        }
        if let Some(d) = compare(algorithm, t, expected, &point.iterate) {
            return Some(d);
        }
    }
    if trace.len() <= layers.n_star() {
        let t = trace.len();
        let expected = &layers.layers[t];
        let found = MembershipVector::<T>::indicator(community);
        return compare(algorithm, t, expected, &found).or_else(|| {
            Some(Divergence {
                algorithm,
                iteration: t,
                expected: expected.clone(),
                missing: expected.iter().collect(),
                extra: Vec::new(),
                fractional: Vec::new(),
            })
        });
    }
    None
}

/// Runs both optimizers on the whole graph with tracing and compares every
/// iterate against the BFS layers of `community`: the EM iterates must equal
/// `D_t` and the PGD iterates must equal `1_{D_t}`.
pub fn verify_recovery<T: Scalar, G: Adjacency>(
    g: &G,
    community: &NodeSet,
    seeds: &NodeSet,
    sigma: T,
) -> Result<RecoveryReport> {
    let layers = layer_decomposition(g, community, seeds)?;
    let em = em_detect(
        g,
        seeds,
        &EmParams {
            sigma,
            neighborhood_limit: UNLIMITED,
            trace: true,
            ..EmParams::default()
        },
    )?;
    let pgd = pgd_detect(
        g,
        seeds,
        &PgdParams {
            sigma,
            neighborhood_limit: UNLIMITED,
            trace: true,
            ..PgdParams::default()
        },
    )?;
    let em_trace = em.trace.as_deref().unwrap_or_default();
    let pgd_trace = pgd.trace.as_deref().unwrap_or_default();
    let pgd_monotone = pgd_trace.windows(2).all(|w| w[1].phi_sigma <= w[0].phi_sigma);

    let divergence = compare_trace(Algorithm::Em, &layers, em_trace, &em.community)
        .or_else(|| compare_trace(Algorithm::Pgd, &layers, pgd_trace, &pgd.community))
        .or_else(|| {
            // A run that reaches C* must also stop there.
            [(Algorithm::Em, &em.community, em.iterations), (Algorithm::Pgd, &pgd.community, pgd.iterations)]
                .into_iter()
                .find(|(_, found, _)| *found != community)
                .map(|(algorithm, found, iterations)| {
                    let found = MembershipVector::<T>::indicator(found);
                    compare(algorithm, iterations, community, &found).expect("communities differ")
                })
        });
    Ok(RecoveryReport {
        em_iterations: em.iterations,
        pgd_iterations: pgd.iterations,
        em_community: em.community,
        pgd_community: pgd.community,
        pgd_monotone,
        divergence,
        layers,
    })
}
