//! Local σ-conductance optimizers: projected gradient descent, the
//! expectation-maximization variant, and density-based selection of σ.

mod auto;
mod em;
mod pgd;

use crate::error::{Error, Result};
use crate::graph::{grow_neighborhood, Adjacency, LocalNeighborhood, NodeSet};
use crate::objective::MembershipVector;
use crate::scalar::Scalar;

pub use auto::{detect_auto_sigma, Optimizer, SigmaSchedule};
pub use em::{em_detect, em_detect_from, EmParams};
pub use pgd::{line_search, pgd_detect, LineStep, PgdParams};

/// Default neighborhood size for detection runs.
pub const DEFAULT_NEIGHBORHOOD: usize = 1000;

/// One iterate of a traced run.
#[derive(Debug, Clone)]
pub struct TracePoint<T> {
    pub phi_sigma: T,
    /// Size of the thresholded community at this iterate.
    pub size: usize,
    pub iterate: MembershipVector<T>,
}

#[derive(Debug, Clone)]
pub struct DetectionResult<T> {
    pub community: NodeSet,
    pub membership: MembershipVector<T>,
    /// `φ` of `community`.
    pub objective_phi: T,
    /// `φ_σ` of `membership` at `sigma_used`.
    pub objective_phi_sigma: T,
    pub sigma_used: T,
    pub iterations: usize,
    /// Distinct iterates in order, starting from the seeds. Only when tracing.
    pub trace: Option<Vec<TracePoint<T>>>,
    pub converged: bool,
    pub cycle_detected: bool,
}

/// `max(s, min(1, c))`.
pub fn project<T: Scalar>(c: &MembershipVector<T>) -> MembershipVector<T> {
    c.project()
}

/// Validates seeds and grows the neighborhood a run is confined to.
pub(crate) fn prepare<G: Adjacency>(g: &G, seeds: &NodeSet, limit: usize) -> Result<LocalNeighborhood> {
    if seeds.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    seeds.validate(g.node_count())?;
    if let Some(v) = seeds.iter().find(|&v| g.degree(v) == 0) {
        return Err(Error::DegenerateSeed(g.label(v)));
    }
    grow_neighborhood(g, seeds, limit.max(seeds.len()))
}
