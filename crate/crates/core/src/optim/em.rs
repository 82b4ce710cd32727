use std::collections::HashSet;

use super::{prepare, DetectionResult, TracePoint, DEFAULT_NEIGHBORHOOD};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeSet};
use crate::objective::{conductance_discrete, MembershipVector, ObjectiveContext};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct EmParams<T> {
    pub sigma: T,
    pub max_iterations: usize,
    pub neighborhood_limit: usize,
    pub trace: bool,
}

impl<T: Scalar> EmParams<T> {
    pub fn with_sigma(sigma: T) -> Self {
        EmParams {
            sigma,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= T::zero()) {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for EmParams<T> {
    fn default() -> Self {
        EmParams {
            sigma: T::zero(),
            max_iterations: 1000,
            neighborhood_limit: DEFAULT_NEIGHBORHOOD,
            trace: false,
        }
    }
}

/// Discrete updates `C ← { i | ∇φ_σ(C)_i < 0 } ∪ S` from `C⁰ = S` until a
/// fixed point. A revisited community stops the run with `cycle_detected`,
/// returning the community reached before the repeat.
pub fn em_detect<T: Scalar, G: Adjacency>(g: &G, seeds: &NodeSet, params: &EmParams<T>) -> Result<DetectionResult<T>> {
    em_detect_from(g, seeds, seeds, params)
}

/// [`em_detect`] started from an arbitrary community containing the seeds.
pub fn em_detect_from<T: Scalar, G: Adjacency>(
    g: &G,
    seeds: &NodeSet,
    start: &NodeSet,
    params: &EmParams<T>,
) -> Result<DetectionResult<T>> {
    params.validate()?;
    if !seeds.is_subset(start) {
        return Err(Error::invalid("starting community must contain the seeds"));
    }
    let view = prepare(g, start, params.neighborhood_limit)?;
    let initial = MembershipVector::indicator(start).with_seeds(seeds);
    let mut ctx = ObjectiveContext::new(&view, params.sigma, &initial)?;

    let mut current: Vec<usize> = ctx.support().collect();
    let mut history: HashSet<Vec<usize>> = HashSet::from([current.clone()]);
    let mut trace = params.trace.then(Vec::new);
    let record = |ctx: &ObjectiveContext<'_, T>, size: usize, trace: &mut Option<Vec<TracePoint<T>>>| -> Result<()> {
        if let Some(trace) = trace {
            trace.push(TracePoint {
                phi_sigma: ctx.value()?,
                size,
                iterate: ctx.membership(),
            });
        }
        Ok(())
    };
    record(&ctx, current.len(), &mut trace)?;

    let mut iterations = 0;
    let mut converged = false;
    let mut cycle_detected = false;
    while iterations < params.max_iterations {
        iterations += 1;
        let touched = ctx.touched();
        let grad = ctx.gradient(&touched)?;
        let next: Vec<usize> = touched
            .iter()
            .zip(&grad)
            .filter(|&(&i, &gi)| gi < T::zero() || ctx.is_seed(i))
            .map(|(&i, _)| i)
            .collect();
        if next == current {
            converged = true;
            break;
        }
        if history.contains(&next) {
            cycle_detected = true;
            break;
        }
        let leaving: Vec<(usize, T)> = current
            .iter()
            .filter(|i| next.binary_search(i).is_err())
            .map(|&i| (i, T::zero()))
            .collect();
        let entering: Vec<(usize, T)> = next
            .iter()
            .filter(|i| current.binary_search(i).is_err())
            .map(|&i| (i, T::one()))
            .collect();
        ctx.apply(&leaving);
        ctx.apply(&entering);
        history.insert(next.clone());
        current = next;
        record(&ctx, current.len(), &mut trace)?;
    }

    let community = ctx.threshold(T::one());
    Ok(DetectionResult {
        objective_phi: conductance_discrete(g, &community)?,
        objective_phi_sigma: ctx.value()?,
        community,
        membership: ctx.membership(),
        sigma_used: params.sigma,
        iterations,
        trace,
        converged,
        cycle_detected,
    })
}
