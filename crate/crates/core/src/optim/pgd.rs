use super::{prepare, DetectionResult, TracePoint, DEFAULT_NEIGHBORHOOD};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeSet};
use crate::objective::{conductance_discrete, MembershipVector, ObjectiveContext};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct PgdParams<T> {
    pub sigma: T,
    pub max_iterations: usize,
    /// Stop when no coordinate moves by this much (∞-norm).
    pub convergence_tol: T,
    /// Cap on step doublings within one line search.
    pub max_doublings: usize,
    pub final_threshold: T,
    pub neighborhood_limit: usize,
    pub trace: bool,
    /// Recompute the objective caches after every step and fail on drift.
    pub audit: bool,
}

impl<T: Scalar> PgdParams<T> {
    pub fn with_sigma(sigma: T) -> Self {
        PgdParams {
            sigma,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= T::zero()) {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        if self.max_iterations == 0 || self.max_doublings == 0 || !(self.convergence_tol > T::zero()) {
            return Err(Error::invalid("iteration caps and tolerance must be positive"));
        }
        if !(self.final_threshold > T::zero() && self.final_threshold < T::one()) {
            return Err(Error::invalid("final threshold must lie in (0, 1)"));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for PgdParams<T> {
    fn default() -> Self {
        PgdParams {
            sigma: T::zero(),
            max_iterations: 1000,
            convergence_tol: T::lit(1e-10),
            max_doublings: 64,
            final_threshold: T::lit(0.5),
            neighborhood_limit: DEFAULT_NEIGHBORHOOD,
            trace: false,
            audit: false,
        }
    }
}

/// Outcome of one line search.
#[derive(Debug, Clone)]
pub struct LineStep<T> {
    /// Best step found; zero when no trial step improved on the current point.
    pub step: T,
    /// `φ_σ` at the accepted point.
    pub value: T,
    /// Coordinate updates (local indices) that realize the accepted point.
    pub changes: Vec<(usize, T)>,
    pub evaluations: usize,
}

/// Doubling line search: tries `η = 1/max|g|, 2η, 4η, …` on the projected
/// path until every coordinate with a nonzero gradient sits at a bound, and
/// keeps the trial with the lowest `φ_σ`. The current point (`η = 0`) is the
/// initial incumbent, so the result never increases the objective.
pub fn line_search<T: Scalar>(ctx: &mut ObjectiveContext<'_, T>, max_doublings: usize) -> Result<LineStep<T>> {
    let current = ctx.value()?;
    let touched = ctx.touched();
    let grad = ctx.gradient(&touched)?;
    let active: Vec<(usize, T)> = touched
        .into_iter()
        .zip(grad)
        .filter(|&(_, g)| g != T::zero())
        .collect();
    let mut best = LineStep {
        step: T::zero(),
        value: current,
        changes: Vec::new(),
        evaluations: 0,
    };
    let Some(max_abs) = active.iter().map(|&(_, g)| g.abs()).reduce(T::max) else {
        return Ok(best);
    };

    // Trial k moves along g/max|g| by 2^k; the largest coordinate then moves
    // by exactly 2^k instead of by a rounded (1/max|g|)·g.
    let direction: Vec<(usize, T)> = active.iter().map(|&(i, g)| (i, g / max_abs)).collect();
    let snap = T::lit(16.0) * T::epsilon();
    let mut scale = T::one();
    for _ in 0..max_doublings {
        let step = scale / max_abs;
        let mut changes = Vec::with_capacity(active.len());
        let mut saturated = true;
        for &(i, d) in &direction {
            let old = ctx.value_at(i);
            let floor = ctx.floor_at(i);
            let mut x = (old - scale * d).min(T::one()).max(floor);
            // Gradients that agree up to rounding should land on the bound together.
            if T::one() - x <= snap {
                x = T::one();
            } else if x - floor <= snap {
                x = floor;
            }
            if x != T::zero() && x != T::one() {
                saturated = false;
            }
            if x != old {
                changes.push((i, x));
            }
        }
        let value = ctx.value_with(&changes)?;
        best.evaluations += 1;
        if value < best.value {
            best.step = step;
            best.value = value;
            best.changes = changes;
        }
        if saturated {
            break;
        }
        scale = scale + scale;
    }
    Ok(best)
}

/// Projected gradient descent on `φ_σ` from `c⁰ = indicator(seeds)`, confined
/// to the seeds' neighborhood, thresholded at the end.
pub fn pgd_detect<T: Scalar, G: Adjacency>(g: &G, seeds: &NodeSet, params: &PgdParams<T>) -> Result<DetectionResult<T>> {
    params.validate()?;
    let view = prepare(g, seeds, params.neighborhood_limit)?;
    let mut ctx = ObjectiveContext::new(&view, params.sigma, &MembershipVector::from_seeds(seeds))?;

    let mut trace = params.trace.then(Vec::new);
    let record = |ctx: &ObjectiveContext<'_, T>, trace: &mut Option<Vec<TracePoint<T>>>| -> Result<()> {
        if let Some(trace) = trace {
            trace.push(TracePoint {
                phi_sigma: ctx.value()?,
                size: ctx.threshold(params.final_threshold).len(),
                iterate: ctx.membership(),
            });
        }
        Ok(())
    };
    record(&ctx, &mut trace)?;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iterations {
        iterations += 1;
        let step = line_search(&mut ctx, params.max_doublings)?;
        if step.changes.is_empty() {
            converged = true;
            break;
        }
        let moved = step
            .changes
            .iter()
            .map(|&(i, x)| (x - ctx.value_at(i)).abs())
            .fold(T::zero(), T::max);
        ctx.apply(&step.changes);
        if params.audit {
            ctx.audit()?;
        }
        record(&ctx, &mut trace)?;
        if moved < params.convergence_tol {
            converged = true;
            break;
        }
    }

    let community = ctx.threshold(params.final_threshold);
    Ok(DetectionResult {
        objective_phi: conductance_discrete(g, &community)?,
        objective_phi_sigma: ctx.value()?,
        community,
        membership: ctx.membership(),
        sigma_used: params.sigma,
        iterations,
        trace,
        converged,
        cycle_detected: false,
    })
}
