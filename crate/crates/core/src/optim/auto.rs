use std::cmp::Ordering;

use rayon::prelude::*;

use super::{em_detect, pgd_detect, DetectionResult, EmParams, PgdParams};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeSet};
use crate::objective::density_ratio;
use crate::scalar::Scalar;

/// Ascending grid of σ values tried by [`detect_auto_sigma`].
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSchedule<T> {
    grid: Vec<T>,
}

impl<T: Scalar> SigmaSchedule<T> {
    pub fn new(grid: Vec<T>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::invalid("sigma grid is empty"));
        }
        if grid.iter().any(|s| !(*s >= T::zero()) || !s.is_finite()) {
            return Err(Error::invalid("sigma values must be finite and nonnegative"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("sigma grid must be strictly ascending"));
        }
        Ok(SigmaSchedule { grid })
    }

    /// Parses `start:step:stop` (inclusive) or a comma-separated list.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse sigma grid {spec:?}"));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = spec.split(':').collect();
        let values: Vec<f64> = match parts.as_slice() {
            [start, step, stop] => {
                let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
                if !(step > 0.0) || stop < start {
                    return Err(bad());
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count)
                    .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
                    .collect()
            }
            [list] => list.split(',').map(num).collect::<Result<_>>()?,
            _ => return Err(bad()),
        };
        Self::new(values.into_iter().map(T::lit).collect())
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }
}

impl<T: Scalar> Default for SigmaSchedule<T> {
    /// `0, 0.05, …, 1` followed by `1.5` and `2`.
    fn default() -> Self {
        let mut grid: Vec<T> = (0..=20).map(|k| T::lit(k as f64 / 20.0)).collect();
        grid.extend([T::lit(1.5), T::lit(2.0)]);
        SigmaSchedule { grid }
    }
}

/// A configured σ-conductance optimizer.
#[derive(Debug, Clone)]
pub enum Optimizer<T> {
    Pgd(PgdParams<T>),
    Em(EmParams<T>),
}

impl<T: Scalar> Optimizer<T> {
    pub fn sigma(&self) -> T {
        match self {
            Optimizer::Pgd(p) => p.sigma,
            Optimizer::Em(p) => p.sigma,
        }
    }

    pub fn with_sigma(&self, sigma: T) -> Self {
        match self {
            Optimizer::Pgd(p) => Optimizer::Pgd(PgdParams { sigma, ..p.clone() }),
            Optimizer::Em(p) => Optimizer::Em(EmParams { sigma, ..p.clone() }),
        }
    }

    pub fn run<G: Adjacency>(&self, g: &G, seeds: &NodeSet) -> Result<DetectionResult<T>> {
        match self {
            Optimizer::Pgd(p) => pgd_detect(g, seeds, p),
            Optimizer::Em(p) => em_detect(g, seeds, p),
        }
    }
}

/// Runs `optimizer` once per σ in `schedule` and keeps the community with the
/// largest density `a_CC/|C|²`; ties go to the smaller σ. Runs execute in parallel; the choice does not depend on order.
pub fn detect_auto_sigma<T: Scalar, G: Adjacency + Sync>(
    g: &G,
    seeds: &NodeSet,
    schedule: &SigmaSchedule<T>,
    optimizer: &Optimizer<T>,
) -> Result<DetectionResult<T>> {
    let runs: Vec<Result<DetectionResult<T>>> = schedule
        .grid()
        .par_iter()
        .map(|&sigma| optimizer.with_sigma(sigma).run(g, seeds))
        .collect();
    let mut best: Option<(DetectionResult<T>, (u128, u128))> = None;
    for run in runs {
        let run = run?;
        let density = density_ratio(g, &run.community);
        let better = match &best {
            None => true,
            Some((_, (num, den))) => {
                // a/b > c/d  ⟺  a·d > c·b, with 0/0 treated as 0.
                let lhs = density.0 * (*den).max(1);
                let rhs = *num * density.1.max(1);
                // Equal densities keep the incumbent, which has the smaller σ.
                lhs.cmp(&rhs) == Ordering::Greater
            }
        };
        if better {
            best = Some((run, density));
        }
    }
    Ok(best.expect("schedule is nonempty").0)
}
