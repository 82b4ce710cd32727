//! Personalized PageRank push and sweep cuts: the PPR (global sweep minimum)
//! and YL (first confirmed local minimum) baselines.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId, NodeSet};
use crate::objective::{conductance_discrete, MembershipVector};
use crate::optim::DetectionResult;
use crate::scalar::Scalar;

/// Which conductance the sweep is scored with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepScore {
    #[default]
    Phi,
    PhiAlt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Prefix with the smallest score.
    Global,
    /// First confirmed local minimum of the sweep curve.
    Yl,
}

#[derive(Debug, Clone)]
pub struct PprParams<T> {
    /// Restart probability.
    pub teleport: T,
    /// Push tolerances, each tried in turn.
    pub epsilon_grid: Vec<T>,
    pub score: SweepScore,
    pub yl: YlParams<T>,
}

impl<T: Scalar> PprParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.teleport > T::zero() && self.teleport < T::one()) {
            return Err(Error::invalid("teleport probability must lie in (0, 1)"));
        }
        if self.epsilon_grid.is_empty() || self.epsilon_grid.iter().any(|e| !(*e > T::zero())) {
            return Err(Error::invalid("push tolerances must be positive"));
        }
        self.yl.validate()
    }
}

impl<T: Scalar> Default for PprParams<T> {
    fn default() -> Self {
        PprParams {
            teleport: T::lit(0.15),
            epsilon_grid: [1e-2, 1e-3, 1e-4, 1e-5].into_iter().map(T::lit).collect(),
            score: SweepScore::Phi,
            yl: YlParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct YlParams<T> {
    /// A candidate is confirmed once the sweep exceeds `alpha_stop` times its value.
    pub alpha_stop: T,
}

impl<T: Scalar> YlParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_stop > T::one()) {
            return Err(Error::invalid("YL stopping factor must exceed 1"));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for YlParams<T> {
    fn default() -> Self {
        YlParams { alpha_stop: T::lit(1.2) }
    }
}

/// Approximate PPR vector `p` and residual `r` after pushing.
#[derive(Debug, Clone)]
pub struct PushResult<T> {
    /// Nonzero entries of `p`, ascending by node.
    pub score: Vec<(NodeId, T)>,
    /// Nonzero entries of `r`, ascending by node.
    pub residual: Vec<(NodeId, T)>,
    pub pushes: usize,
}

impl<T: Scalar> PushResult<T> {
    /// `max_u r(u)/d(u)`.
    pub fn max_residual_ratio<G: Adjacency>(&self, g: &G) -> T {
        self.residual
            .iter()
            .map(|&(v, r)| r / T::from_count(g.degree(v)))
            .fold(T::zero(), T::max)
    }
}

fn check_seeds<G: Adjacency>(g: &G, seeds: &NodeSet) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    seeds.validate(g.node_count())?;
    match seeds.iter().find(|&v| g.degree(v) == 0) {
        Some(v) => Err(Error::DegenerateSeed(g.label(v))),
        None => Ok(()),
    }
}

/// Push procedure for `pr_α(s)` with `s` uniform on the seeds: while some node
/// has `r(u) ≥ ε d(u)`, move `α r(u)` into `p(u)` and spread `(1−α) r(u)`
/// over its neighbors. Nodes are processed from a FIFO queue.
pub fn ppr_push<T: Scalar, G: Adjacency>(g: &G, seeds: &NodeSet, teleport: T, epsilon: T) -> Result<PushResult<T>> {
    check_seeds(g, seeds)?;
    let mut p: HashMap<NodeId, T> = HashMap::new();
    let mut r: HashMap<NodeId, T> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut queued: HashMap<NodeId, bool> = HashMap::new();
    let start = T::one() / T::from_count(seeds.len());
    let over = |v: NodeId, rv: T| rv >= epsilon * T::from_count(g.degree(v));
    for v in seeds.iter() {
        r.insert(v, start);
        if over(v, start) {
            queue.push_back(v);
            queued.insert(v, true);
        }
    }
    let mut pushes = 0;
    while let Some(u) = queue.pop_front() {
        queued.insert(u, false);
        let ru = r.get(&u).copied().unwrap_or_else(T::zero);
        if !over(u, ru) {
            continue;
        }
        pushes += 1;
        *p.entry(u).or_insert_with(T::zero) = p.get(&u).copied().unwrap_or_else(T::zero) + teleport * ru;
        r.insert(u, T::zero());
        let share = (T::one() - teleport) * ru / T::from_count(g.degree(u));
        for &v in g.neighbors(u) {
            let rv = r.get(&v).copied().unwrap_or_else(T::zero) + share;
            r.insert(v, rv);
            if over(v, rv) && !queued.get(&v).copied().unwrap_or(false) {
                queue.push_back(v);
                queued.insert(v, true);
            }
        }
    }
    let sorted = |m: HashMap<NodeId, T>| {
        let mut v: Vec<(NodeId, T)> = m.into_iter().filter(|&(_, x)| x != T::zero()).collect();
        v.sort_unstable_by_key(|&(k, _)| k);
        v
    };
    Ok(PushResult {
        score: sorted(p),
        residual: sorted(r),
        pushes,
    })
}

/// Nodes ranked by degree-normalized score with the conductance of every prefix.
#[derive(Debug, Clone)]
pub struct SweepProfile<T> {
    pub order: Vec<NodeId>,
    /// `prefix_phi[k-1] = φ(C_k)`.
    pub prefix_phi: Vec<T>,
    /// `φ_alt(C_k)`; infinite where the complement has no volume.
    pub prefix_phi_alt: Option<Vec<T>>,
}

impl<T: Scalar> SweepProfile<T> {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn values(&self, score: SweepScore) -> &[T] {
        match (score, &self.prefix_phi_alt) {
            (SweepScore::PhiAlt, Some(alt)) => alt,
            _ => &self.prefix_phi,
        }
    }

    /// `C_k`, the first `k` ranked nodes.
    pub fn prefix(&self, k: usize) -> NodeSet {
        self.order[..k].iter().copied().collect()
    }
}

/// Sorts the positive-score nodes by `score/degree` (descending, ties to the
/// smaller id) and computes every prefix conductance in one pass.
pub fn build_sweep<T: Scalar, G: Adjacency>(g: &G, score: &[(NodeId, T)], with_alt: bool) -> Result<SweepProfile<T>> {
    let mut ranked: Vec<(NodeId, T)> = Vec::with_capacity(score.len());
    for &(v, s) in score.iter().filter(|&&(_, s)| s > T::zero()) {
        let d = g.degree(v);
        if d == 0 {
            return Err(Error::UndefinedObjective("sweep node has zero degree"));
        }
        ranked.push((v, s / T::from_count(d)));
    }
    if ranked.is_empty() {
        return Err(Error::invalid("diffusion score has empty support"));
    }
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite scores").then(a.0.cmp(&b.0)));

    let total = g.total_volume();
    let mut members: HashMap<NodeId, ()> = HashMap::with_capacity(ranked.len());
    let (mut internal, mut vol) = (0usize, 0usize);
    let mut prefix_phi = Vec::with_capacity(ranked.len());
    let mut prefix_alt = with_alt.then(|| Vec::with_capacity(ranked.len()));
    for &(v, _) in &ranked {
        internal += 2 * g.neighbors(v).iter().filter(|u| members.contains_key(u)).count();
        vol += g.degree(v);
        members.insert(v, ());
        let cut = T::from_count(vol - internal);
        prefix_phi.push(cut / T::from_count(vol));
        if let Some(alt) = prefix_alt.as_mut() {
            let rest = total - vol;
            alt.push(if rest == 0 {
                T::infinity()
            } else {
                cut / T::from_count(vol.min(rest))
            });
        }
    }
    Ok(SweepProfile {
        order: ranked.into_iter().map(|(v, _)| v).collect(),
        prefix_phi,
        prefix_phi_alt: prefix_alt,
    })
}

/// Length of the prefix with the smallest value (ties to the shortest).
pub fn global_min_prefix<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (k, &x) in values.iter().enumerate() {
        if x < values[best] {
            best = k;
        }
    }
    best + 1
}

/// Length of the first confirmed local minimum. A candidate is a prefix after
/// which the curve strictly increases; it is confirmed when the curve later
/// exceeds `alpha_stop` times its value, and discarded if the curve first
/// drops below it. Without a confirmed candidate this is [`global_min_prefix`].
pub fn yl_prefix<T: Scalar>(values: &[T], params: &YlParams<T>) -> usize {
    let mut candidate: Option<usize> = None;
    for k in 0..values.len() {
        if let Some(c) = candidate {
            if values[k] > params.alpha_stop * values[c] {
                return c + 1;
            }
            if values[k] < values[c] {
                candidate = None;
            }
        }
        if candidate.is_none() && k + 1 < values.len() && values[k + 1] > values[k] {
            candidate = Some(k);
        }
    }
    global_min_prefix(values)
}

/// Prefix of minimum `φ`.
pub fn sweep_global_min<T: Scalar>(profile: &SweepProfile<T>) -> NodeSet {
    profile.prefix(global_min_prefix(&profile.prefix_phi))
}

/// First confirmed local minimum of `φ` along the sweep.
pub fn sweep_yl_local_min<T: Scalar>(profile: &SweepProfile<T>, params: &YlParams<T>) -> NodeSet {
    profile.prefix(yl_prefix(&profile.prefix_phi, params))
}

/// Push, sweep and extract for every tolerance in the grid; keeps the
/// community with the lowest sweep score (ties to the earlier tolerance).
pub fn ppr_detect<T: Scalar, G: Adjacency>(
    g: &G,
    seeds: &NodeSet,
    params: &PprParams<T>,
    mode: SweepMode,
) -> Result<DetectionResult<T>> {
    params.validate()?;
    check_seeds(g, seeds)?;
    let with_alt = params.score == SweepScore::PhiAlt;
    let mut best: Option<(NodeSet, T, usize)> = None;
    for &eps in &params.epsilon_grid {
        let push = ppr_push(g, seeds, params.teleport, eps)?;
        if push.score.is_empty() {
            continue;
        }
        let profile = build_sweep(g, &push.score, with_alt)?;
        let values = profile.values(params.score);
        let k = match mode {
            SweepMode::Global => global_min_prefix(values),
            SweepMode::Yl => yl_prefix(values, &params.yl),
        };
        let value = values[k - 1];
        if best.as_ref().is_none_or(|(_, b, _)| value < *b) {
            best = Some((profile.prefix(k), value, push.pushes));
        }
    }
    let (community, pushes) = match best {
        Some((c, _, pushes)) => (c, pushes),
        None => (seeds.clone(), 0),
    };
    let phi: T = conductance_discrete(g, &community)?;
    Ok(DetectionResult {
        membership: MembershipVector::indicator(&community).with_seeds(seeds),
        community,
        objective_phi: phi,
        objective_phi_sigma: phi,
        sigma_used: T::zero(),
        iterations: pushes,
        trace: None,
        converged: true,
        cycle_detected: false,
    })
}
