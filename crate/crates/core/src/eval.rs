//! Ground-truth evaluation: seed sampling, per-trial detection and metrics,
//! aggregation and CSV output.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffusion::{ppr_detect, PprParams, SweepMode};
use crate::error::{Error, Result};
use crate::graph::{load_communities, load_lfr_communities, Adjacency, Graph, GraphFormat, NodeSet};
use crate::optim::{detect_auto_sigma, DetectionResult, Optimizer, SigmaSchedule, DEFAULT_NEIGHBORHOOD};
use crate::scalar::Scalar;

pub const DEFAULT_MIN_SIZE: usize = 3;
pub const DEFAULT_SAMPLE_SIZE: usize = 1000;

pub const ROW_HEADER: &str = "trial,community_index,seed,method,sigma,f1,size,phi,phi_sigma,iterations,wall_ms";
pub const SUMMARY_HEADER: &str = "method,dataset,mean_f1,sd_f1,mean_size,sd_size,mean_phi,sd_phi,trials";
pub const SWEEP_HEADER: &str = "sigma,mean_f1,sd_f1,mean_size,sd_size,mean_phi,sd_phi,trials";

/// Reference communities, possibly overlapping, in graph node ids.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub communities: Vec<NodeSet>,
}

impl GroundTruth {
    /// Keeps the communities with at least `min_size` nodes.
    pub fn new(communities: Vec<NodeSet>, min_size: usize) -> Result<Self> {
        let communities: Vec<NodeSet> = communities.into_iter().filter(|c| c.len() >= min_size.max(1)).collect();
        if communities.is_empty() {
            return Err(Error::invalid(format!("no ground-truth community with at least {min_size} nodes")));
        }
        Ok(GroundTruth { communities })
    }

    pub fn load(path: impl AsRef<Path>, graph: &Graph, format: GraphFormat, min_size: usize) -> Result<Self> {
        let communities = match format {
            GraphFormat::EdgeList => load_communities(path, graph, min_size)?,
            GraphFormat::Lfr => load_lfr_communities(path, graph, min_size)?,
        };
        Self::new(communities, min_size)
    }

    pub fn validate(&self, node_count: usize) -> Result<()> {
        self.communities.iter().try_for_each(|c| c.validate(node_count))
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }
}

/// Detector run for each trial.
#[derive(Debug, Clone)]
pub enum Method<T> {
    Fixed(Optimizer<T>),
    AutoSigma(Optimizer<T>, SigmaSchedule<T>),
    Diffusion(PprParams<T>, SweepMode),
}

impl<T: Scalar> Method<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Fixed(Optimizer::Pgd(_)) => "pgd",
            Method::Fixed(Optimizer::Em(_)) => "em",
            Method::AutoSigma(Optimizer::Pgd(_), _) => "pgd-auto",
            Method::AutoSigma(Optimizer::Em(_), _) => "em-auto",
            Method::Diffusion(_, SweepMode::Global) => "ppr",
            Method::Diffusion(_, SweepMode::Yl) => "yl",
        }
    }

    /// Same method with a fixed σ; diffusion methods are unchanged.
    pub fn with_sigma(&self, sigma: T) -> Self {
        match self {
            Method::Fixed(o) | Method::AutoSigma(o, _) => Method::Fixed(o.with_sigma(sigma)),
            other => other.clone(),
        }
    }

    fn with_limit(&self, limit: usize) -> Self {
        let set = |o: &Optimizer<T>| match o {
            Optimizer::Pgd(p) => Optimizer::Pgd(crate::optim::PgdParams {
                neighborhood_limit: limit,
                ..p.clone()
            }),
            Optimizer::Em(p) => Optimizer::Em(crate::optim::EmParams {
                neighborhood_limit: limit,
                ..p.clone()
            }),
        };
        match self {
            Method::Fixed(o) => Method::Fixed(set(o)),
            Method::AutoSigma(o, s) => Method::AutoSigma(set(o), s.clone()),
            other => other.clone(),
        }
    }

    pub fn detect<G: Adjacency + Sync>(&self, g: &G, seeds: &NodeSet) -> Result<DetectionResult<T>> {
        match self {
            Method::Fixed(o) => o.run(g, seeds),
            Method::AutoSigma(o, schedule) => detect_auto_sigma(g, seeds, schedule, o),
            Method::Diffusion(params, mode) => ppr_detect(g, seeds, params, *mode),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig<T> {
    pub sample_size: usize,
    pub seeds_per_community: usize,
    pub rng_seed: u64,
    pub method: Method<T>,
    pub neighborhood_limit: usize,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Record wall-clock time per trial. Off by default so output is reproducible.
    pub timing: bool,
}

impl<T: Scalar> ExperimentConfig<T> {
    pub fn new(method: Method<T>, rng_seed: u64) -> Self {
        ExperimentConfig {
            sample_size: DEFAULT_SAMPLE_SIZE,
            seeds_per_community: 1,
            rng_seed,
            method,
            neighborhood_limit: DEFAULT_NEIGHBORHOOD,
            workers: 0,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_size == 0 || self.seeds_per_community == 0 || self.neighborhood_limit == 0 {
            return Err(Error::invalid("sample size, seeds per community and neighborhood limit must be positive"));
        }
        Ok(())
    }
}

/// `2|C ∩ C*| / (|C| + |C*|)`; 0 when both are empty.
pub fn f1_score(found: &NodeSet, truth: &NodeSet) -> f64 {
    let total = found.len() + truth.len();
    if total == 0 {
        return 0.0;
    }
    2.0 * found.intersection_len(truth) as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub trial: usize,
    pub community_index: usize,
    pub seeds: NodeSet,
}

fn trial_rng(rng_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(stream);
    rng
}

fn draw_seeds(rng: &mut ChaCha8Rng, community: &NodeSet, k: usize) -> NodeSet {
    let members = community.as_slice();
    sample(rng, members.len(), k.min(members.len()))
        .into_iter()
        .map(|i| members[i])
        .collect()
}

/// Draws `sample_size` (community, seeds) pairs. Communities are sampled
/// without replacement when there are enough of them and uniformly with
/// replacement otherwise; seeds are uniform within the community. Stream 0
/// of the generator picks distinct communities, stream `t + 1` serves trial `t`.
pub fn sample_trials<T: Scalar>(truth: &GroundTruth, config: &ExperimentConfig<T>) -> Vec<Trial> {
    let n = truth.len();
    let distinct: Option<Vec<usize>> =
        (n >= config.sample_size).then(|| sample(&mut trial_rng(config.rng_seed, 0), n, config.sample_size).into_vec());
    (0..config.sample_size)
        .map(|t| {
            let mut rng = trial_rng(config.rng_seed, t as u64 + 1);
            let community_index = match &distinct {
                Some(order) => order[t],
                None => rng.gen_range(0..n),
            };
            let seeds = draw_seeds(&mut rng, &truth.communities[community_index], config.seeds_per_community);
            Trial {
                trial: t,
                community_index,
                seeds,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub trial: usize,
    pub community_index: usize,
    /// Seed labels.
    pub seeds: Vec<u64>,
    pub method: &'static str,
    pub sigma: f64,
    pub f1: f64,
    pub size: usize,
    pub phi: f64,
    pub phi_sigma: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    /// Detector failure; such rows score `f1 = 0`, `size = 0`, `φ = 1`.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean_f1: f64,
    pub sd_f1: f64,
    pub mean_size: f64,
    pub sd_size: f64,
    pub mean_phi: f64,
    pub sd_phi: f64,
    pub trials: usize,
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Means and sample standard deviations over all rows, failed ones included.
pub fn summarize(rows: &[MetricsRow]) -> Summary {
    let (mean_f1, sd_f1) = mean_sd(rows.iter().map(|r| r.f1));
    let (mean_size, sd_size) = mean_sd(rows.iter().map(|r| r.size as f64));
    let (mean_phi, sd_phi) = mean_sd(rows.iter().map(|r| r.phi));
    Summary {
        mean_f1,
        sd_f1,
        mean_size,
        sd_size,
        mean_phi,
        sd_phi,
        trials: rows.len(),
    }
}

fn run_trial<T: Scalar>(g: &Graph, truth: &GroundTruth, method: &Method<T>, trial: &Trial, timing: bool) -> MetricsRow {
    let start = Instant::now();
    let outcome = method.detect(g, &trial.seeds);
    let wall_ms = if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let mut row = MetricsRow {
        trial: trial.trial,
        community_index: trial.community_index,
        seeds: g.labels_of(&trial.seeds),
        method: method.name(),
        sigma: 0.0,
        f1: 0.0,
        size: 0,
        phi: 1.0,
        phi_sigma: 1.0,
        iterations: 0,
        wall_ms,
        error: None,
    };
    match outcome {
        Ok(r) => {
            row.sigma = r.sigma_used.as_f64();
            row.f1 = f1_score(&r.community, &truth.communities[trial.community_index]);
            row.size = r.community.len();
            row.phi = r.objective_phi.as_f64();
            row.phi_sigma = r.objective_phi_sigma.as_f64();
            row.iterations = r.iterations;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every sampled trial, in parallel, and returns the rows in trial order
/// with their summary. Detector errors are recorded per row.
pub fn run_experiment<T: Scalar>(
    g: &Graph,
    truth: &GroundTruth,
    config: &ExperimentConfig<T>,
) -> Result<(Vec<MetricsRow>, Summary)> {
    config.validate()?;
    truth.validate(g.node_count())?;
    let method = config.method.with_limit(config.neighborhood_limit);
    let trials = sample_trials(truth, config);
    let work = || -> Vec<MetricsRow> {
        trials
            .par_iter()
            .map(|t| run_trial(g, truth, &method, t, config.timing))
            .collect()
    };
    let rows = if config.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(work)
    };
    let summary = summarize(&rows);
    Ok((rows, summary))
}

/// One experiment per σ in `grid`, all on the same sampled trials.
pub fn sweep_sigma<T: Scalar>(
    g: &Graph,
    truth: &GroundTruth,
    config: &ExperimentConfig<T>,
    grid: &[T],
) -> Result<Vec<(T, Summary)>> {
    grid.iter()
        .map(|&sigma| {
            let config = ExperimentConfig {
                method: config.method.with_sigma(sigma),
                ..config.clone()
            };
            run_experiment(g, truth, &config).map(|(_, s)| (sigma, s))
        })
        .collect()
}

fn seeds_field(seeds: &[u64]) -> String {
    seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

/// Per-trial CSV; multiple seeds are joined with `;`.
pub fn write_rows_csv(mut out: impl Write, rows: &[MetricsRow]) -> std::io::Result<()> {
    writeln!(out, "{ROW_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.community_index,
            seeds_field(&r.seeds),
            r.method,
            r.sigma,
            r.f1,
            r.size,
            r.phi,
            r.phi_sigma,
            r.iterations,
            r.wall_ms
        )?;
    }
    Ok(())
}

fn summary_fields(s: &Summary) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        s.mean_f1, s.sd_f1, s.mean_size, s.sd_size, s.mean_phi, s.sd_phi, s.trials
    )
}

pub fn write_summary_csv(mut out: impl Write, method: &str, dataset: &str, summary: &Summary) -> std::io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    writeln!(out, "{method},{dataset},{}", summary_fields(summary))
}

pub fn write_sweep_csv<T: Scalar>(mut out: impl Write, sweep: &[(T, Summary)]) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for (sigma, s) in sweep {
        writeln!(out, "{},{}", sigma, summary_fields(s))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::optim::PgdParams;
    use proptest::prelude::*;

    fn pgd(sigma: f64) -> Method<f64> {
        Method::Fixed(Optimizer::Pgd(PgdParams::with_sigma(sigma)))
    }

    #[test]
    fn f1_examples() {
        let a = NodeSet::new([1, 2, 3]);
        assert_eq!(f1_score(&a, &a), 1.0);
        assert_eq!(f1_score(&a, &NodeSet::new([7, 8])), 0.0);
        assert!((f1_score(&a, &NodeSet::new([2, 3, 4, 5])) - 4.0 / 7.0).abs() < 1e-15);
        assert_eq!(f1_score(&NodeSet::empty(), &a), 0.0);
    }

    #[test]
    fn few_communities_are_reused_with_varying_seeds() {
        let g = fixtures::karate();
        let truth = GroundTruth::new(fixtures::karate_communities(), DEFAULT_MIN_SIZE).unwrap();
        let config = ExperimentConfig::new(pgd(0.0), 1);
        let trials = sample_trials(&truth, &config);
        assert_eq!(trials.len(), 1000);
        assert!(trials.iter().any(|t| t.community_index == 0));
        assert!(trials.iter().any(|t| t.community_index == 1));
        let distinct: std::collections::BTreeSet<_> = trials.iter().map(|t| t.seeds.as_slice()[0]).collect();
        assert!(distinct.len() > 20);
        for t in &trials {
            assert!(t.seeds.is_subset(&truth.communities[t.community_index]));
        }
        assert_eq!(trials, sample_trials(&truth, &config));
        assert_ne!(trials, sample_trials(&truth, &ExperimentConfig::new(pgd(0.0), 2)));
        assert!(g.node_count() == 34);
    }

    #[test]
    fn many_communities_are_sampled_without_replacement() {
        let communities: Vec<NodeSet> = (0..5000).map(|i| NodeSet::new([i, i + 1, i + 2])).collect();
        let truth = GroundTruth::new(communities, 3).unwrap();
        let trials = sample_trials(&truth, &ExperimentConfig::new(pgd(0.0), 9));
        let distinct: std::collections::BTreeSet<_> = trials.iter().map(|t| t.community_index).collect();
        assert_eq!(distinct.len(), 1000);
    }

    #[test]
    fn multiple_seeds_per_trial() {
        let truth = GroundTruth::new(vec![NodeSet::new(0..10)], 3).unwrap();
        let config = ExperimentConfig {
            seeds_per_community: 3,
            sample_size: 20,
            ..ExperimentConfig::new(pgd(0.0), 4)
        };
        assert!(sample_trials(&truth, &config).iter().all(|t| t.seeds.len() == 3));
    }

    #[test]
    fn small_communities_are_dropped() {
        let err = GroundTruth::new(vec![NodeSet::new([0, 1])], 3).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn isolated_clique_is_recovered_perfectly() {
        let g = fixtures::disconnected_clique();
        let truth = GroundTruth::new(vec![fixtures::disconnected_clique_members()], 3).unwrap();
        let config = ExperimentConfig {
            sample_size: 25,
            ..ExperimentConfig::new(pgd(0.0), 3)
        };
        let (rows, summary) = run_experiment(&g, &truth, &config).unwrap();
        assert_eq!(rows.len(), 25);
        assert_eq!(summary.mean_f1, 1.0);
        assert_eq!(summary.sd_f1, 0.0);
        assert_eq!(summary.mean_phi, 0.0);
    }

    #[test]
    fn seed_singleton_scores_two_elevenths() {
        // EM with σ large never leaves the seed.
        let g = fixtures::karate();
        let truth = GroundTruth::new(vec![NodeSet::new(0..10)], 3).unwrap();
        let method = Method::Fixed(Optimizer::Em(crate::optim::EmParams::with_sigma(2.5)));
        let config = ExperimentConfig {
            sample_size: 30,
            ..ExperimentConfig::new(method, 5)
        };
        let (rows, summary) = run_experiment(&g, &truth, &config).unwrap();
        assert!(rows.iter().all(|r| r.size == 1));
        assert!((summary.mean_f1 - 2.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn failures_score_zero_and_are_kept() {
        let g = crate::graph::Graph::from_edges(6, [(0, 1), (1, 2), (2, 0)]);
        let truth = GroundTruth::new(vec![NodeSet::new([0, 1, 2]), NodeSet::new([3, 4, 5])], 3).unwrap();
        let config = ExperimentConfig {
            sample_size: 40,
            ..ExperimentConfig::new(pgd(0.0), 8)
        };
        let (rows, summary) = run_experiment(&g, &truth, &config).unwrap();
        let failed: Vec<_> = rows.iter().filter(|r| r.error.is_some()).collect();
        assert!(!failed.is_empty() && failed.len() < rows.len());
        assert!(failed.iter().all(|r| r.f1 == 0.0 && r.community_index == 1));
        let mean = rows.iter().map(|r| r.f1).sum::<f64>() / rows.len() as f64;
        assert!((summary.mean_f1 - mean).abs() < 1e-15);
        assert_eq!(summary.trials, 40);
    }

    #[test]
    fn output_is_independent_of_worker_count() {
        let g = fixtures::karate();
        let truth = GroundTruth::new(fixtures::karate_communities(), 3).unwrap();
        let render = |workers| {
            let config = ExperimentConfig {
                sample_size: 50,
                workers,
                ..ExperimentConfig::new(pgd(0.0), 11)
            };
            let (rows, summary) = run_experiment(&g, &truth, &config).unwrap();
            let mut buf = Vec::new();
            write_rows_csv(&mut buf, &rows).unwrap();
            write_summary_csv(&mut buf, "pgd", "karate", &summary).unwrap();
            buf
        };
        let one = render(1);
        assert_eq!(one, render(4));
        assert_eq!(one, render(0));
        let text = String::from_utf8(one).unwrap();
        assert!(text.starts_with(ROW_HEADER));
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 11);
    }

    #[test]
    fn sweep_has_one_row_per_sigma() {
        let g = fixtures::karate();
        let truth = GroundTruth::new(fixtures::karate_communities(), 3).unwrap();
        let config = ExperimentConfig {
            sample_size: 10,
            ..ExperimentConfig::new(pgd(0.0), 1)
        };
        let grid = SigmaSchedule::parse("0:0.1:1").unwrap().grid().to_vec();
        let sweep = sweep_sigma(&g, &truth, &config, &grid).unwrap();
        assert_eq!(sweep.len(), 11);
        assert!(sweep.iter().all(|(_, s)| !s.mean_f1.is_nan() && !s.mean_phi.is_nan()));
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &sweep).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 12);
    }

    #[test]
    fn sample_sd_uses_n_minus_one() {
        let (m, s) = mean_sd([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn f1_is_symmetric_and_bounded(a in proptest::collection::vec(0u32..30, 0..15), b in proptest::collection::vec(0u32..30, 1..15)) {
            let (a, b) = (NodeSet::new(a), NodeSet::new(b));
            let f = f1_score(&a, &b);
            prop_assert_eq!(f, f1_score(&b, &a));
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert_eq!(f1_score(&b, &b), 1.0);
        }
    }
}
