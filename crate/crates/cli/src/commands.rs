use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use sigcond::diffusion::{PprParams, SweepMode, SweepScore};
use sigcond::eval::{
    run_experiment, sweep_sigma, write_rows_csv, write_summary_csv, write_sweep_csv, ExperimentConfig, GroundTruth, Method,
};
use sigcond::graph::{load_edge_list, GraphFormat, LoaderOptions};
use sigcond::optim::{EmParams, Optimizer, PgdParams, SigmaSchedule};
use sigcond::theory::{
    brute_force_optimum, check_dense_isolated, derive_alpha_beta, verify_recovery, CheckMode, GoldenRecord, ViolationSide,
};
use sigcond::{Adjacency, Graph, NodeSet};

use crate::args::{
    CheckArgs, DetectArgs, DetectorArgs, EvalArgs, ExperimentArgs, FormatArg, GraphArgs, MethodArg, ModeArg, OptimizerArg,
    OracleArgs, SweepArgs,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sigcond::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(sigcond::Error::Io { .. }) | CliError::Write { .. } => 1,
            CliError::Core(sigcond::Error::DegenerateSeed(_)) => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn format(f: FormatArg) -> GraphFormat {
    match f {
        FormatArg::Edgelist => GraphFormat::EdgeList,
        FormatArg::Lfr => GraphFormat::Lfr,
    }
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    Ok(load_edge_list(&args.graph, &LoaderOptions { format: format(args.format) })?)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| {
        CliError::Core(sigcond::Error::Io {
            path: path.to_path_buf(),
            source,
        })
    })
}

fn parse_label_tokens<'a>(tokens: impl Iterator<Item = &'a str>) -> Option<Vec<u64>> {
    tokens.filter(|t| !t.is_empty()).map(|t| t.parse().ok()).collect()
}

/// A comma list of labels, or else a file of whitespace/comma separated labels.
fn labels(spec: &str) -> Result<Vec<u64>> {
    let out = match parse_label_tokens(spec.split(',').map(str::trim)) {
        Some(list) => list,
        None => {
            let text = read_text(Path::new(spec))?;
            let tokens = text
                .lines()
                .filter(|l| !l.trim_start().starts_with('#'))
                .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()));
            parse_label_tokens(tokens).ok_or_else(|| usage(format!("{spec}: expected node labels")))?
        }
    };
    if out.is_empty() {
        return Err(usage(format!("no node labels in {spec:?}")));
    }
    Ok(out)
}

fn node_set(g: &Graph, spec: &str) -> Result<NodeSet> {
    Ok(g.node_set_of(&labels(spec)?)?)
}

fn join(labels: &[u64]) -> String {
    labels.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn schedule(grid: Option<&str>) -> Result<SigmaSchedule<f64>> {
    Ok(match grid {
        Some(spec) => SigmaSchedule::parse(spec)?,
        None => SigmaSchedule::default(),
    })
}

fn optimizer(kind: OptimizerArg, sigma: f64, limit: usize) -> Result<Optimizer<f64>> {
    let o = match kind {
        OptimizerArg::Pgd => {
            let p = PgdParams {
                sigma,
                neighborhood_limit: limit,
                ..PgdParams::default()
            };
            p.validate()?;
            Optimizer::Pgd(p)
        }
        OptimizerArg::Em => {
            let p = EmParams {
                sigma,
                neighborhood_limit: limit,
                ..EmParams::default()
            };
            p.validate()?;
            Optimizer::Em(p)
        }
    };
    if limit == 0 {
        return Err(usage("--limit must be positive"));
    }
    Ok(o)
}

fn method(d: &DetectorArgs) -> Result<Method<f64>> {
    let kind = match d.method {
        MethodArg::Pgd => OptimizerArg::Pgd,
        MethodArg::Em => OptimizerArg::Em,
        MethodArg::Ppr | MethodArg::Yl => {
            if d.auto_sigma {
                return Err(usage("--auto-sigma applies to pgd and em only"));
            }
            let params = PprParams {
                teleport: d.teleport,
                score: if d.alt_conductance { SweepScore::PhiAlt } else { SweepScore::Phi },
                ..PprParams::default()
            };
            params.validate()?;
            let mode = if d.method == MethodArg::Ppr { SweepMode::Global } else { SweepMode::Yl };
            return Ok(Method::Diffusion(params, mode));
        }
    };
    let o = optimizer(kind, d.sigma, d.limit)?;
    Ok(if d.auto_sigma {
        Method::AutoSigma(o, schedule(d.grid.as_deref())?)
    } else {
        Method::Fixed(o)
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn written(path: Option<&Path>, r: io::Result<()>) -> Result<()> {
    r.map_err(|source| CliError::Write {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    })
}

fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            written(path, f(&mut w).and_then(|_| w.flush()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            written(None, f(&mut lock))
        }
    }
}

pub fn detect(args: &DetectArgs) -> Result<()> {
    let method = method(&args.detector)?;
    let g = load_graph(&args.graph)?;
    let seeds = node_set(&g, &args.seeds)?;
    let r = method.detect(&g, &seeds)?;
    println!("{}", join(&g.labels_of(&r.community)));
    eprintln!(
        "method={} size={} phi={} phi_sigma={} sigma={} iterations={}",
        method.name(),
        r.community.len(),
        r.objective_phi,
        r.objective_phi_sigma,
        r.sigma_used,
        r.iterations
    );
    Ok(())
}

fn experiment(e: &ExperimentArgs, method: Method<f64>, limit: usize) -> Result<ExperimentConfig<f64>> {
    let config = ExperimentConfig {
        sample_size: e.samples,
        seeds_per_community: e.seeds_per_community,
        rng_seed: e.rng_seed,
        neighborhood_limit: limit,
        workers: e.workers,
        ..ExperimentConfig::new(method, e.rng_seed)
    };
    config.validate()?;
    Ok(config)
}

fn load_truth(g: &Graph, args: &GraphArgs, e: &ExperimentArgs) -> Result<GroundTruth> {
    Ok(GroundTruth::load(&e.truth, g, format(args.format), e.min_size)?)
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let method = method(&args.detector)?;
    let name = method.name();
    let config = ExperimentConfig {
        timing: args.timing,
        ..experiment(&args.experiment, method, args.detector.limit)?
    };
    let g = load_graph(&args.graph)?;
    let truth = load_truth(&g, &args.graph, &args.experiment)?;
    let (rows, summary) = run_experiment(&g, &truth, &config)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} trials failed and score F1 = 0", rows.len());
        if let Some(r) = rows.iter().find(|r| r.error.is_some()) {
            eprintln!("  first failure (trial {}): {}", r.trial, r.error.as_deref().unwrap_or_default());
        }
    }
    if let Some(out) = &args.out {
        write_to(Some(out), |w| write_rows_csv(w, &rows))?;
    }
    let dataset = args.dataset.clone().unwrap_or_else(|| {
        args.graph
            .graph
            .file_stem()
            .map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned())
    });
    write_to(args.summary.as_deref(), |w| write_summary_csv(w, name, &dataset, &summary))
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let grid = schedule(args.grid.as_deref())?.grid().to_vec();
    let method = Method::Fixed(optimizer(args.method, 0.0, args.limit)?);
    let config = experiment(&args.experiment, method, args.limit)?;
    let g = load_graph(&args.graph)?;
    let truth = load_truth(&g, &args.graph, &args.experiment)?;
    let table = sweep_sigma(&g, &truth, &config, &grid)?;
    write_to(args.out.as_deref(), |w| write_sweep_csv(w, &table))
}

pub fn oracle(args: &OracleArgs) -> Result<()> {
    if !(args.sigma >= 0.0) {
        return Err(usage("--sigma must be nonnegative"));
    }
    let g = load_graph(&args.graph)?;
    let seeds = node_set(&g, &args.seeds)?;
    let scope = match &args.scope {
        Some(spec) => node_set(&g, spec)?,
        None => g.nodes().collect(),
    };
    let best = brute_force_optimum(&g, &seeds, args.sigma, &scope)?;
    println!("{}", join(&g.labels_of(&best.community)));
    println!("{:.14e}", best.phi_sigma);
    if let Some(path) = &args.golden {
        let line = GoldenRecord::new(&g, &seeds, args.sigma, &best).to_line();
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
        written(Some(path), writeln!(f, "{line}"))?;
    }
    Ok(())
}

pub fn check(args: &CheckArgs) -> Result<()> {
    if !(args.sigma >= 0.0) {
        return Err(usage("--sigma must be nonnegative"));
    }
    let g = load_graph(&args.graph)?;
    let text = read_text(&args.community)?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .ok_or_else(|| usage(format!("{}: no community", args.community.display())))?;
    let member_labels =
        parse_label_tokens(line.split_whitespace()).ok_or_else(|| usage(format!("{}: bad label", args.community.display())))?;
    let community = g.node_set_of(&member_labels)?;
    let seeds = node_set(&g, &args.seeds)?;
    let mode = match args.mode {
        ModeArg::Layers => CheckMode::Layers,
        ModeArg::Exhaustive => CheckMode::Exhaustive,
    };

    let report = check_dense_isolated(&g, &community, &seeds, args.sigma, mode)?;
    let verdict = match (report.holds, report.side, report.violated_node) {
        (true, _, _) => "yes".to_string(),
        (false, Some(side), Some(v)) => {
            let side = match side {
                ViolationSide::Density => "density",
                ViolationSide::Isolation => "isolation",
            };
            format!("no ({side} violated at node {})", g.label(v))
        }
        _ => "no".to_string(),
    };
    let recovery = verify_recovery(&g, &community, &seeds, args.sigma)?;
    let trace = match &recovery.divergence {
        None => format!("exact ({} iterations)", recovery.em_iterations),
        Some(d) => {
            let l = |v: &[u32]| join(&v.iter().map(|&x| g.label(x)).collect::<Vec<_>>());
            format!(
                "diverged ({} at iteration {}: missing [{}], extra [{}], fractional [{}])",
                d.algorithm,
                d.iteration,
                l(&d.missing),
                l(&d.extra),
                l(&d.fractional)
            )
        }
    };
    println!("dense-isolated: {verdict}; recovery: {trace}");
    match derive_alpha_beta::<f64, _>(&g, &community)? {
        Some((alpha, beta)) => println!("alpha-beta: alpha={alpha} beta={beta}"),
        None => println!("alpha-beta: not applicable (degree condition fails)"),
    }
    Ok(())
}
