use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sigcond", version, about = "Seeded local community detection by sigma-conductance optimization")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat key=value file supplying default flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect the community around the given seeds.
    Detect(DetectArgs),
    /// Evaluate a detector against ground-truth communities.
    Eval(EvalArgs),
    /// Mean F1, size and conductance for each sigma in a grid.
    SweepSigma(SweepArgs),
    /// Exhaustive global optimum over a small scope.
    Oracle(OracleArgs),
    /// Dense-and-isolated verdict, (alpha, beta) derivation and recovery trace check.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Pgd,
    Em,
    Ppr,
    Yl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    Pgd,
    Em,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Edgelist,
    Lfr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Layers,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file: one edge per line.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct DetectorArgs {
    #[arg(long, value_enum, default_value = "pgd")]
    pub method: MethodArg,
    /// Fixed sigma for pgd and em.
    #[arg(long, default_value_t = 0.0, conflicts_with = "auto_sigma")]
    pub sigma: f64,
    /// Pick sigma per run by the density of the detected community.
    #[arg(long)]
    pub auto_sigma: bool,
    /// Sigma grid for --auto-sigma: "start:step:stop" or a comma list.
    #[arg(long, value_name = "SPEC")]
    pub grid: Option<String>,
    /// Neighborhood size limit for pgd and em.
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
    /// Restart probability for ppr and yl.
    #[arg(long, default_value_t = 0.15)]
    pub teleport: f64,
    /// Sweep with the alternative conductance (ppr and yl).
    #[arg(long)]
    pub alt_conductance: bool,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Seed labels as a comma list, or a file of labels.
    #[arg(long, required = true)]
    pub seeds: String,
    #[command(flatten)]
    pub detector: DetectorArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Ground-truth communities: one per line (or node/community pairs with --format lfr).
    pub truth: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    #[arg(long, default_value_t = 1)]
    pub seeds_per_community: usize,
    /// Smallest ground-truth community kept.
    #[arg(long, default_value_t = 3)]
    pub min_size: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    #[command(flatten)]
    pub detector: DetectorArgs,
    /// Per-trial CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary CSV (printed to stdout when absent).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Dataset name for the summary; defaults to the graph file stem.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Record wall-clock milliseconds per trial.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    #[arg(long, value_enum, default_value = "pgd")]
    pub method: OptimizerArg,
    /// "start:step:stop" or a comma list; defaults to 0..1 by 0.05 plus 1.5 and 2.
    #[arg(long, value_name = "SPEC")]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
    /// Output CSV (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, required = true)]
    pub seeds: String,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Candidate nodes (comma list or file); defaults to every node.
    #[arg(long)]
    pub scope: Option<String>,
    /// Append the result as a golden-file line.
    #[arg(long, value_name = "FILE")]
    pub golden: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// File whose first line lists the community's labels.
    pub community: PathBuf,
    #[arg(long, required = true)]
    pub seeds: String,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "layers")]
    pub mode: ModeArg,
}

/// Splices `--key value` pairs from a config file in right after the
/// subcommand, so flags given on the command line override them.
pub fn merge_config(args: Vec<String>, text: &str) -> Result<Vec<String>, String> {
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key=value", i + 1));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key == "config" {
            return Err(format!("config line {}: nested config files are not supported", i + 1));
        }
        match value {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => {
                extra.push(format!("--{key}"));
                extra.push(value.to_string());
            }
        }
    }
    // The subcommand is the first argument that is neither a flag nor a --config value.
    let mut at = None;
    let mut skip = false;
    for (i, a) in args.iter().enumerate().skip(1) {
        if skip {
            skip = false;
        } else if a == "--config" {
            skip = true;
        } else if !a.starts_with('-') {
            at = Some(i + 1);
            break;
        }
    }
    let at = at.ok_or("config file given without a subcommand")?;
    let mut merged = args[..at].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[at..]);
    Ok(merged)
}

/// Value of `--config` in raw arguments, if any.
pub fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn config_values_precede_explicit_flags() {
        let args = strings(&["sigcond", "--config", "c.txt", "detect", "g.txt", "--sigma", "0.3"]);
        let merged = merge_config(args, "sigma = 0.1\nauto_sigma = false\n# note\nlimit=50").unwrap();
        assert_eq!(
            merged,
            strings(&["sigcond", "--config", "c.txt", "detect", "--sigma", "0.1", "--limit", "50", "g.txt", "--sigma", "0.3"])
        );
        let cli = Cli::try_parse_from(merge_config(merged.clone(), "").unwrap().iter().chain(["--seeds".to_string(), "1".to_string()].iter())).unwrap();
        let Command::Detect(d) = cli.command else { panic!() };
        assert_eq!(d.detector.sigma, 0.3);
        assert_eq!(d.detector.limit, 50);
    }

    #[test]
    fn config_errors() {
        assert!(merge_config(strings(&["sigcond", "detect"]), "oops").is_err());
        assert!(merge_config(strings(&["sigcond", "--config", "x"]), "a=1").is_err());
        assert_eq!(config_path(&strings(&["s", "--config=a.txt"])), Some(PathBuf::from("a.txt")));
    }
}
