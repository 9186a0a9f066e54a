use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use searchlabel::harness::{
    run_experiment, sweep_query_complexity, validate_against_bruteforce, ExperimentConfig, ResultRow,
};
use searchlabel::hypotheses::Hypothesis;
use searchlabel::oracles::{OracleBundle, SearchPolicy};
use searchlabel::realizable::run_binary_search_demo;

#[derive(Parser)]
#[command(name = "searchlabel", version, about = "Active learning experiments with LABEL and SEARCH oracles")]
struct Cli {
    /// Default directory for results when a config names no output file.
    #[arg(long, env = "SEARCHLABEL_OUT", default_value = "results", global = true)]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write its results CSV.
    Run(RunArgs),
    /// Run a config over its epsilon grid and print the scaling report.
    Sweep(RunArgs),
    /// Check every core operation against brute-force enumeration.
    Validate {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// SEARCH-only binary search for a threshold.
    Demo {
        #[arg(long, default_value_t = 0.001)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.3721)]
        threshold: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "first-sweep")]
        policy: Policy,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Policy {
    FirstSweep,
    UniformRandomValid,
    AdversarialBoundary,
}

impl From<Policy> for SearchPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::FirstSweep => SearchPolicy::FirstSweep,
            Policy::UniformRandomValid => SearchPolicy::UniformRandomValid,
            Policy::AdversarialBoundary => SearchPolicy::AdversarialBoundary,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config.
    config: PathBuf,
    /// Use seeds 0..N instead of the config's list.
    #[arg(long)]
    seeds: Option<u64>,
    /// Replace the epsilon list (repeatable).
    #[arg(long = "epsilon")]
    epsilons: Vec<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    cost_cap: Option<f64>,
    /// Results CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    record_timing: bool,
}

impl RunArgs {
    fn load(&self, out_dir: &Path) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)
            .with_context(|| format!("loading {}", self.config.display()))?;
        if let Some(n) = self.seeds {
            cfg.seeds = (0..n).collect();
        }
        if !self.epsilons.is_empty() {
            cfg.epsilons = self.epsilons.clone();
        }
        if let Some(d) = self.delta {
            cfg.delta = d;
        }
        if let Some(t) = self.tau {
            cfg.tau = t;
        }
        if let Some(c) = self.cost_cap {
            cfg.cost_cap = Some(c);
        }
        if self.record_timing {
            cfg.record_timing = true;
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.clone());
        }
        if cfg.output.is_none() {
            cfg.output = Some(out_dir.join(format!("{}-{}.csv", cfg.algorithm.name(), cfg.hash())));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn summarize(rows: &[ResultRow]) {
    let errs: Vec<f64> = rows.iter().filter_map(|r| r.exact_error).collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    let labels: u64 = rows.iter().map(|r| r.label_queries).sum();
    let searches: u64 = rows.iter().map(|r| r.search_queries).sum();
    println!("{} rows; {labels} LABEL and {searches} SEARCH queries in total; worst exact error {worst:.6}", rows.len());
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load(&cli.out_dir)?;
            let rows = run_experiment(&cfg)?;
            summarize(&rows);
            println!("wrote {}", cfg.output.as_deref().unwrap_or(Path::new("-")).display());
        }
        Command::Sweep(args) => {
            let cfg = args.load(&cli.out_dir)?;
            let (report, rows) = sweep_query_complexity(&cfg)?;
            summarize(&rows);
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Validate { instances, seed, report } => {
            let r = validate_against_bruteforce(instances, seed);
            for (name, n) in &r.checks {
                let bad = r.mismatches.iter().filter(|m| &m.check == name).count();
                println!("{name:<34} {n:>8} checks {bad:>5} mismatches");
            }
            if let Some(path) = report {
                std::fs::write(&path, serde_json::to_string_pretty(&r)?)?;
            }
            if !r.is_clean() {
                for m in r.mismatches.iter().take(10) {
                    eprintln!("instance {} {}: {}", m.instance, m.check, m.detail);
                }
                eprintln!("{} mismatches", r.mismatches.len());
                return Ok(ExitCode::FAILURE);
            }
            println!("{instances} instances, 0 mismatches");
        }
        Command::Demo { epsilon, threshold, seed, policy } => {
            let target = Hypothesis::threshold(threshold)?;
            let mut bundle = OracleBundle::realizable(target, seed).with_policy(policy.into());
            let (h, ledger) = run_binary_search_demo(&mut bundle, epsilon)?;
            println!(
                "returned {h:?} with exact error {:.3e} after {} SEARCH and {} LABEL queries (log2(1/eps) + 2 = {:.2})",
                bundle.true_error(&h),
                ledger.search_queries,
                ledger.label_queries,
                (1.0 / epsilon).log2() + 2.0
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
