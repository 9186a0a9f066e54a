use std::io::{BufRead, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, ExperimentConfig, Prepared};
use super::passive::run_passive;
use crate::agnostic::{run_al, run_alarch};
use crate::anytime::{run_aalarch, AnytimeConfig};
use crate::error::{Error, Result};
use crate::hypotheses::{Hypothesis, VersionSpace};
use crate::oracles::OracleBundle;
use crate::realizable::{run_binary_search_demo, run_cal, run_larch, run_seabel};

/// First line of every results CSV.
pub const CSV_VERSION_LINE: &str = "# searchlabel-results v1";

/// One `(seed, epsilon)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub config_hash: String,
    pub seed: u64,
    pub epsilon: f64,
    pub label_queries: u64,
    pub search_queries: u64,
    pub unlabeled_draws: u64,
    pub cost: f64,
    /// Exact error of the returned hypothesis; empty when the run returned
    /// none (an empty CAL space, or AA-LARCH stopping before it verified).
    pub exact_error: Option<f64>,
    pub iterations: u64,
    /// Seconds; 0 unless `record_timing` is set.
    pub wall_time: f64,
}

struct CellOutcome {
    hypothesis: Option<Hypothesis>,
    iterations: u64,
}

fn canonical(v: &VersionSpace) -> Result<Option<Hypothesis>> {
    if v.is_empty() {
        Ok(None)
    } else {
        v.canonical_member().map(Some)
    }
}

fn run_algorithm(cfg: &ExperimentConfig, prep: &Prepared, bundle: &mut OracleBundle, eps: f64) -> Result<CellOutcome> {
    let delta = cfg.delta;
    let out = match cfg.algorithm {
        Algorithm::BinarySearchDemo => {
            let (h, ledger) = run_binary_search_demo(bundle, eps)?;
            CellOutcome { hypothesis: Some(h), iterations: ledger.search_queries }
        }
        Algorithm::Cal => {
            let r = run_cal(&prep.initial_space(cfg), bundle, eps, delta)?;
            CellOutcome { hypothesis: canonical(&r.final_space)?, iterations: r.num_epochs() as u64 }
        }
        Algorithm::Larch => {
            let r = run_larch(&prep.sequence(cfg), bundle, eps, delta)?;
            CellOutcome { iterations: r.iterations(), hypothesis: Some(r.hypothesis) }
        }
        Algorithm::Seabel => {
            let r = run_seabel(&prep.sequence(cfg), bundle, eps, delta)?;
            CellOutcome { iterations: r.trace.len() as u64, hypothesis: Some(r.hypothesis) }
        }
        Algorithm::Al => {
            let v0 = prep.initial_space(cfg);
            let m = v0.as_masked().ok_or_else(|| Error::Config("al runs on the enumerated backend".into()))?;
            let r = run_al(m, bundle, &cfg.gamma_oracle(), eps, delta)?;
            CellOutcome { iterations: r.halting_epoch as u64, hypothesis: Some(r.hypothesis) }
        }
        Algorithm::Alarch => {
            let r = run_alarch(&prep.sequence(cfg), bundle, &cfg.gamma_oracle(), eps, delta)?;
            CellOutcome { iterations: r.rounds.len() as u64, hypothesis: Some(r.hypothesis) }
        }
        Algorithm::Aalarch => {
            let n = cfg.n.ok_or_else(|| Error::Config("aalarch needs n".into()))?;
            let cap = cfg.cost_cap.ok_or_else(|| Error::Config("aalarch needs cost_cap".into()))?;
            let mut ac = AnytimeConfig::new(delta, n, cap);
            ac.check_invariants = false;
            if let Some(s) = cfg.max_steps {
                ac.max_steps = s;
            }
            let r = run_aalarch(&prep.sequence(cfg), bundle, &ac)?;
            CellOutcome { iterations: r.timeline.len() as u64, hypothesis: r.hypothesis }
        }
        Algorithm::PassiveBaseline => {
            let r = run_passive(&prep.initial_space(cfg), bundle, eps, delta)?;
            CellOutcome { hypothesis: Some(r.hypothesis), iterations: 1 }
        }
    };
    Ok(out)
}

fn run_cell(cfg: &ExperimentConfig, prep: &Prepared, hash: &str, seed: u64, eps: f64) -> Result<ResultRow> {
    let mut bundle = OracleBundle::new(cfg.target.clone(), cfg.noise.clone(), seed)?
        .with_policy(cfg.search_policy)
        .with_tau(cfg.tau)?;
    let start = Instant::now();
    let out = run_algorithm(cfg, prep, &mut bundle, eps)?;
    let elapsed = start.elapsed().as_secs_f64();
    let ledger = *bundle.ledger();
    Ok(ResultRow {
        config_hash: hash.to_string(),
        seed,
        epsilon: eps,
        label_queries: ledger.label_queries,
        search_queries: ledger.search_queries,
        unlabeled_draws: ledger.unlabeled_draws,
        cost: ledger.cost(),
        exact_error: out.hypothesis.map(|h| bundle.true_error(&h)),
        iterations: out.iterations,
        wall_time: if cfg.record_timing { elapsed } else { 0.0 },
    })
}

/// Run every `(seed, epsilon)` cell in parallel. Rows come back ordered by
/// seed, then by the position of epsilon in the config. Writes the CSV to
/// `config.output` when set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let prep = Prepared::new(cfg)?;
    let hash = cfg.hash();
    let cells: Vec<(u64, f64)> =
        cfg.seeds.iter().flat_map(|&s| cfg.epsilons.iter().map(move |&e| (s, e))).collect();
    let rows = cells
        .par_iter()
        .map(|&(seed, eps)| {
            run_cell(cfg, &prep, &hash, seed, eps)
                .map_err(|e| Error::Config(format!("{} seed={seed} epsilon={eps}: {e}", cfg.algorithm.name())))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &cfg.output {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        write_results_csv(&rows, std::fs::File::create(path)?)?;
    }
    Ok(rows)
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_VERSION_LINE}")?;
    let mut out = csv::Writer::from_writer(w);
    if rows.is_empty() {
        out.write_record([
            "config_hash",
            "seed",
            "epsilon",
            "label_queries",
            "search_queries",
            "unlabeled_draws",
            "cost",
            "exact_error",
            "iterations",
            "wall_time",
        ])?;
    }
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_results_csv<R: BufRead>(mut r: R) -> Result<Vec<ResultRow>> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    if first.trim_end() != CSV_VERSION_LINE {
        return Err(Error::Config(format!("unsupported results file header: {:?}", first.trim_end())));
    }
    let mut rd = csv::Reader::from_reader(r);
    rd.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text).unwrap()
    }

    const LARCH: &str = r#"
algorithm = "larch"
epsilons = [0.05, 0.01, 0.005]
delta = 0.1
seeds = [0, 1, 2, 3]
[class]
family = "intervals"
k_max = 3
[target]
kind = "intervals"
intervals = [[0.2, 0.4], [0.6, 0.8]]
"#;

    #[test]
    fn one_row_per_cell_and_ledger_consistent() {
        let rows = run_experiment(&cfg(LARCH)).unwrap();
        assert_eq!(rows.len(), 12);
        for r in &rows {
            assert_eq!(r.cost, r.label_queries as f64 + r.search_queries as f64);
            let e = r.exact_error.unwrap();
            assert!((0.0..=r.epsilon).contains(&e), "{r:?}");
            assert_eq!(r.wall_time, 0.0);
        }
        assert_eq!((rows[0].seed, rows[0].epsilon), (0, 0.05));
        assert_eq!((rows[1].seed, rows[1].epsilon), (0, 0.01));
    }

    #[test]
    fn reruns_are_bit_identical() {
        let c = cfg(LARCH);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_results_csv(&run_experiment(&c).unwrap(), &mut a).unwrap();
        write_results_csv(&run_experiment(&c).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a.clone()).unwrap();
        assert!(text.starts_with("# searchlabel-results v1\nconfig_hash,seed,epsilon,label_queries"));
        let back = read_results_csv(a.as_slice()).unwrap();
        assert_eq!(back, run_experiment(&c).unwrap());
    }

    #[test]
    fn passive_needs_tenfold_labels_per_decade() {
        let text = r#"
algorithm = "passive-baseline"
epsilons = [0.01, 0.001]
delta = 0.1
seeds = [5]
[class]
family = "intervals"
k_max = 1
[target]
kind = "intervals"
intervals = [[0.3, 0.7]]
"#;
        let rows = run_experiment(&cfg(text)).unwrap();
        assert!(rows[1].label_queries >= 8 * rows[0].label_queries);
        assert!(rows[1].exact_error.unwrap() <= 0.001);
    }

    #[test]
    fn every_algorithm_runs() {
        let base = |alg: &str, family: &str, target: &str, extra: &str| {
            format!(
                "algorithm = \"{alg}\"\nepsilons = [0.1]\ndelta = 0.1\nseeds = [3]\n{extra}\n\
                 [class]\nfamily = \"{family}\"\nk_max = 2\nbackend = \"{}\"\nresolution = 11\n[target]\n{target}\n",
                if ["al", "alarch", "aalarch"].contains(&alg) { "enumerated" } else { "exact" }
            )
        };
        let thr = "kind = \"threshold\"\nw = 0.3";
        let ivl = "kind = \"intervals\"\nintervals = [[0.2, 0.5]]";
        let cases = [
            base("binary-search-demo", "thresholds", thr, ""),
            base("cal", "thresholds", thr, ""),
            base("larch", "intervals", ivl, ""),
            base("seabel", "intervals", ivl, ""),
            base("al", "thresholds", thr, ""),
            base("alarch", "intervals", ivl, ""),
            base("aalarch", "intervals", ivl, "n = 2000\ncost_cap = 300.0"),
            base("passive-baseline", "intervals", ivl, ""),
        ];
        for text in cases {
            let rows = run_experiment(&cfg(&text)).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(rows.len(), 1);
            if let Some(e) = rows[0].exact_error {
                assert!((0.0..=1.0).contains(&e));
            }
        }
    }
}
