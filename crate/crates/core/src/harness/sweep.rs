use serde::Serialize;

use super::config::ExperimentConfig;
use super::experiment::{run_experiment, ResultRow};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub epsilon: f64,
    pub runs: usize,
    pub median_label_queries: f64,
    pub median_search_queries: f64,
}

/// Median query counts per ε (decreasing ε) and their decade-normalized
/// growth between consecutive grid points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub algorithm: String,
    pub points: Vec<ScalingPoint>,
    /// `(q_{j+1}/q_j)^(1/decades)` for LABEL medians.
    pub label_growth_per_decade: Vec<f64>,
    /// `(q_{j+1}-q_j)/decades` for SEARCH medians.
    pub search_increment_per_decade: Vec<f64>,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn growth(a: f64, b: f64, decades: f64) -> f64 {
    if a == 0.0 {
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    (b / a).powf(1.0 / decades)
}

/// Needs at least three distinct ε values spanning two decades.
pub fn check_grid(epsilons: &[f64]) -> Result<Vec<f64>> {
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    if eps.len() < 3 {
        return Err(Error::Config(format!("insufficient epsilon grid: need >= 3 distinct values, got {}", eps.len())));
    }
    let span = (eps[0] / eps[eps.len() - 1]).log10();
    if span < 2.0 - 1e-9 {
        return Err(Error::Config(format!("insufficient epsilon grid: spans {span:.3} decades, need >= 2")));
    }
    Ok(eps)
}

/// Summarize rows already produced for the ε grid.
pub fn scaling_report(algorithm: &str, eps: &[f64], rows: &[ResultRow]) -> ScalingReport {
    let points: Vec<ScalingPoint> = eps
        .iter()
        .map(|&e| {
            let cell: Vec<&ResultRow> = rows.iter().filter(|r| r.epsilon == e).collect();
            let mut l: Vec<f64> = cell.iter().map(|r| r.label_queries as f64).collect();
            let mut s: Vec<f64> = cell.iter().map(|r| r.search_queries as f64).collect();
            ScalingPoint {
                epsilon: e,
                runs: cell.len(),
                median_label_queries: median(&mut l),
                median_search_queries: median(&mut s),
            }
        })
        .collect();
    let mut label_growth_per_decade = Vec::new();
    let mut search_increment_per_decade = Vec::new();
    for w in points.windows(2) {
        let decades = (w[0].epsilon / w[1].epsilon).log10();
        label_growth_per_decade.push(growth(w[0].median_label_queries, w[1].median_label_queries, decades));
        search_increment_per_decade.push((w[1].median_search_queries - w[0].median_search_queries) / decades);
    }
    ScalingReport { algorithm: algorithm.to_string(), points, label_growth_per_decade, search_increment_per_decade }
}

/// Run the config over its ε grid and report scaling.
pub fn sweep_query_complexity(cfg: &ExperimentConfig) -> Result<(ScalingReport, Vec<ResultRow>)> {
    let eps = check_grid(&cfg.epsilons)?;
    let rows = run_experiment(cfg)?;
    Ok((scaling_report(cfg.algorithm.name(), &eps, &rows), rows))
}
