use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::hypotheses::{segments, Hypothesis};

/// Flip probability `eta` on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSegment {
    pub lo: f64,
    pub hi: f64,
    pub eta: f64,
}

/// How LABEL corrupts `h*(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseModel {
    Realizable,
    Rcn { eta: f64 },
    /// Piecewise-constant flip table; segments must tile `[0,1]` in order.
    Pointwise { table: Vec<NoiseSegment> },
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..0.5).contains(&eta) {
        Ok(())
    } else {
        Err(domain(format!("flip probability must lie in [0, 1/2), got {eta}")))
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::Realizable => Ok(()),
            NoiseModel::Rcn { eta } => check_eta(*eta),
            NoiseModel::Pointwise { table } => {
                if table.is_empty() {
                    return Err(domain("pointwise noise table is empty"));
                }
                let mut at = 0.0;
                for seg in table {
                    check_eta(seg.eta)?;
                    if seg.lo != at || !(seg.hi > seg.lo) {
                        return Err(domain(format!(
                            "pointwise noise segments must tile [0,1] in order; found [{}, {}] after {at}",
                            seg.lo, seg.hi
                        )));
                    }
                    at = seg.hi;
                }
                if at != 1.0 {
                    return Err(domain("pointwise noise table must end at 1"));
                }
                Ok(())
            }
        }
    }

    pub fn flip_probability(&self, x: f64) -> f64 {
        match self {
            NoiseModel::Realizable => 0.0,
            NoiseModel::Rcn { eta } => *eta,
            NoiseModel::Pointwise { table } => {
                let idx = table.partition_point(|s| s.hi < x).min(table.len() - 1);
                table[idx].eta
            }
        }
    }

    /// `∫_region eta(x) dx`.
    pub fn flip_mass(&self, region: &[(f64, f64)]) -> f64 {
        match self {
            NoiseModel::Realizable => 0.0,
            NoiseModel::Rcn { eta } => eta * segments::measure(region),
            NoiseModel::Pointwise { table } => table
                .iter()
                .map(|s| s.eta * segments::measure(&segments::intersect(&[(s.lo, s.hi)], region)))
                .sum(),
        }
    }

    /// `err(h*) = ∫ eta`.
    pub fn nu(&self) -> f64 {
        self.flip_mass(&[(0.0, 1.0)])
    }

    /// Exact `Pr[h(x) != y]` when `y` is `target(x)` flipped per the model.
    pub fn true_error(&self, h: &Hypothesis, target: &Hypothesis) -> f64 {
        let diff = segments::symmetric_difference(&h.positive_set(), &target.positive_set());
        let dm = segments::measure(&diff);
        // mass(diff) - 2 ∫_diff eta + ∫ eta
        (self.nu() + dm - 2.0 * self.flip_mass(&diff)).clamp(0.0, 1.0)
    }

    /// Exact `Pr[h(x) != y, x ∈ region]`.
    pub fn restricted_error(&self, h: &Hypothesis, target: &Hypothesis, region: &[(f64, f64)]) -> f64 {
        let diff = segments::intersect(
            &segments::symmetric_difference(&h.positive_set(), &target.positive_set()),
            region,
        );
        (self.flip_mass(region) + segments::measure(&diff) - 2.0 * self.flip_mass(&diff)).clamp(0.0, 1.0)
    }

    /// `true_error` from a precomputed disagreement mass; exact for
    /// realizable and RCN models.
    pub fn error_from_distance(&self, distance: f64) -> Option<f64> {
        match self {
            NoiseModel::Realizable => Some(distance),
            NoiseModel::Rcn { eta } => Some(eta + (1.0 - 2.0 * eta) * distance),
            NoiseModel::Pointwise { .. } => None,
        }
    }
}

/// Exact error of `h` under `noise` around `target`.
pub fn true_error(h: &Hypothesis, target: &Hypothesis, noise: &NoiseModel) -> f64 {
    noise.true_error(h, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn true_error_examples() {
        let t = Hypothesis::threshold(0.5).unwrap();
        let rcn = NoiseModel::Rcn { eta: 0.1 };
        assert!((rcn.true_error(&t, &t) - 0.1).abs() < 1e-12);
        let h = Hypothesis::threshold(0.3).unwrap();
        // eta * 0.4 + (1 - 2 eta) * mass([0.3, 0.5) ∩ (0.2, 0.6))
        assert!((rcn.restricted_error(&h, &t, &[(0.2, 0.6)]) - (0.04 + 0.8 * 0.2)).abs() < 1e-12);
        assert!((rcn.restricted_error(&h, &t, &[(0.0, 1.0)]) - rcn.true_error(&h, &t)).abs() < 1e-12);
        let h = Hypothesis::threshold(0.3).unwrap();
        assert!((rcn.true_error(&h, &t) - 0.26).abs() < 1e-12);
        let h = Hypothesis::threshold(0.2).unwrap();
        assert!((NoiseModel::Realizable.true_error(&h, &t) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn pointwise_matches_rcn_when_constant() {
        let table = NoiseModel::Pointwise {
            table: vec![NoiseSegment { lo: 0.0, hi: 0.4, eta: 0.1 }, NoiseSegment { lo: 0.4, hi: 1.0, eta: 0.1 }],
        };
        table.validate().unwrap();
        let t = Hypothesis::intervals(&[(0.2, 0.6)]).unwrap();
        let h = Hypothesis::intervals(&[(0.3, 0.9)]).unwrap();
        let a = table.true_error(&h, &t);
        let b = NoiseModel::Rcn { eta: 0.1 }.true_error(&h, &t);
        assert!((a - b).abs() < 1e-12);
        assert_eq!(table.flip_probability(0.4), 0.1);
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(NoiseModel::Rcn { eta: 0.5 }.validate().is_err());
        assert!(NoiseModel::Pointwise { table: vec![NoiseSegment { lo: 0.0, hi: 0.5, eta: 0.1 }] }
            .validate()
            .is_err());
    }
}
