use serde::{Deserialize, Serialize};

use super::bundle::OracleBundle;
use crate::error::{domain, Result};
use crate::hypotheses::VersionSpace;

/// Upper bound on the target's error inside a disagreement region,
/// `Pr[h*(x) != y, x ∈ DIS(V)] <= γ(V)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaOracle {
    /// `γ(V) = ν`.
    Constant { nu: f64 },
    /// `γ(V) = η̄ · Pr[x ∈ DIS(V)]`.
    Rcn { eta_bar: f64 },
    /// `γ(V) = Pr[h*(x) != y, x ∈ DIS(V)]`, computed from the true noise model.
    Exact,
}

impl GammaOracle {
    pub fn constant(nu: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&nu) {
            return Err(domain(format!("gamma_constant: nu must lie in [0,1), got {nu}")));
        }
        Ok(GammaOracle::Constant { nu })
    }

    pub fn rcn(eta_bar: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&eta_bar) {
            return Err(domain(format!("gamma_rcn: eta_bar must lie in [0, 1/2), got {eta_bar}")));
        }
        Ok(GammaOracle::Rcn { eta_bar })
    }

    pub fn value(&self, v: &VersionSpace, bundle: &OracleBundle) -> Result<f64> {
        if v.is_empty() {
            return Ok(match self {
                GammaOracle::Constant { nu } => *nu,
                _ => 0.0,
            });
        }
        Ok(match self {
            GammaOracle::Constant { nu } => *nu,
            GammaOracle::Rcn { eta_bar } => eta_bar * v.dis_mass()?,
            GammaOracle::Exact => bundle.target_flip_mass(&v.dis_region()?),
        })
    }

    /// A value no smaller than any `γ(V)`.
    pub fn upper(&self, bundle: &OracleBundle) -> f64 {
        match self {
            GammaOracle::Constant { nu } => *nu,
            GammaOracle::Rcn { eta_bar } => *eta_bar,
            GammaOracle::Exact => bundle.nu(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{ex, ConstrainedSpace, Family, Hypothesis};
    use crate::oracles::NoiseModel;

    fn v04() -> VersionSpace {
        VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(0.3, -1), ex(0.7, 1)]))
    }

    #[test]
    fn gamma_examples() {
        let b = OracleBundle::new(Hypothesis::threshold(0.5).unwrap(), NoiseModel::Rcn { eta: 0.1 }, 0).unwrap();
        let v = v04();
        assert_eq!(GammaOracle::constant(0.1).unwrap().value(&v, &b).unwrap(), 0.1);
        assert_eq!(GammaOracle::constant(0.0).unwrap().value(&v, &b).unwrap(), 0.0);
        assert!((GammaOracle::rcn(0.1).unwrap().value(&v, &b).unwrap() - 0.04).abs() < 1e-12);
        let exact = GammaOracle::Exact.value(&v, &b).unwrap();
        assert!((exact - 0.04).abs() < 1e-12);
        assert!(exact <= 0.1);
        let single =
            VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(0.3, -1), ex(0.3000001, 1)]));
        assert!(GammaOracle::rcn(0.1).unwrap().value(&single, &b).unwrap() < 1e-6);
        assert!(GammaOracle::rcn(0.5).is_err());
    }
}
