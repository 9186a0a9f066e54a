use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Oracle call counts and the `tau`-weighted cost.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub label_queries: u64,
    pub search_queries: u64,
    pub unlabeled_draws: u64,
    pub tau: f64,
}

impl Default for QueryLedger {
    fn default() -> Self {
        Self { label_queries: 0, search_queries: 0, unlabeled_draws: 0, tau: 1.0 }
    }
}

impl QueryLedger {
    pub fn with_tau(tau: f64) -> Result<Self> {
        if !(tau >= 1.0) || !tau.is_finite() {
            return Err(domain(format!("tau must be a finite value >= 1, got {tau}")));
        }
        Ok(Self { tau, ..Self::default() })
    }

    pub fn cost(&self) -> f64 {
        self.label_queries as f64 + self.tau * self.search_queries as f64
    }

    /// Counts accrued since `earlier`.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            label_queries: self.label_queries - earlier.label_queries,
            search_queries: self.search_queries - earlier.search_queries,
            unlabeled_draws: self.unlabeled_draws - earlier.unlabeled_draws,
            tau: self.tau,
        }
    }
}
