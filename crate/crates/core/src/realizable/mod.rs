//! Realizable-case learners: CAL, LARCH, SEABEL and the SEARCH-only
//! binary search over thresholds.

pub mod binary_search;
pub mod cal;
pub mod larch;
pub mod seabel;

pub use binary_search::run_binary_search_demo;
pub use cal::{run_cal, CalEpoch, CalResult};
pub use larch::{run_larch, LarchRun, LarchTraceRow};
pub use seabel::{run_seabel, SeabelRun, SeabelTraceRow};

use crate::error::Result;
use crate::hypotheses::VersionSpace;
use crate::oracles::OracleBundle;

/// Exact error of the canonical member, `None` for an empty space.
pub(crate) fn canonical_error(v: &VersionSpace, bundle: &OracleBundle) -> Result<Option<f64>> {
    if v.is_empty() {
        return Ok(None);
    }
    Ok(Some(bundle.true_error(&v.canonical_member()?)))
}

pub(crate) fn dis_mass_or_zero(v: &VersionSpace) -> Result<f64> {
    if v.is_empty() {
        Ok(0.0)
    } else {
        v.dis_mass()
    }
}
