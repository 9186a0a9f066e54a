//! AA-LARCH: an anytime learner that interleaves at most τ LABEL queries
//! with each SEARCH query.

pub mod aalarch;
pub mod subroutines;

pub use aalarch::{run_aalarch, target_level, AnytimeConfig, AnytimeRun, IterationEnd, TimelineRow};
pub use subroutines::{ec_gamma, error_check, prune_version_space, upgrade_version_space};
