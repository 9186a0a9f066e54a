//! Hypothesis classes on `[0,1]` and their version spaces.

pub mod coefficient;
pub mod enumerated;
pub mod exact;
pub mod hypothesis;
pub mod nested;
pub mod segments;
pub mod types;
pub mod version_space;

pub use coefficient::{disagreement_coefficient_at, disagreement_coefficient_estimate, radius_grid};
pub use enumerated::{interval_union_count, ClassKind, EnumeratedClass, PieceTally};
pub use exact::{is_realizable_by_k_intervals, ConstrainedSpace, Family};
pub use hypothesis::{ball_radius_pair_distance, restricted_disagreement, ClosedInterval, Hypothesis, IntervalUnion};
pub use nested::{Backend, NestedClassSequence};
pub use types::{ex, Label, LabeledExample, Point};
pub use version_space::{MaskedSpace, VersionSpace};
