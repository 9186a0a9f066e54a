use serde::{Deserialize, Serialize};

use super::segments::{self, SegmentList};
use super::types::{Label, Point};
use crate::error::{domain, Error, Result};

/// A closed interval `[lo, hi]` of `[0,1]`; `lo == hi` is a single point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct ClosedInterval {
    lo: f64,
    hi: f64,
}

impl ClosedInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

impl TryFrom<(f64, f64)> for ClosedInterval {
    type Error = Error;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Self::new(lo, hi)
    }
}

impl From<ClosedInterval> for (f64, f64) {
    fn from(i: ClosedInterval) -> Self {
        (i.lo, i.hi)
    }
}

/// Union of sorted, pairwise-disjoint closed intervals. Empty is the
/// always-negative hypothesis.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ClosedInterval>", into = "Vec<ClosedInterval>")]
pub struct IntervalUnion {
    intervals: Vec<ClosedInterval>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<ClosedInterval>) -> Result<Self> {
        for w in intervals.windows(2) {
            if !(w[0].hi < w[1].lo) {
                return Err(domain(format!(
                    "intervals must be sorted and disjoint: [{}, {}] then [{}, {}]",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        Ok(Self { intervals })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let intervals = pairs
            .iter()
            .map(|&(lo, hi)| ClosedInterval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn always_negative() -> Self {
        Self::default()
    }

    pub fn intervals(&self) -> &[ClosedInterval] {
        &self.intervals
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    pub fn predict(&self, x: f64) -> Label {
        let idx = self.intervals.partition_point(|i| i.lo <= x);
        Label::from_bool(idx > 0 && self.intervals[idx - 1].contains(x))
    }
}

impl TryFrom<Vec<ClosedInterval>> for IntervalUnion {
    type Error = Error;

    fn try_from(v: Vec<ClosedInterval>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntervalUnion> for Vec<ClosedInterval> {
    fn from(u: IntervalUnion) -> Self {
        u.intervals
    }
}

/// A binary classifier over `[0,1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "HypothesisRepr")]
pub enum Hypothesis {
    /// `+1` on `[w, 1]`, `-1` on `[0, w)`.
    Threshold { w: f64 },
    Intervals { intervals: IntervalUnion },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum HypothesisRepr {
    Threshold { w: f64 },
    Intervals { intervals: IntervalUnion },
}

impl TryFrom<HypothesisRepr> for Hypothesis {
    type Error = Error;

    fn try_from(r: HypothesisRepr) -> Result<Self> {
        match r {
            HypothesisRepr::Threshold { w } => Hypothesis::threshold(w),
            HypothesisRepr::Intervals { intervals } => Ok(Hypothesis::Intervals { intervals }),
        }
    }
}

impl Hypothesis {
    pub fn threshold(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(domain(format!("threshold must lie in [0,1], got {w}")));
        }
        Ok(Hypothesis::Threshold { w })
    }

    pub fn intervals(pairs: &[(f64, f64)]) -> Result<Self> {
        Ok(Hypothesis::Intervals { intervals: IntervalUnion::from_pairs(pairs)? })
    }

    pub fn always_negative() -> Self {
        Hypothesis::Intervals { intervals: IntervalUnion::always_negative() }
    }

    pub fn predict(&self, x: Point) -> Label {
        self.predict_raw(x.get())
    }

    pub(crate) fn predict_raw(&self, x: f64) -> Label {
        match self {
            Hypothesis::Threshold { w } => Label::from_bool(*w <= x),
            Hypothesis::Intervals { intervals } => intervals.predict(x),
        }
    }

    /// The positive region as sorted `(lo, hi)` pairs.
    pub fn positive_set(&self) -> SegmentList {
        match self {
            Hypothesis::Threshold { w } => vec![(*w, 1.0)],
            Hypothesis::Intervals { intervals } => {
                intervals.intervals().iter().map(|&i| i.into()).collect()
            }
        }
    }

    /// Endpoints where the prediction can change.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.positive_set().into_iter().flat_map(|(lo, hi)| [lo, hi]).collect()
    }
}

/// Measure of `{x : h(x) != g(x)}` under the uniform distribution.
pub fn ball_radius_pair_distance(h: &Hypothesis, g: &Hypothesis) -> f64 {
    segments::measure(&segments::symmetric_difference(&h.positive_set(), &g.positive_set()))
}

/// Measure of `{x in region : h(x) != g(x)}`.
pub fn restricted_disagreement(h: &Hypothesis, g: &Hypothesis, region: &[(f64, f64)]) -> f64 {
    let diff = segments::symmetric_difference(&h.positive_set(), &g.positive_set());
    segments::measure(&segments::intersect(&diff, region))
}
