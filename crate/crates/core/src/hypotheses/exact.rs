//! Constraint-defined version spaces `H_k(S)` over the continuum.
//!
//! A union of at most `k` closed intervals is consistent with a labeled
//! set iff, after sorting by `x`, the positive labels form at most `k`
//! maximal runs. Thresholds are consistent iff every negative lies
//! strictly left of every positive (and no negative sits at `x = 1`).

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};

use serde::{Deserialize, Serialize};

use super::hypothesis::Hypothesis;
use super::segments::{self, SegmentList};
use super::types::{Label, LabeledExample};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Thresholds,
    Intervals { k: usize },
}

impl Family {
    pub fn vc_dim(self) -> usize {
        match self {
            Family::Thresholds => 1,
            Family::Intervals { k } => 2 * k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedSpace {
    family: Family,
    points: Vec<(f64, Label)>,
    // maximal same-label runs of `points` as (first x, last x, label),
    // plus the exact point set; together they answer neighbor queries
    // without searching the full (possibly huge) point list
    blocks: Vec<(f64, f64, Label)>,
    members: PointSet,
    runs: usize,
    max_neg: Option<f64>,
    min_pos: Option<f64>,
    conflict: bool,
}

/// Multiplicative hash for `f64` bit patterns.
#[derive(Default)]
struct BitsHasher(u64);

impl Hasher for BitsHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ u64::from(b)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }

    fn write_u64(&mut self, n: u64) {
        self.0 = (n ^ (n >> 29)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
}

type PointSet = HashSet<u64, BuildHasherDefault<BitsHasher>>;

fn key(x: f64) -> u64 {
    // folds -0.0 into 0.0
    (x + 0.0).to_bits()
}

/// Number of maximal runs of positives in a labeled set sorted by `x`.
fn count_runs(points: &[(f64, Label)]) -> usize {
    let mut runs = 0;
    let mut prev = Label::Neg;
    for &(_, y) in points {
        if y.is_pos() && !prev.is_pos() {
            runs += 1;
        }
        prev = y;
    }
    runs
}

/// True iff `S` sorted by `x` has at most `k` runs of positives and no
/// duplicate point carries both labels.
pub fn is_realizable_by_k_intervals(s: &[LabeledExample], k: usize) -> bool {
    !ConstrainedSpace::new(Family::Intervals { k }, s).is_empty()
}

impl ConstrainedSpace {
    pub fn new(family: Family, s: &[LabeledExample]) -> Self {
        let points: Vec<(f64, Label)> = s.iter().map(|e| (e.x.get(), e.y)).collect();
        let members = points.iter().map(|p| key(p.0)).collect();
        Self::from_points(family, points, members)
    }

    /// `members` must already hold the key of every point.
    fn from_points(family: Family, mut points: Vec<(f64, Label)>, members: PointSet) -> Self {
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        points.dedup();
        let conflict = points.windows(2).any(|w| w[0].0 == w[1].0);
        points.dedup_by(|b, a| a.0 == b.0);
        let runs = count_runs(&points);
        let mut blocks: Vec<(f64, f64, Label)> = Vec::new();
        for &(x, y) in &points {
            match blocks.last_mut() {
                Some(b) if b.2 == y => b.1 = x,
                _ => blocks.push((x, x, y)),
            }
        }
        let max_neg = points.iter().filter(|p| !p.1.is_pos()).map(|p| p.0).next_back();
        let min_pos = points.iter().find(|p| p.1.is_pos()).map(|p| p.0);
        Self { family, points, blocks, members, runs, max_neg, min_pos, conflict }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn vc_dim(&self) -> usize {
        self.family.vc_dim()
    }

    pub fn constraints(&self) -> impl Iterator<Item = LabeledExample> + '_ {
        self.points.iter().map(|&(x, y)| LabeledExample::new(x, y).expect("stored points are valid"))
    }

    pub fn num_constraints(&self) -> usize {
        self.points.len()
    }

    pub fn positive_runs(&self) -> usize {
        self.runs
    }

    fn thresholds_feasible(max_neg: Option<f64>, min_pos: Option<f64>) -> bool {
        let hi = min_pos.unwrap_or(1.0).min(1.0);
        max_neg.is_none_or(|m| m < hi)
    }

    pub fn is_empty(&self) -> bool {
        if self.conflict {
            return true;
        }
        match self.family {
            Family::Thresholds => !Self::thresholds_feasible(self.max_neg, self.min_pos),
            Family::Intervals { k } => self.runs > k,
        }
    }

    /// Whether some member of `H_k(S ∪ {(x, y)})` exists.
    pub fn label_feasible(&self, x: f64, y: Label) -> bool {
        if self.is_empty() {
            return false;
        }
        let (pos, neg) = self.feasible_at(x);
        if y.is_pos() {
            pos
        } else {
            neg
        }
    }

    /// Feasibility of `(x, +)` and `(x, -)`.
    fn feasible_at(&self, x: f64) -> (bool, bool) {
        let b = self.blocks.partition_point(|blk| blk.0 <= x);
        let (left_pos, right_pos) = match self.blocks.get(b.wrapping_sub(1)) {
            Some(&(_, hi, y)) if x <= hi => {
                if self.members.contains(&key(x)) {
                    return (y.is_pos(), !y.is_pos());
                }
                (y.is_pos(), y.is_pos())
            }
            left => (left.is_some_and(|l| l.2.is_pos()), self.blocks.get(b).is_some_and(|r| r.2.is_pos())),
        };
        match self.family {
            Family::Thresholds => (
                Self::thresholds_feasible(self.max_neg, Some(self.min_pos.map_or(x, |m| m.min(x)))),
                Self::thresholds_feasible(Some(self.max_neg.map_or(x, |m| m.max(x))), self.min_pos),
            ),
            Family::Intervals { k } => (
                self.runs + usize::from(!left_pos && !right_pos) <= k,
                self.runs + usize::from(left_pos && right_pos) <= k,
            ),
        }
    }

    /// `None` when `x ∈ DIS`, otherwise the unanimous label.
    pub fn classify(&self, x: f64) -> Result<Option<Label>> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        Ok(match self.feasible_at(x) {
            (true, true) => None,
            (true, false) => Some(Label::Pos),
            (false, true) => Some(Label::Neg),
            (false, false) => unreachable!("a nonempty space labels every point"),
        })
    }

    fn cuts(&self) -> Vec<f64> {
        let mut cuts: Vec<f64> = Vec::with_capacity(self.points.len() + 2);
        cuts.push(0.0);
        cuts.extend(self.points.iter().map(|p| p.0));
        cuts.push(1.0);
        cuts.dedup();
        cuts
    }

    /// Open segments between consecutive constraint points on which both
    /// labels remain feasible.
    pub fn dis_region(&self) -> Result<SegmentList> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        let mut out = Vec::new();
        for w in self.cuts().windows(2) {
            let (a, b) = (w[0], w[1]);
            if b > a && self.classify(0.5 * (a + b))?.is_none() {
                out.push((a, b));
            }
        }
        Ok(out)
    }

    pub fn dis_mass(&self) -> Result<f64> {
        Ok(segments::measure(&self.dis_region()?))
    }

    /// Minimal closed intervals around each positive run; for thresholds
    /// the largest consistent `w`.
    pub fn canonical_member(&self) -> Result<Hypothesis> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        match self.family {
            Family::Thresholds => Hypothesis::threshold(self.min_pos.unwrap_or(1.0).min(1.0)),
            Family::Intervals { .. } => {
                let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(self.runs);
                let mut prev = Label::Neg;
                for &(x, y) in &self.points {
                    if y.is_pos() {
                        if prev.is_pos() {
                            pairs.last_mut().expect("run open").1 = x;
                        } else {
                            pairs.push((x, x));
                        }
                    }
                    prev = y;
                }
                Hypothesis::intervals(&pairs)
            }
        }
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        if self.is_empty() {
            return false;
        }
        let fits = match (self.family, h) {
            (Family::Thresholds, Hypothesis::Threshold { .. }) => true,
            (Family::Intervals { k }, Hypothesis::Intervals { intervals }) => intervals.count() <= k,
            _ => false,
        };
        fits && self.points.iter().all(|&(x, y)| h.predict_raw(x) == y)
    }

    pub fn restrict(&self, extra: &[LabeledExample]) -> Self {
        let mut points = self.points.clone();
        points.extend(extra.iter().map(|e| (e.x.get(), e.y)));
        let mut members = self.members.clone();
        members.extend(extra.iter().map(|e| key(e.x.get())));
        Self::from_points(self.family, points, members)
    }

    /// `sup_{h ∈ V} mass({x ∈ region : h(x) != target(x)})`.
    ///
    /// Dynamic program over the atoms (points and open cells) cut by the
    /// constraints, the target's endpoints and the region's endpoints.
    pub fn sup_restricted_disagreement(&self, target: &Hypothesis, region: &[(f64, f64)]) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        let mut cuts = self.cuts();
        cuts.extend(target.breakpoints());
        for &(lo, hi) in region {
            cuts.push(lo.clamp(0.0, 1.0));
            cuts.push(hi.clamp(0.0, 1.0));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        // (forced label, gain if positive, gain if negative)
        let mut atoms: Vec<(Option<Label>, f64, f64)> = Vec::with_capacity(2 * cuts.len());
        for (j, &c) in cuts.iter().enumerate() {
            let idx = self.points.partition_point(|p| p.0 < c);
            let forced = (idx < self.points.len() && self.points[idx].0 == c).then(|| self.points[idx].1);
            atoms.push((forced, 0.0, 0.0));
            if let Some(&next) = cuts.get(j + 1) {
                let mid = 0.5 * (c + next);
                let len = next - c;
                let inside = region.iter().any(|&(lo, hi)| lo <= mid && mid <= hi);
                let t = target.predict_raw(mid);
                let gain = if inside { len } else { 0.0 };
                let (gp, gn) = if t.is_pos() { (0.0, gain) } else { (gain, 0.0) };
                atoms.push((None, gp, gn));
            }
        }

        const NEG_INF: f64 = f64::NEG_INFINITY;
        match self.family {
            Family::Intervals { k } => {
                // best[j][label]: j runs opened so far, current label
                let mut neg = vec![NEG_INF; k + 1];
                let mut pos = vec![NEG_INF; k + 1];
                neg[0] = 0.0;
                for &(forced, gp, gn) in &atoms {
                    let mut nneg = vec![NEG_INF; k + 1];
                    let mut npos = vec![NEG_INF; k + 1];
                    for j in 0..=k {
                        if forced != Some(Label::Pos) {
                            nneg[j] = neg[j].max(pos[j]) + gn;
                        }
                        if forced != Some(Label::Neg) {
                            let from_neg = if j > 0 { neg[j - 1] } else { NEG_INF };
                            npos[j] = pos[j].max(from_neg) + gp;
                        }
                    }
                    neg = nneg;
                    pos = npos;
                }
                Ok(neg.iter().chain(pos.iter()).cloned().fold(0.0, f64::max))
            }
            Family::Thresholds => {
                let (mut neg, mut pos) = (0.0, NEG_INF);
                for &(forced, gp, gn) in &atoms {
                    let nneg = if forced != Some(Label::Pos) { neg + gn } else { NEG_INF };
                    let npos = if forced != Some(Label::Neg) { neg.max(pos) + gp } else { NEG_INF };
                    neg = nneg;
                    pos = npos;
                }
                // every threshold in [0,1] is positive at x = 1
                Ok(pos.max(0.0))
            }
        }
    }
}
