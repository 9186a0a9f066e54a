//! Finite hypothesis classes whose members are unions of closed intervals
//! with endpoints on a fixed breakpoint grid.
//!
//! The line is cut into *pieces*: breakpoint `j` is piece `2j`, the open
//! cell `(b_j, b_{j+1})` is piece `2j+1`. Every member is constant on each
//! piece, so predictions, empirical errors and disagreement regions all
//! reduce to integer work over at most `2G-1` pieces.

use serde::{Deserialize, Serialize};

use super::hypothesis::Hypothesis;
use super::segments::SegmentList;
use super::types::{Label, LabeledExample};
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Thresholds,
    Intervals,
}

#[derive(Clone, Debug)]
pub struct EnumeratedClass {
    kind: ClassKind,
    breakpoints: Vec<f64>,
    piece_len: Vec<f64>,
    spans: Vec<(u16, u16)>,
    offsets: Vec<u32>,
    level_ends: Vec<usize>,
    dims: Vec<usize>,
}

fn uniform_grid(resolution: usize) -> Result<Vec<f64>> {
    if resolution < 2 || resolution > u16::MAX as usize {
        return Err(domain(format!("grid resolution must lie in [2, 65535], got {resolution}")));
    }
    let last = (resolution - 1) as f64;
    Ok((0..resolution).map(|j| j as f64 / last).collect())
}

/// Members of `interval_unions(resolution, k_max)`: `sum_k C(G+k, 2k)`,
/// since shifting `b_i` by `i` and `a_i` by `i-1` makes the endpoints a
/// strictly increasing `2k`-subset of `G+k` slots.
pub fn interval_union_count(resolution: usize, k_max: usize) -> u128 {
    fn binom(n: u128, r: u128) -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
    }
    let g = resolution as u128;
    (0..=k_max as u128).map(|k| binom(g + k, 2 * k)).fold(0u128, u128::saturating_add)
}

/// All sorted `k`-tuples of disjoint spans `a_1 <= b_1 < a_2 <= b_2 < ...`
/// with indices in `start..g`, in lexicographic order.
fn push_unions(g: usize, k: usize, start: usize, prefix: &mut Vec<(u16, u16)>, out: &mut Vec<Vec<(u16, u16)>>) {
    if k == 0 {
        out.push(prefix.clone());
        return;
    }
    for a in start..g {
        for b in a..g {
            prefix.push((a as u16, b as u16));
            push_unions(g, k - 1, b + 1, prefix, out);
            prefix.pop();
        }
    }
}

impl EnumeratedClass {
    fn build(kind: ClassKind, breakpoints: Vec<f64>, levels: Vec<Vec<Vec<(u16, u16)>>>, dims: Vec<usize>) -> Self {
        let mut piece_len = Vec::with_capacity(2 * breakpoints.len() - 1);
        for (j, &b) in breakpoints.iter().enumerate() {
            piece_len.push(0.0);
            if let Some(&next) = breakpoints.get(j + 1) {
                piece_len.push(next - b);
            }
        }
        let mut spans = Vec::new();
        let mut offsets = vec![0u32];
        let mut level_ends = Vec::with_capacity(levels.len());
        for level in levels {
            for h in level {
                spans.extend(h);
                offsets.push(spans.len() as u32);
            }
            level_ends.push(offsets.len() - 1);
        }
        Self { kind, breakpoints, piece_len, spans, offsets, level_ends, dims }
    }

    /// Thresholds `h_w`, `w` on a uniform grid of `resolution` points.
    pub fn thresholds(resolution: usize) -> Result<Self> {
        let bp = uniform_grid(resolution)?;
        let g = bp.len() as u16;
        let level = (0..g).map(|j| vec![(j, g - 1)]).collect();
        Ok(Self::build(ClassKind::Thresholds, bp, vec![level], vec![1]))
    }

    /// Thresholds at the given positions; canonical index follows input order.
    pub fn thresholds_at(ws: &[f64]) -> Result<Self> {
        if ws.is_empty() {
            return Err(domain("threshold list is empty"));
        }
        let mut bp: Vec<f64> = ws.to_vec();
        bp.extend([0.0, 1.0]);
        if bp.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(domain("thresholds must lie in [0,1]"));
        }
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        let g = bp.len() as u16;
        let level = ws
            .iter()
            .map(|w| {
                let j = bp.partition_point(|b| b < w) as u16;
                vec![(j, g - 1)]
            })
            .collect();
        Ok(Self::build(ClassKind::Thresholds, bp, vec![level], vec![1]))
    }

    /// Nested unions of at most `k` intervals for `k = 0..=k_max`, endpoints on a
    /// uniform grid. Level `k` lists the unions of exactly `k` intervals, so
    /// `H_k` is the prefix of indices below `level_end(k)`.
    pub fn interval_unions(resolution: usize, k_max: usize) -> Result<Self> {
        let bp = uniform_grid(resolution)?;
        let g = bp.len();
        let mut levels = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let mut level = Vec::new();
            push_unions(g, k, 0, &mut Vec::with_capacity(k), &mut level);
            if level.is_empty() {
                return Err(domain(format!("grid of {g} points cannot hold {k} disjoint intervals")));
            }
            levels.push(level);
        }
        let dims = (0..=k_max).map(|k| 2 * k).collect();
        Ok(Self::build(ClassKind::Intervals, bp, levels, dims))
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k_max(&self) -> usize {
        self.level_ends.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// One past the last index belonging to `H_k`.
    pub fn level_end(&self, k: usize) -> usize {
        self.level_ends[k.min(self.k_max())]
    }

    pub fn num_pieces(&self) -> usize {
        self.piece_len.len()
    }

    pub fn piece_len(&self) -> &[f64] {
        &self.piece_len
    }

    pub fn piece_of(&self, x: f64) -> usize {
        let j = self.breakpoints.partition_point(|&b| b < x);
        if j < self.breakpoints.len() && self.breakpoints[j] == x {
            2 * j
        } else {
            2 * j - 1
        }
    }

    /// Any point inside piece `p`.
    pub fn piece_point(&self, p: usize) -> f64 {
        let j = p / 2;
        if p.is_multiple_of(2) {
            self.breakpoints[j]
        } else {
            0.5 * (self.breakpoints[j] + self.breakpoints[j + 1])
        }
    }

    pub fn spans(&self, h: usize) -> &[(u16, u16)] {
        &self.spans[self.offsets[h] as usize..self.offsets[h + 1] as usize]
    }

    pub fn positive_on_piece(&self, h: usize, p: usize) -> bool {
        self.spans(h).iter().any(|&(a, b)| 2 * a as usize <= p && p <= 2 * b as usize)
    }

    pub fn predict(&self, h: usize, x: f64) -> Label {
        Label::from_bool(self.positive_on_piece(h, self.piece_of(x)))
    }

    pub fn positive_set(&self, h: usize) -> SegmentList {
        self.spans(h)
            .iter()
            .map(|&(a, b)| (self.breakpoints[a as usize], self.breakpoints[b as usize]))
            .collect()
    }

    pub fn hypothesis(&self, h: usize) -> Hypothesis {
        match self.kind {
            ClassKind::Thresholds => Hypothesis::Threshold { w: self.breakpoints[self.spans(h)[0].0 as usize] },
            ClassKind::Intervals => {
                Hypothesis::intervals(&self.positive_set(h)).expect("class members are valid unions")
            }
        }
    }

    /// Smallest level whose prefix contains `h`.
    pub fn level_of(&self, h: usize) -> usize {
        self.level_ends.partition_point(|&end| end <= h)
    }

    /// Indices of `H_k` consistent with every example in `s`.
    pub fn consistent(&self, k: usize, s: &[LabeledExample]) -> Vec<u32> {
        let pieces: Vec<(usize, Label)> = s.iter().map(|e| (self.piece_of(e.x.get()), e.y)).collect();
        (0..self.level_end(k))
            .filter(|&h| pieces.iter().all(|&(p, y)| self.positive_on_piece(h, p) == y.is_pos()))
            .map(|h| h as u32)
            .collect()
    }

    /// Number of members of `survivors` positive on each piece.
    pub fn positive_counts(&self, survivors: &[u32]) -> Vec<u32> {
        let n = self.num_pieces();
        let mut diff = vec![0i64; n + 1];
        for &h in survivors {
            for &(a, b) in self.spans(h as usize) {
                diff[2 * a as usize] += 1;
                diff[2 * b as usize + 1] -= 1;
            }
        }
        let mut acc = 0i64;
        diff[..n]
            .iter()
            .map(|d| {
                acc += d;
                acc as u32
            })
            .collect()
    }

    /// Measure of `target ∩ [0, b_j]` for each breakpoint `j`.
    fn target_prefix_mass(&self, target: &[(f64, f64)]) -> Vec<f64> {
        self.breakpoints
            .iter()
            .map(|&t| target.iter().map(|&(lo, hi)| (hi.min(t) - lo).max(0.0)).sum())
            .collect()
    }

    /// Measure of `h Δ target` for every member, in index order.
    pub fn distances_to(&self, target: &Hypothesis) -> Vec<f64> {
        let tset = target.positive_set();
        let t_mass: f64 = tset.iter().map(|&(lo, hi)| hi - lo).sum();
        let prefix = self.target_prefix_mass(&tset);
        (0..self.len())
            .map(|h| {
                let mut own = 0.0;
                let mut inter = 0.0;
                for &(a, b) in self.spans(h) {
                    let (a, b) = (a as usize, b as usize);
                    own += self.breakpoints[b] - self.breakpoints[a];
                    inter += prefix[b] - prefix[a];
                }
                (own + t_mass - 2.0 * inter).max(0.0)
            })
            .collect()
    }

    /// Measure of `h Δ g` for two members.
    pub fn pair_distance(&self, h: usize, g: usize) -> f64 {
        let mass = |s: &[(u16, u16)]| -> f64 {
            s.iter().map(|&(a, b)| self.breakpoints[b as usize] - self.breakpoints[a as usize]).sum()
        };
        let (sh, sg) = (self.spans(h), self.spans(g));
        let mut inter = 0.0;
        for &(a, b) in sh {
            for &(c, d) in sg {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    inter += self.breakpoints[hi as usize] - self.breakpoints[lo as usize];
                }
            }
        }
        (mass(sh) + mass(sg) - 2.0 * inter).max(0.0)
    }
}

/// Per-piece label counts of a labeled sample, with prefix sums so the
/// empirical error count of any member costs `O(#intervals)`.
#[derive(Clone, Debug)]
pub struct PieceTally {
    pos: Vec<u32>,
    neg: Vec<u32>,
    prefix: Vec<i64>,
    total_pos: u64,
    n: u64,
}

impl PieceTally {
    pub fn new(class: &EnumeratedClass) -> Self {
        let p = class.num_pieces();
        Self { pos: vec![0; p], neg: vec![0; p], prefix: vec![0; p + 1], total_pos: 0, n: 0 }
    }

    pub fn from_examples<'a, I>(class: &EnumeratedClass, examples: I) -> Self
    where
        I: IntoIterator<Item = &'a LabeledExample>,
    {
        let mut t = Self::new(class);
        for e in examples {
            t.count(class.piece_of(e.x.get()), e.y);
        }
        t.rebuild();
        t
    }

    fn count(&mut self, piece: usize, y: Label) {
        if y.is_pos() {
            self.pos[piece] += 1;
            self.total_pos += 1;
        } else {
            self.neg[piece] += 1;
        }
        self.n += 1;
    }

    fn rebuild(&mut self) {
        for p in 0..self.pos.len() {
            self.prefix[p + 1] = self.prefix[p] + self.neg[p] as i64 - self.pos[p] as i64;
        }
    }

    pub fn push(&mut self, piece: usize, y: Label) {
        self.count(piece, y);
        let delta = if y.is_pos() { -1 } else { 1 };
        for v in &mut self.prefix[piece + 1..] {
            *v += delta;
        }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of sample points member `h` mislabels.
    pub fn err_count(&self, class: &EnumeratedClass, h: usize) -> u64 {
        let mut e = self.total_pos as i64;
        for &(a, b) in class.spans(h) {
            e += self.prefix[2 * b as usize + 1] - self.prefix[2 * a as usize];
        }
        e as u64
    }

    /// Minimum error count over each `H_k`, `k = 0..=k_max`, for an interval
    /// family. Entry `k` is nonincreasing in `k`.
    pub fn min_err_by_level(&self, class: &EnumeratedClass) -> Vec<u64> {
        match class.kind() {
            ClassKind::Intervals => self.min_err_dp(class.k_max()),
            ClassKind::Thresholds => {
                let best = (0..class.len()).map(|h| self.err_count(class, h)).min().unwrap_or(0);
                vec![best]
            }
        }
    }

    // Runs of positive pieces start and end on breakpoint pieces; consecutive
    // runs are separated by at least one cell.
    fn min_err_dp(&self, k_max: usize) -> Vec<u64> {
        const INF: i64 = i64::MAX / 4;
        let np = self.pos.len();
        let mut out = vec![INF; k_max + 1];
        let mut dp_in = vec![INF; k_max + 1];
        out[0] = 0;
        for p in 0..np {
            let w = self.neg[p] as i64 - self.pos[p] as i64;
            let even = p % 2 == 0;
            let prev_even = p > 0 && (p - 1) % 2 == 0;
            let mut new_in = vec![INF; k_max + 1];
            let mut new_out = vec![INF; k_max + 1];
            for j in 0..=k_max {
                let mut best_in = dp_in[j];
                if even && j > 0 {
                    best_in = best_in.min(out[j - 1]);
                }
                if best_in < INF {
                    new_in[j] = best_in + w;
                }
                let mut best_out = out[j];
                if prev_even {
                    best_out = best_out.min(dp_in[j]);
                }
                new_out[j] = best_out;
            }
            dp_in = new_in;
            out = new_out;
        }
        let mut res = Vec::with_capacity(k_max + 1);
        let mut running = INF;
        for j in 0..=k_max {
            // the last piece is a breakpoint, so an open run may end there
            running = running.min(out[j]).min(dp_in[j]);
            res.push((self.total_pos as i64 + running) as u64);
        }
        res
    }
}
