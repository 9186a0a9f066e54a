use std::sync::Arc;

use super::enumerated::{EnumeratedClass, PieceTally};
use super::exact::ConstrainedSpace;
use super::hypothesis::{restricted_disagreement, Hypothesis};
use super::segments::SegmentList;
use super::types::{Label, LabeledExample};
use crate::error::{Error, Result};

/// Survivors of an enumerated class, with per-piece positive counts cached
/// so disagreement queries are `O(log G)`.
#[derive(Clone, Debug)]
pub struct MaskedSpace {
    class: Arc<EnumeratedClass>,
    k: usize,
    survivors: Vec<u32>,
    pos_counts: Vec<u32>,
}

impl MaskedSpace {
    /// `survivors` must be sorted ascending and lie inside `H_k`.
    pub fn new(class: Arc<EnumeratedClass>, k: usize, survivors: Vec<u32>) -> Self {
        debug_assert!(survivors.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(survivors.last().is_none_or(|&h| (h as usize) < class.level_end(k)));
        let pos_counts = class.positive_counts(&survivors);
        Self { class, k, survivors, pos_counts }
    }

    /// `H_k(S)`.
    pub fn constrained(class: Arc<EnumeratedClass>, k: usize, s: &[LabeledExample]) -> Self {
        let survivors = class.consistent(k, s);
        Self::new(class, k, survivors)
    }

    pub fn full(class: Arc<EnumeratedClass>, k: usize) -> Self {
        let survivors = (0..class.level_end(k) as u32).collect();
        Self::new(class, k, survivors)
    }

    pub fn class(&self) -> &Arc<EnumeratedClass> {
        &self.class
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn survivors(&self) -> &[u32] {
        &self.survivors
    }

    pub fn len(&self) -> usize {
        self.survivors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.survivors.is_empty()
    }

    pub fn contains_index(&self, h: usize) -> bool {
        self.survivors.binary_search(&(h as u32)).is_ok()
    }

    pub fn retain<F: FnMut(u32) -> bool>(&self, mut keep: F) -> Self {
        let survivors = self.survivors.iter().copied().filter(|&h| keep(h)).collect();
        Self::new(self.class.clone(), self.k, survivors)
    }

    pub fn is_subset_of(&self, other: &MaskedSpace) -> bool {
        self.survivors.iter().all(|&h| other.survivors.binary_search(&h).is_ok())
    }

    fn classify_piece(&self, p: usize) -> Option<Label> {
        let c = self.pos_counts[p] as usize;
        if c == 0 {
            Some(Label::Neg)
        } else if c == self.survivors.len() {
            Some(Label::Pos)
        } else {
            None
        }
    }

    pub fn classify(&self, x: f64) -> Result<Option<Label>> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        Ok(self.classify_piece(self.class.piece_of(x)))
    }

    pub fn dis_region(&self) -> Result<SegmentList> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        let bp = self.class.breakpoints();
        let mut out: SegmentList = Vec::new();
        for j in 0..bp.len() - 1 {
            if self.classify_piece(2 * j + 1).is_none() {
                match out.last_mut() {
                    Some(last) if last.1 == bp[j] => last.1 = bp[j + 1],
                    _ => out.push((bp[j], bp[j + 1])),
                }
            }
        }
        Ok(out)
    }

    pub fn dis_mass(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        let len = self.class.piece_len();
        Ok((0..len.len()).filter(|&p| self.classify_piece(p).is_none()).map(|p| len[p]).sum())
    }

    /// Lowest-index survivor minimizing the tallied error count, with the count.
    pub fn erm_tally(&self, tally: &PieceTally) -> Result<(usize, u64)> {
        let mut best: Option<(usize, u64)> = None;
        for &h in &self.survivors {
            let e = tally.err_count(&self.class, h as usize);
            if best.is_none_or(|(_, b)| e < b) {
                best = Some((h as usize, e));
            }
        }
        best.ok_or(Error::EmptyVersionSpace)
    }

    pub fn min_err_count(&self, tally: &PieceTally) -> Result<u64> {
        self.erm_tally(tally).map(|(_, e)| e)
    }
}

/// A version space under either backend.
#[derive(Clone, Debug)]
pub enum VersionSpace {
    Constrained(ConstrainedSpace),
    Masked(MaskedSpace),
}

impl VersionSpace {
    pub fn is_empty(&self) -> bool {
        match self {
            VersionSpace::Constrained(c) => c.is_empty(),
            VersionSpace::Masked(m) => m.is_empty(),
        }
    }

    pub fn vc_dim(&self) -> usize {
        match self {
            VersionSpace::Constrained(c) => c.vc_dim(),
            VersionSpace::Masked(m) => m.class().dims()[m.level()],
        }
    }

    /// `None` inside the disagreement region, otherwise the unanimous label.
    pub fn classify(&self, x: f64) -> Result<Option<Label>> {
        match self {
            VersionSpace::Constrained(c) => c.classify(x),
            VersionSpace::Masked(m) => m.classify(x),
        }
    }

    pub fn dis_contains(&self, x: f64) -> Result<bool> {
        Ok(self.classify(x)?.is_none())
    }

    pub fn agreement_label(&self, x: f64) -> Result<Label> {
        self.classify(x)?
            .ok_or_else(|| Error::Contract(format!("agreement label requested at {x}, which lies in DIS")))
    }

    pub fn dis_region(&self) -> Result<SegmentList> {
        match self {
            VersionSpace::Constrained(c) => c.dis_region(),
            VersionSpace::Masked(m) => m.dis_region(),
        }
    }

    pub fn dis_mass(&self) -> Result<f64> {
        match self {
            VersionSpace::Constrained(c) => c.dis_mass(),
            VersionSpace::Masked(m) => m.dis_mass(),
        }
    }

    /// Deterministic member: minimal intervals for the exact backend,
    /// lowest index for the enumerated one.
    pub fn canonical_member(&self) -> Result<Hypothesis> {
        match self {
            VersionSpace::Constrained(c) => c.canonical_member(),
            VersionSpace::Masked(m) => m
                .survivors()
                .first()
                .map(|&h| m.class().hypothesis(h as usize))
                .ok_or(Error::EmptyVersionSpace),
        }
    }

    /// Points at which members may change prediction.
    pub fn boundaries(&self) -> Vec<f64> {
        match self {
            VersionSpace::Constrained(c) => c.constraints().map(|e| e.x.get()).collect(),
            VersionSpace::Masked(m) => m.class().breakpoints().to_vec(),
        }
    }

    /// Empirical risk minimizer over the sample. The exact backend only
    /// supports samples it can fit with zero error.
    pub fn erm(&self, sample: &[LabeledExample]) -> Result<Hypothesis> {
        match self {
            VersionSpace::Constrained(c) => {
                if c.is_empty() {
                    return Err(Error::EmptyVersionSpace);
                }
                let fitted = c.restrict(sample);
                if fitted.is_empty() {
                    return Err(Error::Contract("exact backend ERM requires a consistent sample".into()));
                }
                fitted.canonical_member()
            }
            VersionSpace::Masked(m) => {
                let tally = PieceTally::from_examples(m.class(), sample);
                let (h, _) = m.erm_tally(&tally)?;
                Ok(m.class().hypothesis(h))
            }
        }
    }

    /// `sup_{h ∈ V} mass({x ∈ region : h(x) != target(x)})`.
    pub fn sup_restricted_disagreement(&self, target: &Hypothesis, region: &[(f64, f64)]) -> Result<f64> {
        match self {
            VersionSpace::Constrained(c) => c.sup_restricted_disagreement(target, region),
            VersionSpace::Masked(m) => {
                if m.is_empty() {
                    return Err(Error::EmptyVersionSpace);
                }
                Ok(m.survivors()
                    .iter()
                    .map(|&h| restricted_disagreement(&m.class().hypothesis(h as usize), target, region))
                    .fold(0.0, f64::max))
            }
        }
    }

    /// Members also consistent with `extra`.
    pub fn restrict(&self, extra: &[LabeledExample]) -> VersionSpace {
        match self {
            VersionSpace::Constrained(c) => VersionSpace::Constrained(c.restrict(extra)),
            VersionSpace::Masked(m) => {
                let class = m.class().clone();
                let pieces: Vec<(usize, Label)> = extra.iter().map(|e| (class.piece_of(e.x.get()), e.y)).collect();
                VersionSpace::Masked(
                    m.retain(|h| pieces.iter().all(|&(p, y)| class.positive_on_piece(h as usize, p) == y.is_pos())),
                )
            }
        }
    }

    pub fn as_masked(&self) -> Option<&MaskedSpace> {
        match self {
            VersionSpace::Masked(m) => Some(m),
            VersionSpace::Constrained(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::exact::Family;
    use crate::hypotheses::types::ex;

    #[test]
    fn erm_example() {
        let class = Arc::new(EnumeratedClass::thresholds_at(&[0.25, 0.5, 0.75]).unwrap());
        let v = VersionSpace::Masked(MaskedSpace::full(class.clone(), 0));
        let h = v.erm(&[ex(0.3, 1), ex(0.6, 1), ex(0.1, -1)]).unwrap();
        assert_eq!(h, Hypothesis::threshold(0.25).unwrap());
        assert_eq!(v.erm(&[]).unwrap(), Hypothesis::threshold(0.25).unwrap());
        assert_eq!(v.erm(&[ex(0.6, 1), ex(0.4, -1)]).unwrap(), Hypothesis::threshold(0.5).unwrap());
    }

    #[test]
    fn singleton_has_no_disagreement() {
        let class = Arc::new(EnumeratedClass::thresholds(11).unwrap());
        let m = MaskedSpace::new(class, 0, vec![4]);
        let v = VersionSpace::Masked(m);
        assert_eq!(v.dis_mass().unwrap(), 0.0);
        assert!(v.dis_region().unwrap().is_empty());
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!(!v.dis_contains(x).unwrap());
            assert_eq!(v.agreement_label(x).unwrap(), Label::from_bool(x >= 0.4 - 1e-12));
        }
    }

    #[test]
    fn agreement_label_in_dis_is_a_contract_error() {
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(0.3, -1), ex(0.7, 1)]));
        assert!(matches!(v.agreement_label(0.5), Err(Error::Contract(_))));
        assert_eq!(v.agreement_label(0.9).unwrap(), Label::Pos);
        assert_eq!(v.agreement_label(0.1).unwrap(), Label::Neg);
    }

    #[test]
    fn empty_space_errors() {
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Intervals { k: 0 }, &[ex(0.5, 1)]));
        assert!(v.is_empty());
        assert!(matches!(v.dis_contains(0.2), Err(Error::EmptyVersionSpace)));
        assert!(matches!(v.dis_region(), Err(Error::EmptyVersionSpace)));
    }

    #[test]
    fn masked_threshold_dis_matches_exact() {
        let class = Arc::new(EnumeratedClass::thresholds(101).unwrap());
        let s = [ex(0.3, -1), ex(0.7, 1)];
        let m = MaskedSpace::constrained(class, 0, &s);
        // survivors are w in {0.31, ..., 0.70}
        assert!((m.dis_mass().unwrap() - 0.39).abs() < 1e-9);
        assert_eq!(m.classify(0.5).unwrap(), None);
        assert_eq!(m.classify(0.2).unwrap(), Some(Label::Neg));
    }
}
