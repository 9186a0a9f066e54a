use std::sync::Arc;

use super::enumerated::EnumeratedClass;
use super::exact::{ConstrainedSpace, Family};
use super::types::LabeledExample;
use super::version_space::{MaskedSpace, VersionSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Backend {
    /// Unions of at most `k` intervals over the continuum.
    ExactIntervals,
    Enumerated(Arc<EnumeratedClass>),
}

/// `H_0 ⊂ H_1 ⊂ ... ⊂ H_{K_max}` with VC dimensions `d_k`.
#[derive(Clone, Debug)]
pub struct NestedClassSequence {
    backend: Backend,
    k_max: usize,
    class_dims: Vec<usize>,
}

impl NestedClassSequence {
    pub fn exact_intervals(k_max: usize) -> Self {
        Self { backend: Backend::ExactIntervals, k_max, class_dims: (0..=k_max).map(|k| 2 * k).collect() }
    }

    pub fn enumerated(class: Arc<EnumeratedClass>) -> Self {
        let k_max = class.k_max();
        let class_dims = class.dims().to_vec();
        Self { backend: Backend::Enumerated(class), k_max, class_dims }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn class_dims(&self) -> &[usize] {
        &self.class_dims
    }

    pub fn dim(&self, k: usize) -> Result<usize> {
        self.class_dims.get(k).copied().ok_or(Error::UnknownClass(k))
    }

    pub fn enumerated_class(&self) -> Option<&Arc<EnumeratedClass>> {
        match &self.backend {
            Backend::Enumerated(c) => Some(c),
            Backend::ExactIntervals => None,
        }
    }

    /// `H_k(S)`.
    pub fn space(&self, k: usize, s: &[LabeledExample]) -> Result<VersionSpace> {
        if k > self.k_max {
            return Err(Error::UnknownClass(k));
        }
        Ok(match &self.backend {
            Backend::ExactIntervals => VersionSpace::Constrained(ConstrainedSpace::new(Family::Intervals { k }, s)),
            Backend::Enumerated(c) => VersionSpace::Masked(MaskedSpace::constrained(c.clone(), k, s)),
        })
    }

    pub fn is_nonempty(&self, k: usize, s: &[LabeledExample]) -> bool {
        match &self.backend {
            Backend::ExactIntervals => !ConstrainedSpace::new(Family::Intervals { k }, s).is_empty(),
            Backend::Enumerated(c) => {
                let pieces: Vec<_> = s.iter().map(|e| (c.piece_of(e.x.get()), e.y)).collect();
                (0..c.level_end(k)).any(|h| pieces.iter().all(|&(p, y)| c.positive_on_piece(h, p) == y.is_pos()))
            }
        }
    }

    /// Smallest `k >= k_lo` with `H_k(S)` nonempty.
    pub fn min_consistent_index(&self, s: &[LabeledExample], k_lo: usize) -> Result<usize> {
        (k_lo..=self.k_max)
            .find(|&k| self.is_nonempty(k, s))
            .ok_or(Error::Exhausted { k_max: self.k_max })
    }

    /// Smallest `k' > k` with `H_{k'}(S)` nonempty.
    pub fn min_consistent_above(&self, s: &[LabeledExample], k: usize) -> Result<usize> {
        self.min_consistent_index(s, k + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::types::ex;

    #[test]
    fn min_consistent_index_examples() {
        let seq = NestedClassSequence::exact_intervals(5);
        assert_eq!(seq.min_consistent_index(&[ex(0.5, 1)], 0).unwrap(), 1);
        assert_eq!(seq.min_consistent_index(&[], 0).unwrap(), 0);
        let s = [ex(0.2, 1), ex(0.4, -1), ex(0.6, 1)];
        assert_eq!(seq.min_consistent_index(&s, 0).unwrap(), 2);
        assert_eq!(seq.min_consistent_above(&s, 2).unwrap(), 3);
        let shallow = NestedClassSequence::exact_intervals(1);
        assert!(matches!(shallow.min_consistent_index(&s, 0), Err(Error::Exhausted { k_max: 1 })));
    }

    #[test]
    fn backends_agree_on_min_index() {
        let class = Arc::new(EnumeratedClass::interval_unions(11, 3).unwrap());
        let en = NestedClassSequence::enumerated(class);
        let ex_seq = NestedClassSequence::exact_intervals(3);
        let s = [ex(0.1, 1), ex(0.35, -1), ex(0.55, 1), ex(0.75, -1), ex(0.95, 1)];
        assert_eq!(en.min_consistent_index(&s, 0).unwrap(), 3);
        assert_eq!(ex_seq.min_consistent_index(&s, 0).unwrap(), 3);
        assert_eq!(en.dim(3).unwrap(), 6);
    }
}
