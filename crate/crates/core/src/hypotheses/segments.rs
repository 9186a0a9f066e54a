//! Lebesgue-measure algebra on finite unions of intervals in `[0,1]`.
//!
//! Endpoints are irrelevant to measure, so every set is handled as a
//! sorted list of `(lo, hi)` pairs and combined by sweeping the
//! elementary segments between all endpoints.

/// Sorted, pairwise-disjoint `(lo, hi)` pairs.
pub type SegmentList = Vec<(f64, f64)>;

fn covers(set: &[(f64, f64)], x: f64) -> bool {
    // set is sorted; find the last segment starting at or before x
    let idx = set.partition_point(|&(lo, _)| lo <= x);
    idx > 0 && {
        let (lo, hi) = set[idx - 1];
        lo <= x && x <= hi
    }
}

/// Elementary segments of `[0,1]` cut at every endpoint of every set,
/// kept when `keep` accepts the membership vector of the midpoint.
pub fn combine<F>(sets: &[&[(f64, f64)]], keep: F) -> SegmentList
where
    F: Fn(&[bool]) -> bool,
{
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for set in sets {
        for &(lo, hi) in set.iter() {
            cuts.push(lo.clamp(0.0, 1.0));
            cuts.push(hi.clamp(0.0, 1.0));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut out: SegmentList = Vec::new();
    let mut member = vec![false; sets.len()];
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        for (slot, set) in member.iter_mut().zip(sets) {
            *slot = covers(set, mid);
        }
        if keep(&member) {
            match out.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => out.push((a, b)),
            }
        }
    }
    out
}

pub fn measure(set: &[(f64, f64)]) -> f64 {
    set.iter().map(|&(lo, hi)| (hi - lo).max(0.0)).sum()
}

pub fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> SegmentList {
    combine(&[a, b], |m| m[0] && m[1])
}

pub fn symmetric_difference(a: &[(f64, f64)], b: &[(f64, f64)]) -> SegmentList {
    combine(&[a, b], |m| m[0] != m[1])
}

pub fn complement(a: &[(f64, f64)]) -> SegmentList {
    combine(&[a], |m| !m[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_difference_of_thresholds() {
        let d = symmetric_difference(&[(0.3, 1.0)], &[(0.5, 1.0)]);
        assert_eq!(d.len(), 1);
        assert!((measure(&d) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn adjacent_segments_merge() {
        let u = combine(&[&[(0.1, 0.2)], &[(0.2, 0.4)]], |m| m[0] || m[1]);
        assert_eq!(u, vec![(0.1, 0.4)]);
    }

    #[test]
    fn complement_of_empty_is_unit() {
        assert_eq!(complement(&[]), vec![(0.0, 1.0)]);
        assert!((measure(&complement(&[(0.25, 0.5)])) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn intersect_disjoint_is_empty() {
        assert!(intersect(&[(0.0, 0.1)], &[(0.2, 0.3)]).is_empty());
    }
}
