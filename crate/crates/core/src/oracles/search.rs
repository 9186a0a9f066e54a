//! Counterexample selection for the SEARCH oracle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hypotheses::{Hypothesis, LabeledExample, VersionSpace};

/// Which valid counterexample SEARCH returns when several exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPolicy {
    /// First valid point of the ascending sweep.
    #[default]
    FirstSweep,
    /// Uniform over the valid region (uniform over valid points when the
    /// region has zero measure).
    UniformRandomValid,
    /// Valid point closest to the disagreement region.
    AdversarialBoundary,
}

/// Resolution of the fallback grid tried after the sweep.
pub const FALLBACK_GRID: usize = 1000;

/// Every point where a member of `v` or the target can change prediction,
/// together with `0` and `1`, sorted and deduplicated.
pub fn sweep_cuts(v: &VersionSpace, target: &Hypothesis) -> Vec<f64> {
    let mut cuts = v.boundaries();
    cuts.extend(target.breakpoints());
    cuts.extend([0.0, 1.0]);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Cut points interleaved with the midpoints between them, ascending.
pub fn sweep_candidates(cuts: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * cuts.len());
    for (j, &c) in cuts.iter().enumerate() {
        out.push(c);
        if let Some(&next) = cuts.get(j + 1) {
            out.push(0.5 * (c + next));
        }
    }
    out
}

fn fallback_grid() -> impl Iterator<Item = f64> {
    (0..=FALLBACK_GRID).map(|i| i as f64 / FALLBACK_GRID as f64)
}

/// `x` is a systematic mistake of `v`: every member predicts `-h*(x)`.
pub fn is_counterexample(v: &VersionSpace, target: &Hypothesis, x: f64) -> Result<bool> {
    Ok(matches!(v.classify(x)?, Some(l) if l != target.predict_raw(x)))
}

/// Definitional check that no member of `v` predicts `e.y` at `e.x` and
/// that `e.y` is the target's label. Independent of cached disagreement
/// counts: survivors are evaluated one by one.
pub fn check_counterexample(v: &VersionSpace, target: &Hypothesis, e: &LabeledExample) -> bool {
    let x = e.x.get();
    if target.predict_raw(x) != e.y {
        return false;
    }
    match v {
        VersionSpace::Constrained(c) => !c.label_feasible(x, e.y),
        VersionSpace::Masked(m) => m.survivors().iter().all(|&h| m.class().predict(h as usize, x) != e.y),
    }
}

fn labeled(target: &Hypothesis, x: f64) -> LabeledExample {
    LabeledExample::new(x, target.predict_raw(x)).expect("candidates lie in [0,1]")
}

/// SEARCH response under `policy`. `None` is ⊥. On an empty version space
/// the first sweep candidate is returned with its target label.
pub fn find_counterexample<R: Rng>(
    v: &VersionSpace,
    target: &Hypothesis,
    policy: SearchPolicy,
    rng: &mut R,
) -> Result<Option<LabeledExample>> {
    let cuts = sweep_cuts(v, target);
    if v.is_empty() {
        return Ok(Some(labeled(target, cuts[0])));
    }
    match policy {
        SearchPolicy::FirstSweep => {
            for x in sweep_candidates(&cuts).into_iter().chain(fallback_grid()) {
                if is_counterexample(v, target, x)? {
                    return Ok(Some(labeled(target, x)));
                }
            }
            Ok(None)
        }
        SearchPolicy::UniformRandomValid => {
            let (segs, points) = valid_parts(v, target, &cuts)?;
            let total: f64 = segs.iter().map(|(a, b)| b - a).sum();
            if total > 0.0 {
                let mut pick = rng.gen::<f64>() * total;
                for &(a, b) in &segs {
                    if pick <= b - a {
                        let mut u: f64 = rng.gen();
                        while u == 0.0 {
                            u = rng.gen();
                        }
                        return Ok(Some(labeled(target, a + u * (b - a))));
                    }
                    pick -= b - a;
                }
                let &(a, b) = segs.last().expect("positive total length");
                return Ok(Some(labeled(target, 0.5 * (a + b))));
            }
            if !points.is_empty() {
                let i = rng.gen_range(0..points.len());
                return Ok(Some(labeled(target, points[i])));
            }
            first_on_fallback(v, target)
        }
        SearchPolicy::AdversarialBoundary => {
            let (segs, points) = valid_parts(v, target, &cuts)?;
            let dis = v.dis_region()?;
            let dist = |x: f64| -> f64 {
                dis.iter()
                    .map(|&(lo, hi)| if x < lo { lo - x } else if x > hi { x - hi } else { 0.0 })
                    .fold(f64::INFINITY, f64::min)
            };
            let mut cands: Vec<f64> = Vec::new();
            for &(a, b) in &segs {
                let inset = (b - a) * 1e-6;
                cands.push(a + inset);
                cands.push(b - inset);
            }
            cands.extend(points);
            let mut best: Option<(f64, f64)> = None;
            for x in cands {
                if !is_counterexample(v, target, x)? {
                    continue;
                }
                let d = dist(x);
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((x, d));
                }
            }
            match best {
                Some((x, _)) => Ok(Some(labeled(target, x))),
                None => first_on_fallback(v, target),
            }
        }
    }
}

fn first_on_fallback(v: &VersionSpace, target: &Hypothesis) -> Result<Option<LabeledExample>> {
    for x in fallback_grid() {
        if is_counterexample(v, target, x)? {
            return Ok(Some(labeled(target, x)));
        }
    }
    Ok(None)
}

/// Valid open segments between consecutive cuts, and valid cut points.
fn valid_parts(v: &VersionSpace, target: &Hypothesis, cuts: &[f64]) -> Result<(Vec<(f64, f64)>, Vec<f64>)> {
    let mut segs = Vec::new();
    let mut points = Vec::new();
    for (j, &c) in cuts.iter().enumerate() {
        if is_counterexample(v, target, c)? {
            points.push(c);
        }
        if let Some(&next) = cuts.get(j + 1) {
            if next > c && is_counterexample(v, target, 0.5 * (c + next))? {
                segs.push((c, next));
            }
        }
    }
    Ok((segs, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{ex, ConstrainedSpace, EnumeratedClass, Family, Label, MaskedSpace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn all_policies() -> [SearchPolicy; 3] {
        [SearchPolicy::FirstSweep, SearchPolicy::UniformRandomValid, SearchPolicy::AdversarialBoundary]
    }

    #[test]
    fn always_negative_space_finds_target_interval() {
        let target = Hypothesis::intervals(&[(0.3, 0.6)]).unwrap();
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Intervals { k: 0 }, &[]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in all_policies() {
            let e = find_counterexample(&v, &target, p, &mut rng).unwrap().unwrap();
            assert_eq!(e.y, Label::Pos);
            assert!((0.3..=0.6).contains(&e.x.get()), "{p:?} {e:?}");
            assert!(check_counterexample(&v, &target, &e));
        }
    }

    #[test]
    fn target_in_space_gives_bottom() {
        let class = Arc::new(EnumeratedClass::interval_unions(11, 2).unwrap());
        let target = Hypothesis::intervals(&[(0.2, 0.4)]).unwrap();
        let v = VersionSpace::Masked(MaskedSpace::full(class, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in all_policies() {
            assert_eq!(find_counterexample(&v, &target, p, &mut rng).unwrap(), None);
        }
    }

    #[test]
    fn binary_search_space_returns_negative_right_of_x() {
        let target = Hypothesis::threshold(0.8).unwrap();
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(0.4, 1)]));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in all_policies() {
            let e = find_counterexample(&v, &target, p, &mut rng).unwrap().unwrap();
            assert_eq!(e.y, Label::Neg);
            assert!(e.x.get() >= 0.4 && e.x.get() < 0.8, "{p:?} {e:?}");
        }
    }

    #[test]
    fn empty_space_still_answers() {
        let target = Hypothesis::threshold(0.5).unwrap();
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(0.4, 1), ex(0.6, -1)]));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let e = find_counterexample(&v, &target, SearchPolicy::FirstSweep, &mut rng).unwrap().unwrap();
        assert_eq!(e.y, target.predict(e.x));
    }
}
