//! Passive learning baseline: label an i.i.d. sample sized by the VC
//! bound and return an empirical risk minimizer.

use crate::bounds::phi;
use crate::error::{domain, Result};
use crate::hypotheses::{Hypothesis, LabeledExample, VersionSpace};
use crate::oracles::OracleBundle;

/// Smallest `m` with `phi(d, m, delta) <= epsilon`. `phi` is decreasing
/// in `m` for `m >= 2`, so a doubling search followed by bisection works.
pub fn passive_sample_size(d: usize, epsilon: f64, delta: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(domain(format!("passive: epsilon must lie in (0,1), got {epsilon}")));
    }
    if phi(d, 1, delta)? <= epsilon {
        return Ok(1);
    }
    let mut hi = 2u64;
    while phi(d, hi, delta)? > epsilon {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: phi(lo) > epsilon >= phi(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if phi(d, mid, delta)? <= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug)]
pub struct PassiveRun {
    pub hypothesis: Hypothesis,
    pub sample: Vec<LabeledExample>,
}

/// Draw `passive_sample_size` points, LABEL every one, return the ERM
/// over `v0`.
pub fn run_passive(v0: &VersionSpace, bundle: &mut OracleBundle, epsilon: f64, delta: f64) -> Result<PassiveRun> {
    let m = passive_sample_size(v0.vc_dim(), epsilon, delta)?;
    let mut sample = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let x = bundle.draw_unlabeled();
        let y = bundle.label_query(x);
        sample.push(LabeledExample { x, y });
    }
    let hypothesis = v0.erm(&sample)?;
    Ok(PassiveRun { hypothesis, sample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{ConstrainedSpace, Family};

    #[test]
    fn sample_size_is_the_first_crossing() {
        for (d, eps) in [(1, 0.1), (2, 0.01), (2, 0.001), (6, 0.05)] {
            let m = passive_sample_size(d, eps, 0.05).unwrap();
            assert!(phi(d, m, 0.05).unwrap() <= eps);
            assert!(phi(d, m - 1, 0.05).unwrap() > eps);
        }
    }

    #[test]
    fn grows_faster_than_tenfold_per_decade() {
        let a = passive_sample_size(2, 1e-2, 0.1).unwrap();
        let b = passive_sample_size(2, 1e-3, 0.1).unwrap();
        assert!(b >= 10 * a, "{a} -> {b}");
    }

    #[test]
    fn realizable_run_is_accurate() {
        let t = Hypothesis::intervals(&[(0.3, 0.5)]).unwrap();
        let mut b = OracleBundle::realizable(t, 11);
        let v0 = VersionSpace::Constrained(ConstrainedSpace::new(Family::Intervals { k: 1 }, &[]));
        let run = run_passive(&v0, &mut b, 0.05, 0.1).unwrap();
        assert_eq!(b.ledger().label_queries, run.sample.len() as u64);
        assert!(b.true_error(&run.hypothesis) <= 0.05);
    }
}
