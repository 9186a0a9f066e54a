use crate::error::{domain, Error, Result};
use crate::hypotheses::{ex, ConstrainedSpace, Family, Hypothesis, Label, VersionSpace};
use crate::oracles::{OracleBundle, QueryLedger};

/// Learn a threshold with SEARCH alone. Each round asks for a mistake of
/// `V_x = {h_w : w <= x}` at the midpoint `x` of the surviving bracket
/// `(lo, hi]`: ⊥ means `w* <= x`, a negative counterexample `x0` means
/// `w* > x0`. Returns `h_hi` once `hi - lo <= epsilon`.
pub fn run_binary_search_demo(bundle: &mut OracleBundle, epsilon: f64) -> Result<(Hypothesis, QueryLedger)> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(domain(format!("binary search: epsilon must lie in (0,1], got {epsilon}")));
    }
    if !matches!(bundle.target(), Hypothesis::Threshold { .. }) {
        return Err(Error::Contract("binary search requires a threshold target".into()));
    }
    bundle.require_realizable("binary search")?;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > epsilon {
        let x = 0.5 * (lo + hi);
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(x, 1)]));
        match bundle.search_query(1, &v)? {
            None => hi = x,
            Some(e) if e.y == Label::Neg && e.x.get() >= x && e.x.get() < hi => lo = e.x.get(),
            Some(e) => {
                return Err(Error::Contract(format!("SEARCH answered {e:?} to V_x at x={x}, which is not a mistake")))
            }
        }
    }
    Ok((Hypothesis::threshold(hi)?, *bundle.ledger()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::SearchPolicy;

    #[test]
    fn halving_meets_epsilon() {
        let eps = 2f64.powi(-10);
        let target = Hypothesis::threshold(0.37).unwrap();
        for policy in [SearchPolicy::FirstSweep, SearchPolicy::UniformRandomValid, SearchPolicy::AdversarialBoundary] {
            let mut b = OracleBundle::realizable(target.clone(), 11).with_policy(policy).with_search_checks(true);
            let (h, ledger) = run_binary_search_demo(&mut b, eps).unwrap();
            assert!(b.true_error(&h) <= eps, "{policy:?}");
            assert!(ledger.search_queries <= 12, "{policy:?}: {}", ledger.search_queries);
            assert_eq!(ledger.label_queries, 0);
            assert_eq!(b.unsound_search_responses(), 0);
        }
    }

    #[test]
    fn trivial_epsilon_needs_no_queries() {
        let mut b = OracleBundle::realizable(Hypothesis::threshold(0.8).unwrap(), 0);
        let (_, ledger) = run_binary_search_demo(&mut b, 1.0).unwrap();
        assert_eq!(ledger.search_queries, 0);
    }

    #[test]
    fn rejects_interval_targets() {
        let mut b = OracleBundle::realizable(Hypothesis::intervals(&[(0.1, 0.2)]).unwrap(), 0);
        assert!(run_binary_search_demo(&mut b, 0.1).is_err());
    }
}
