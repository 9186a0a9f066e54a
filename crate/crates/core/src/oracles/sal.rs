use super::bundle::OracleBundle;
use crate::error::Result;
use crate::hypotheses::{Label, LabeledExample, Point, VersionSpace};

/// One selective-sampling draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SalDraw {
    pub x: Point,
    pub y: Label,
    pub queried: bool,
}

impl SalDraw {
    pub fn example(&self) -> LabeledExample {
        LabeledExample { x: self.x, y: self.y }
    }
}

/// Draw `x`; query LABEL inside `DIS(V)` (bumping `c`), otherwise infer
/// the unanimous label. Appends the example to `l`.
pub fn sal_step(
    v: &VersionSpace,
    bundle: &mut OracleBundle,
    l: &mut Vec<LabeledExample>,
    c: &mut u64,
) -> Result<SalDraw> {
    let draw = sal_draw(v, bundle)?;
    if draw.queried {
        *c += 1;
    }
    l.push(draw.example());
    Ok(draw)
}

/// The draw of `sal_step` without touching a dataset.
pub fn sal_draw(v: &VersionSpace, bundle: &mut OracleBundle) -> Result<SalDraw> {
    let x = bundle.draw_unlabeled();
    Ok(match v.classify(x.get())? {
        None => SalDraw { x, y: bundle.label_query(x), queried: true },
        Some(y) => SalDraw { x, y, queried: false },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{ex, ConstrainedSpace, Family, Hypothesis};

    #[test]
    fn singleton_never_queries() {
        let t = Hypothesis::threshold(0.5).unwrap();
        let mut b = OracleBundle::realizable(t, 3);
        let v = VersionSpace::Constrained(ConstrainedSpace::new(
            Family::Thresholds,
            &[ex(0.5 - 1e-15, -1), ex(0.5, 1)],
        ));
        let (mut l, mut c) = (Vec::new(), 0);
        for _ in 0..100 {
            sal_step(&v, &mut b, &mut l, &mut c).unwrap();
        }
        assert_eq!(c, 0);
        assert_eq!(b.ledger().label_queries, 0);
        assert_eq!(l.len(), 100);
    }

    #[test]
    fn full_disagreement_always_queries() {
        let t = Hypothesis::intervals(&[(0.2, 0.3)]).unwrap();
        let mut b = OracleBundle::realizable(t, 4);
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Intervals { k: 1 }, &[]));
        let (mut l, mut c) = (Vec::new(), 0);
        for _ in 0..200 {
            sal_step(&v, &mut b, &mut l, &mut c).unwrap();
        }
        assert_eq!(c, 200);
    }

    #[test]
    fn query_fraction_tracks_dis_mass() {
        let t = Hypothesis::threshold(0.5).unwrap();
        let mut b = OracleBundle::realizable(t, 5);
        let v = VersionSpace::Constrained(ConstrainedSpace::new(Family::Thresholds, &[ex(0.3, -1), ex(0.7, 1)]));
        let (mut l, mut c) = (Vec::new(), 0);
        for _ in 0..10_000 {
            sal_step(&v, &mut b, &mut l, &mut c).unwrap();
        }
        let frac = c as f64 / 10_000.0;
        assert!((frac - 0.4).abs() <= 0.02, "frac={frac}");
    }
}
