//! Reference oracle: random small instances checked against exhaustive
//! enumeration and the definition of each quantity.
//!
//! Exact spaces are checked through a naive realizability test (sort, count
//! positive runs) at every point of a 10^4-point grid. Enumerated spaces are
//! checked member by member on an 11-point breakpoint grid with `K_max = 3`
//! (3785 hypotheses). The two backends are compared on the fine grid away
//! from constraint points, where a coarse grid cannot resolve endpoints.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::anytime::prune_version_space;
use crate::bounds::sigma;
use crate::error::Result;
use crate::hypotheses::{
    ConstrainedSpace, EnumeratedClass, Family, Hypothesis, Label, LabeledExample, MaskedSpace, NestedClassSequence,
    PieceTally, Point, VersionSpace,
};
use crate::oracles::{find_counterexample, SearchPolicy};

/// SEARCH selection rule under test.
pub type SearchFn =
    dyn Fn(&VersionSpace, &Hypothesis, SearchPolicy, &mut ChaCha8Rng) -> Result<Option<LabeledExample>> + Sync;

const FINE_GRID: usize = 10_000;
const COARSE: usize = 11;
const K_MAX: usize = 3;
const CELL: f64 = 0.1;

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub instance: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BruteforceReport {
    pub instances: usize,
    /// Comparisons performed, by check name.
    pub checks: BTreeMap<String, u64>,
    pub mismatches: Vec<Mismatch>,
}

impl BruteforceReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Mismatch counts by check name.
    pub fn mismatch_counts(&self) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for m in &self.mismatches {
            *out.entry(m.check.clone()).or_insert(0) += 1;
        }
        out
    }
}

/// Run the suite with the production SEARCH oracle.
pub fn validate_against_bruteforce(instances: usize, seed: u64) -> BruteforceReport {
    validate_with_search(instances, seed, &|v, t, p, rng| find_counterexample(v, t, p, rng))
}

/// Run the suite with a caller-supplied SEARCH rule.
pub fn validate_with_search(instances: usize, seed: u64, search: &SearchFn) -> BruteforceReport {
    let world = World::new();
    let parts: Vec<Local> = (0..instances)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let mut local = Local { instance: j, ..Local::default() };
            world.check_instance(j, &mut rng, search, &mut local);
            local
        })
        .collect();
    let mut report = BruteforceReport { instances, ..BruteforceReport::default() };
    for p in parts {
        for (k, n) in p.checks {
            *report.checks.entry(k.to_string()).or_insert(0) += n;
        }
        report.mismatches.extend(p.mismatches);
    }
    report
}

#[derive(Default)]
struct Local {
    instance: usize,
    checks: BTreeMap<&'static str, u64>,
    mismatches: Vec<Mismatch>,
}

impl Local {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(name).or_insert(0) += 1;
        if !ok {
            self.mismatches.push(Mismatch { instance: self.instance, check: name.into(), detail: detail() });
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Fam {
    Thresholds,
    Intervals(usize),
}

/// Naive realizability: sort, reject conflicting duplicates, then either
/// require negatives strictly left of positives (and none at 1) or count
/// maximal runs of positives.
fn feasible(fam: Fam, pts: &[(f64, Label)]) -> bool {
    let mut p = pts.to_vec();
    p.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in p.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return false;
        }
    }
    match fam {
        Fam::Thresholds => {
            let max_neg = p.iter().filter(|q| !q.1.is_pos()).map(|q| q.0).fold(f64::NEG_INFINITY, f64::max);
            let min_pos = p.iter().filter(|q| q.1.is_pos()).map(|q| q.0).fold(f64::INFINITY, f64::min);
            max_neg < min_pos && max_neg < 1.0
        }
        Fam::Intervals(k) => {
            let mut runs = 0;
            let mut prev = false;
            for q in &p {
                let pos = q.1.is_pos();
                if pos && !prev {
                    runs += 1;
                }
                prev = pos;
            }
            runs <= k
        }
    }
}

fn with(s: &[(f64, Label)], x: f64, y: Label) -> Vec<(f64, Label)> {
    let mut v = s.to_vec();
    v.push((x, y));
    v
}

/// `None` in the disagreement region, otherwise the forced label.
fn definitional_label(fam: Fam, s: &[(f64, Label)], x: f64) -> Option<Label> {
    let pos = feasible(fam, &with(s, x, Label::Pos));
    let neg = feasible(fam, &with(s, x, Label::Neg));
    match (pos, neg) {
        (true, true) => None,
        (true, false) => Some(Label::Pos),
        (false, true) => Some(Label::Neg),
        (false, false) => unreachable!("S is feasible, so one label fits"),
    }
}

fn label_of(h: &Hypothesis, x: f64) -> Label {
    h.predict(Point::new(x).expect("grid point in [0,1]"))
}

fn level_of(h: &Hypothesis) -> usize {
    match h {
        Hypothesis::Threshold { .. } => 0,
        Hypothesis::Intervals { intervals } => intervals.count(),
    }
}

/// Shared enumerated classes and their materialized members.
struct World {
    thresholds: Arc<EnumeratedClass>,
    threshold_members: Vec<Hypothesis>,
    unions: Arc<EnumeratedClass>,
    union_members: Vec<Hypothesis>,
    fine: Vec<f64>,
}

impl World {
    fn new() -> Self {
        let thresholds = Arc::new(EnumeratedClass::thresholds(COARSE).expect("valid grid"));
        let unions = Arc::new(EnumeratedClass::interval_unions(COARSE, K_MAX).expect("valid grid"));
        let threshold_members = (0..thresholds.len()).map(|h| thresholds.hypothesis(h)).collect();
        let union_members = (0..unions.len()).map(|h| unions.hypothesis(h)).collect();
        let fine = (0..FINE_GRID).map(|i| i as f64 / (FINE_GRID - 1) as f64).collect();
        Self { thresholds, threshold_members, unions, union_members, fine }
    }

    fn check_instance(&self, j: usize, rng: &mut ChaCha8Rng, search: &SearchFn, out: &mut Local) {
        let fam = if rng.gen_bool(0.25) { Fam::Thresholds } else { Fam::Intervals(rng.gen_range(0..=K_MAX)) };
        let (class, members) = match fam {
            Fam::Thresholds => (&self.thresholds, &self.threshold_members),
            Fam::Intervals(_) => (&self.unions, &self.union_members),
        };
        let k = match fam {
            Fam::Thresholds => 0,
            Fam::Intervals(k) => k,
        };
        let target = members[rng.gen_range(0..members.len())].clone();
        let bp = class.breakpoints().to_vec();

        // Every 50th instance pins the enumerated space down to one member.
        let singleton = j.is_multiple_of(50) && level_of(&target) <= k;
        let mut xs: Vec<f64> = if singleton {
            (0..class.num_pieces()).map(|p| class.piece_point(p)).collect()
        } else {
            let m = rng.gen_range(0..=5);
            let mut xs: Vec<f64> = bp.choose_multiple(rng, m).copied().collect();
            if rng.gen_bool(0.3) {
                xs.push(rng.gen::<f64>());
            }
            xs
        };
        xs.sort_by(f64::total_cmp);
        let noisy_labels = !singleton && rng.gen_bool(0.3);
        let s: Vec<(f64, Label)> = xs
            .iter()
            .map(|&x| {
                let y = if noisy_labels && rng.gen_bool(0.5) { Label::from_bool(rng.gen()) } else { label_of(&target, x) };
                (x, y)
            })
            .collect();
        let examples: Vec<LabeledExample> =
            s.iter().map(|&(x, y)| LabeledExample::new(x, y).expect("points lie in [0,1]")).collect();

        let exact_family = match fam {
            Fam::Thresholds => Family::Thresholds,
            Fam::Intervals(k) => Family::Intervals { k },
        };
        let exact = VersionSpace::Constrained(ConstrainedSpace::new(exact_family, &examples));
        let masked = MaskedSpace::constrained(class.clone(), k, &examples);
        let enumerated = VersionSpace::Masked(masked.clone());

        // survivors, member by member
        let brute: Vec<u32> = (0..members.len())
            .filter(|&h| level_of(&members[h]) <= k && s.iter().all(|&(x, y)| label_of(&members[h], x) == y))
            .map(|h| h as u32)
            .collect();
        out.check("version-space/enumerated", masked.survivors() == brute.as_slice(), || {
            format!("{} survivors, brute force finds {}", masked.len(), brute.len())
        });
        if singleton {
            out.check("singleton/enumerated", brute.len() == 1 && masked.dis_mass().ok() == Some(0.0), || {
                format!("{} survivors", brute.len())
            });
        }

        let s_feasible = feasible(fam, &s);
        out.check("emptiness/exact", exact.is_empty() != s_feasible, || {
            format!("exact empty = {}, naive feasible = {s_feasible}", exact.is_empty())
        });

        if s_feasible {
            self.check_exact_dis(fam, &s, &exact, out);
        }
        if !brute.is_empty() {
            self.check_enumerated_dis(class, members, &brute, &enumerated, rng, out);
        }
        if s_feasible && !brute.is_empty() {
            self.check_cross_backend(&s, &exact, &enumerated, out);
        }
        if let Fam::Intervals(_) = fam {
            self.check_min_consistent(&s, &examples, members, out);
        }

        let policies = [SearchPolicy::FirstSweep, SearchPolicy::UniformRandomValid, SearchPolicy::AdversarialBoundary];
        if s_feasible {
            let policy = *policies.choose(rng).expect("nonempty");
            self.check_search("search/exact", fam, &s, &exact, &target, policy, search, rng, |x, y| {
                !feasible(fam, &with(&s, x, y))
            }, out);
        }
        if !brute.is_empty() {
            let policy = *policies.choose(rng).expect("nonempty");
            self.check_search("search/enumerated", fam, &s, &enumerated, &target, policy, search, rng, |x, y| {
                brute.iter().all(|&h| label_of(&members[h as usize], x) != y)
            }, out);
            self.check_erm_pvs(class, members, &brute, &masked, &target, rng, out);
        }
        if s_feasible && !brute.is_empty() {
            self.check_exact_erm(fam, &s, &exact, members, &brute, rng, out);
        }
    }

    fn check_exact_dis(&self, fam: Fam, s: &[(f64, Label)], exact: &VersionSpace, out: &mut Local) {
        let mut xs = self.fine.clone();
        xs.extend(s.iter().map(|q| q.0));
        let mut inside = 0usize;
        let mut bad = Vec::new();
        for (i, &x) in xs.iter().enumerate() {
            let want = definitional_label(fam, s, x);
            if i < FINE_GRID && want.is_none() {
                inside += 1;
            }
            match exact.classify(x) {
                Ok(got) if got == want => {}
                got => bad.push(format!("x={x}: got {got:?}, want {want:?}")),
            }
        }
        out.check("dis/exact", bad.is_empty(), || bad[..bad.len().min(3)].join("; "));

        let region = exact.dis_region().unwrap_or_default();
        let mass = exact.dis_mass().unwrap_or(f64::NAN);
        let frac = inside as f64 / FINE_GRID as f64;
        let tol = 2.0 * (s.len() + 3) as f64 / (FINE_GRID - 1) as f64;
        out.check("dis-mass/exact", (mass - frac).abs() <= tol, || format!("mass {mass}, grid fraction {frac}"));
        let mut edges = Vec::new();
        for &(a, b) in &region {
            if b > a {
                edges.push((0.5 * (a + b), true));
            }
        }
        let mut prev = 0.0;
        for &(a, b) in region.iter().chain(std::iter::once(&(1.0, 1.0))) {
            if a > prev {
                edges.push((0.5 * (prev + a), false));
            }
            prev = b;
        }
        let bad: Vec<String> = edges
            .iter()
            .filter(|&&(x, want)| definitional_label(fam, s, x).is_none() != want)
            .map(|(x, want)| format!("midpoint {x} expected in DIS = {want}"))
            .collect();
        out.check("dis-region/exact", bad.is_empty(), || bad.join("; "));
    }

    fn check_enumerated_dis(
        &self,
        class: &EnumeratedClass,
        members: &[Hypothesis],
        brute: &[u32],
        v: &VersionSpace,
        rng: &mut ChaCha8Rng,
        out: &mut Local,
    ) {
        let bp = class.breakpoints();
        let mut xs: Vec<f64> = bp.to_vec();
        xs.extend(bp.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        xs.extend((0..50).map(|_| rng.gen::<f64>()));
        let brute_label = |x: f64| -> Option<Label> {
            let first = label_of(&members[brute[0] as usize], x);
            brute.iter().all(|&h| label_of(&members[h as usize], x) == first).then_some(first)
        };
        let mut bad = Vec::new();
        for &x in &xs {
            let want = brute_label(x);
            match v.classify(x) {
                Ok(got) if got == want => {}
                got => bad.push(format!("x={x}: got {got:?}, want {want:?}")),
            }
        }
        out.check("dis/enumerated", bad.is_empty(), || bad[..bad.len().min(3)].join("; "));
        let mass: f64 = bp
            .windows(2)
            .filter(|w| brute_label(0.5 * (w[0] + w[1])).is_none())
            .map(|w| w[1] - w[0])
            .sum();
        let got = v.dis_mass().unwrap_or(f64::NAN);
        out.check("dis-mass/enumerated", (got - mass).abs() <= 1e-12, || format!("mass {got}, brute {mass}"));
    }

    fn check_cross_backend(&self, s: &[(f64, Label)], exact: &VersionSpace, enumerated: &VersionSpace, out: &mut Local) {
        let mut bad = Vec::new();
        for &x in &self.fine {
            if s.iter().any(|q| (q.0 - x).abs() <= CELL + 1e-9) {
                continue;
            }
            let (a, b) = (exact.classify(x).ok(), enumerated.classify(x).ok());
            if a != b {
                bad.push(format!("x={x}: exact {a:?}, enumerated {b:?}"));
            }
        }
        out.check("dis/cross-backend", bad.is_empty(), || bad[..bad.len().min(3)].join("; "));
    }

    fn check_min_consistent(&self, s: &[(f64, Label)], examples: &[LabeledExample], members: &[Hypothesis], out: &mut Local) {
        let naive = (0..=K_MAX).find(|&k| feasible(Fam::Intervals(k), s));
        let exact = NestedClassSequence::exact_intervals(K_MAX);
        let enumerated = NestedClassSequence::enumerated(self.unions.clone());
        let brute = members
            .iter()
            .filter(|h| s.iter().all(|&(x, y)| label_of(h, x) == y))
            .map(level_of)
            .min();
        for k_lo in 0..=K_MAX {
            let want = naive.map(|k| k.max(k_lo));
            let got = exact.min_consistent_index(examples, k_lo).ok();
            out.check("min-consistent-index/exact", got == want, || {
                format!("k_lo={k_lo}: got {got:?}, want {want:?}")
            });
            // a member of H_k also lies in every larger class
            let want = brute.map(|k| k.max(k_lo));
            let got = enumerated.min_consistent_index(examples, k_lo).ok();
            out.check("min-consistent-index/enumerated", got == want, || {
                format!("k_lo={k_lo}: got {got:?}, want {want:?}")
            });
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_search<F: Fn(f64, Label) -> bool>(
        &self,
        name: &'static str,
        fam: Fam,
        s: &[(f64, Label)],
        v: &VersionSpace,
        target: &Hypothesis,
        policy: SearchPolicy,
        search: &SearchFn,
        rng: &mut ChaCha8Rng,
        all_wrong: F,
        out: &mut Local,
    ) {
        let valid = |x: f64| all_wrong(x, label_of(target, x));
        match search(v, target, policy, rng) {
            Ok(Some(e)) => {
                let x = e.x.get();
                let ok = e.y == label_of(target, x) && all_wrong(x, e.y);
                out.check(name, ok, || format!("{policy:?} returned ({x}, {}) which is not a counterexample", e.y));
            }
            Ok(None) => {
                let mut cuts: Vec<f64> = s.iter().map(|q| q.0).collect();
                cuts.extend(target.breakpoints());
                cuts.extend(self.unions.breakpoints());
                cuts.extend([0.0, 1.0]);
                if fam == Fam::Thresholds {
                    cuts.extend(self.thresholds.breakpoints());
                }
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let mids: Vec<f64> = cuts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
                let witness = cuts.iter().chain(&mids).copied().find(|&x| valid(x));
                out.check(name, witness.is_none(), || {
                    format!("{policy:?} answered bottom but ({}) is a counterexample", witness.unwrap_or(f64::NAN))
                });
            }
            Err(e) => out.check(name, false, || format!("{policy:?} failed: {e}")),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_erm_pvs(
        &self,
        class: &EnumeratedClass,
        members: &[Hypothesis],
        brute: &[u32],
        masked: &MaskedSpace,
        target: &Hypothesis,
        rng: &mut ChaCha8Rng,
        out: &mut Local,
    ) {
        let n = rng.gen_range(1..=16);
        let sample: Vec<(f64, Label)> = (0..n)
            .map(|_| {
                let x = if rng.gen_bool(0.3) {
                    class.breakpoints()[rng.gen_range(0..class.breakpoints().len())]
                } else {
                    rng.gen::<f64>()
                };
                let y = if rng.gen_bool(0.3) { Label::from_bool(rng.gen()) } else { label_of(target, x) };
                (x, y)
            })
            .collect();
        let examples: Vec<LabeledExample> =
            sample.iter().map(|&(x, y)| LabeledExample::new(x, y).expect("in [0,1]")).collect();
        let tally = PieceTally::from_examples(class, &examples);
        let errs: Vec<u64> = brute
            .iter()
            .map(|&h| sample.iter().filter(|&&(x, y)| label_of(&members[h as usize], x) != y).count() as u64)
            .collect();
        let best = *errs.iter().min().expect("nonempty");
        let best_h = brute[errs.iter().position(|&e| e == best).expect("min exists")] as usize;
        let got = masked.erm_tally(&tally).ok();
        out.check("erm/enumerated", got == Some((best_h, best)), || {
            format!("got {got:?}, brute force ({best_h}, {best})")
        });

        let delta = *[0.05, 0.1, 0.5].choose(rng).expect("nonempty");
        let k = masked.level();
        let d = class.dims()[k];
        let s = sigma(d, n as u64, delta / ((k as f64 + 1.0) * (k as f64 + 2.0))).expect("valid sigma arguments");
        let e = best as f64 / n as f64;
        let keep = e + 2.0 * (e * s).sqrt() + 3.0 * s;
        let want: Vec<u32> = brute
            .iter()
            .zip(&errs)
            .filter(|(_, &c)| c as f64 / n as f64 <= keep)
            .map(|(&h, _)| h)
            .collect();
        let got = prune_version_space(masked, &tally, delta).map(|m| m.survivors().to_vec());
        let ok = matches!(&got, Ok(g) if *g == want);
        out.check("pvs/enumerated", ok, || format!("got {} survivors, brute force keeps {}", got.map_or(0, |g| g.len()), want.len()));
    }

    #[allow(clippy::too_many_arguments)]
    fn check_exact_erm(
        &self,
        fam: Fam,
        s: &[(f64, Label)],
        exact: &VersionSpace,
        members: &[Hypothesis],
        brute: &[u32],
        rng: &mut ChaCha8Rng,
        out: &mut Local,
    ) {
        // a sample labeled by some member of the space is always fittable
        let teacher = &members[brute[rng.gen_range(0..brute.len())] as usize];
        let sample: Vec<LabeledExample> = (0..rng.gen_range(1..=12))
            .map(|_| {
                let x = rng.gen::<f64>();
                LabeledExample::new(x, label_of(teacher, x)).expect("in [0,1]")
            })
            .collect();
        let fits = |h: &Hypothesis| {
            let k_ok = match fam {
                Fam::Thresholds => matches!(h, Hypothesis::Threshold { .. }),
                Fam::Intervals(k) => level_of(h) <= k,
            };
            k_ok && s.iter().all(|&(x, y)| label_of(h, x) == y)
                && sample.iter().all(|e| label_of(h, e.x.get()) == e.y)
        };
        match exact.erm(&sample) {
            Ok(h) => out.check("erm/exact", fits(&h), || format!("{h:?} misfits the sample or the constraints")),
            Err(e) => out.check("erm/exact", false, || format!("erm failed: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_is_clean() {
        let r = validate_against_bruteforce(60, 7);
        assert!(r.is_clean(), "{:?}", &r.mismatches[..r.mismatches.len().min(5)]);
        for name in ["dis/exact", "dis/enumerated", "search/exact", "erm/enumerated", "pvs/enumerated"] {
            assert!(r.checks.get(name).copied().unwrap_or(0) > 0, "{name} never ran");
        }
        assert!(r.checks.get("singleton/enumerated").copied().unwrap_or(0) >= 1);
    }

    #[test]
    fn corrupted_search_is_caught() {
        // answer a fixed point regardless of the version space
        let fixed: &SearchFn = &|_, t, _, _| Ok(Some(LabeledExample::new(0.5, t.predict(Point::new(0.5)?))?));
        let r = validate_with_search(60, 7, fixed);
        assert!(r.mismatch_counts().keys().any(|k| k.starts_with("search/")));
        let silent: &SearchFn = &|_, _, _, _| Ok(None);
        let r = validate_with_search(60, 7, silent);
        assert!(r.mismatch_counts().keys().any(|k| k.starts_with("search/")));
    }
}
