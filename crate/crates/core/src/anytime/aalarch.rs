use std::io::Write;

use serde::{Deserialize, Serialize};

use super::subroutines::{error_check, prune_version_space, step_delta, upgrade_version_space};
use crate::bounds::{check_unit, sigma_k, DeltaSchedule};
use crate::error::{domain, Error, Result};
use crate::hypotheses::{
    EnumeratedClass, Hypothesis, Label, LabeledExample, MaskedSpace, NestedClassSequence, PieceTally, VersionSpace,
};
use crate::oracles::{sal_draw, OracleBundle, QueryLedger};

/// Run parameters. The SEARCH-to-LABEL cost ratio τ is the bundle's
/// ledger `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnytimeConfig {
    pub delta: f64,
    /// Upper bound `N` on the working dataset size.
    pub n: u64,
    /// Stop once the τ-weighted cost reaches this value.
    pub cost_cap: f64,
    /// Hard stop on unlabeled draws.
    pub max_steps: u64,
    /// Evaluate the favorable-bias and error-envelope checks.
    pub check_invariants: bool,
}

impl AnytimeConfig {
    pub fn new(delta: f64, n: u64, cost_cap: f64) -> Self {
        Self { delta, n, cost_cap, max_steps: 50_000_000, check_invariants: true }
    }
}

/// How an iteration of the outer loop ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationEnd {
    Verified,
    Counterexample,
    ErrorCheck,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimelineRow {
    pub cost: f64,
    pub label_queries: u64,
    pub search_queries: u64,
    pub k: usize,
    /// `|L̃|`.
    pub verified_size: u64,
    /// Exact error of the stored `h̃`, if any.
    pub exact_error: Option<f64>,
    pub verified: bool,
    pub end: IterationEnd,
    /// Unlabeled examples processed, `i`.
    pub step: u64,
    /// `l_i = |L_i|`.
    pub working_size: u64,
    /// Some member of `V_i` equals the target up to measure zero.
    pub target_alive: bool,
    /// On verified rows: the smallest, over the steps of the iteration and
    /// over all hypotheses `h` of the class, of
    /// `(err(h,L)-err(h*,L)) - (err(h,L^D)-err(h*,L^D))`, in counts.
    pub favorable_margin: Option<i64>,
    /// On verified rows: largest exact error over `V_i`.
    pub max_member_error: Option<f64>,
    /// On verified rows: `ν + 8√(ν σ_{k*}(l_i, δ_{i,k*})) + 35 σ_{k*}(l_i, δ_{i,k*})`.
    pub errh_bound: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct AnytimeRun {
    pub timeline: Vec<TimelineRow>,
    pub ledger: QueryLedger,
    pub hypothesis: Option<Hypothesis>,
    /// Iterations ending in a counterexample or an EC upgrade.
    pub unverified: u64,
    pub steps: u64,
    /// Smallest class index holding a copy of the target.
    pub target_level: Option<usize>,
}

#[derive(Serialize)]
struct CsvRow {
    cost: f64,
    label_queries: u64,
    search_queries: u64,
    k: usize,
    verified_size: u64,
    exact_error: Option<f64>,
    verified: bool,
}

impl AnytimeRun {
    /// Error of the stored `h̃` as of the last row whose cost is at most `cost`.
    pub fn error_at_cost(&self, cost: f64) -> Option<f64> {
        self.timeline.iter().take_while(|r| r.cost <= cost).last().and_then(|r| r.exact_error)
    }

    /// Timeline CSV: cost, label_queries, search_queries, k, |L̃|,
    /// exact error of h̃, verified flag.
    pub fn write_timeline_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.timeline {
            wr.serialize(CsvRow {
                cost: r.cost,
                label_queries: r.label_queries,
                search_queries: r.search_queries,
                k: r.k,
                verified_size: r.verified_size,
                exact_error: r.exact_error,
                verified: r.verified,
            })?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// A working-set entry: the label AA-LARCH uses and the label a full
/// LABEL pass would have produced (`L^D`).
#[derive(Clone, Copy, Debug)]
struct Entry {
    ex: LabeledExample,
    yd: Label,
}

/// The working dataset with its tallies.
#[derive(Clone, Debug)]
struct Dataset {
    entries: Vec<Entry>,
    tally: PieceTally,
    /// Entries whose two labels differ, with the working label.
    diff: PieceTally,
    /// How many of those the target mislabels under the working label.
    diff_target_err: u64,
}

impl Dataset {
    fn new(class: &EnumeratedClass) -> Self {
        Self { entries: Vec::new(), tally: PieceTally::new(class), diff: PieceTally::new(class), diff_target_err: 0 }
    }

    fn push(&mut self, class: &EnumeratedClass, target: &Hypothesis, e: Entry) {
        let p = class.piece_of(e.ex.x.get());
        self.tally.push(p, e.ex.y);
        if e.yd != e.ex.y {
            self.diff.push(p, e.ex.y);
            self.diff_target_err += u64::from(target.predict(e.ex.x) != e.ex.y);
        }
        self.entries.push(e);
    }

    fn len(&self) -> u64 {
        self.entries.len() as u64
    }

    /// On the entries where the labels differ, `err(h, L^D) - err(h, L)`
    /// equals `|D| - 2·err(h, D)`, so the favorable-bias margin over all `h`
    /// is `2·(min_h err(h, D) - err(h*, D))`.
    fn favorable_margin(&self, class: &EnumeratedClass) -> i64 {
        let best = *self.diff.min_err_by_level(class).last().expect("at least one level");
        2 * (best as i64 - self.diff_target_err as i64)
    }
}

struct Tracker<'a> {
    class: &'a EnumeratedClass,
    dist: Vec<f64>,
}

impl Tracker<'_> {
    fn error_of(&self, bundle: &OracleBundle, h: usize) -> f64 {
        bundle
            .noise()
            .error_from_distance(self.dist[h])
            .unwrap_or_else(|| bundle.true_error(&self.class.hypothesis(h)))
    }

    fn target_alive(&self, v: &MaskedSpace) -> bool {
        v.survivors().iter().any(|&h| self.dist[h as usize] <= 1e-12)
    }

    fn max_member_error(&self, bundle: &OracleBundle, v: &MaskedSpace) -> f64 {
        match bundle.noise().error_from_distance(0.0) {
            // error is affine and nondecreasing in distance
            Some(_) => {
                let far = v.survivors().iter().map(|&h| self.dist[h as usize]).fold(0.0, f64::max);
                bundle.noise().error_from_distance(far).expect("checked above")
            }
            None => v.survivors().iter().map(|&h| self.error_of(bundle, h as usize)).fold(0.0, f64::max),
        }
    }
}

fn masked(v: &VersionSpace) -> &MaskedSpace {
    v.as_masked().expect("AA-LARCH keeps masked version spaces")
}

/// Smallest level of `class` holding a member at distance zero from `target`.
pub fn target_level(class: &EnumeratedClass, target: &Hypothesis) -> Option<usize> {
    let dist = class.distances_to(target);
    (0..class.len()).filter(|&h| dist[h] <= 1e-12).map(|h| class.level_of(h)).min()
}

/// AA-LARCH until the cost cap (or the step cap) is reached.
pub fn run_aalarch(seq: &NestedClassSequence, bundle: &mut OracleBundle, cfg: &AnytimeConfig) -> Result<AnytimeRun> {
    check_unit("aalarch delta", cfg.delta)?;
    if cfg.n < 1 {
        return Err(domain("aalarch: N must be at least 1"));
    }
    if !(cfg.cost_cap > 0.0) {
        return Err(domain("aalarch: cost cap must be positive"));
    }
    let class = seq
        .enumerated_class()
        .ok_or_else(|| Error::Config("AA-LARCH runs on the enumerated backend".into()))?
        .clone();
    let schedule = DeltaSchedule::new(cfg.delta)?;
    let tau = bundle.ledger().tau;
    let target = bundle.target().clone();
    let tracker = Tracker { class: &class, dist: class.distances_to(&target) };
    let k_star = target_level(&class, &target);
    let nu = bundle.nu();

    let mut s: Vec<LabeledExample> = Vec::new();
    let mut k = 0usize;
    let mut v = seq.space(0, &s)?;
    let mut l = Dataset::new(&class);
    let mut lt = Dataset::new(&class);
    let mut i: u64 = 0;
    let mut h_tilde: Option<usize> = None;
    let mut unverified = 0u64;
    let mut timeline = Vec::new();
    let mut pending_margin: Option<i64> = None;

    let row = |bundle: &OracleBundle,
               end: IterationEnd,
               k: usize,
               i: u64,
               v: &VersionSpace,
               l: &Dataset,
               lt: &Dataset,
               h_tilde: Option<usize>| TimelineRow {
        cost: bundle.ledger().cost(),
        label_queries: bundle.ledger().label_queries,
        search_queries: bundle.ledger().search_queries,
        k,
        verified_size: lt.len(),
        exact_error: h_tilde.map(|h| tracker.error_of(bundle, h)),
        verified: end == IterationEnd::Verified,
        end,
        step: i,
        working_size: l.len(),
        target_alive: tracker.target_alive(masked(v)),
        favorable_margin: None,
        max_member_error: None,
        errh_bound: None,
    };

    let out_of_budget = |bundle: &OracleBundle, i: u64| bundle.ledger().cost() >= cfg.cost_cap || i >= cfg.max_steps;

    'outer: loop {
        let mut c = 0u64;
        loop {
            if out_of_budget(bundle, i) {
                timeline.push(row(bundle, IterationEnd::Budget, k, i, &v, &l, &lt, h_tilde));
                break 'outer;
            }
            let d_i = step_delta(&schedule, i);
            if error_check(masked(&v), &l.tally, d_i)? {
                let (k_new, fresh) = upgrade_version_space(seq, k, &mut s, None)?;
                k = k_new;
                v = VersionSpace::Masked(prune_version_space(&fresh, &lt.tally, d_i)?);
                l = lt.clone();
                unverified += 1;
                pending_margin = None;
                timeline.push(row(bundle, IterationEnd::ErrorCheck, k, i, &v, &l, &lt, h_tilde));
                continue 'outer;
            }
            i += 1;
            let d_i = step_delta(&schedule, i);
            let draw = sal_draw(&v, bundle)?;
            let yd = if draw.queried { draw.y } else { bundle.shadow_label(draw.x) };
            c += u64::from(draw.queried);
            l.push(&class, &target, Entry { ex: draw.example(), yd });
            if cfg.check_invariants {
                let m = l.favorable_margin(&class);
                pending_margin = Some(pending_margin.map_or(m, |p| p.min(m)));
            }
            v = VersionSpace::Masked(prune_version_space(masked(&v), &l.tally, d_i)?);
            if c as f64 >= tau || l.len() >= cfg.n {
                break;
            }
        }
        let d_i = step_delta(&schedule, i);
        match bundle.search_query(k, &v)? {
            Some(e) => {
                let (k_new, fresh) = upgrade_version_space(seq, k, &mut s, Some(e))?;
                k = k_new;
                v = VersionSpace::Masked(prune_version_space(&fresh, &lt.tally, d_i)?);
                l = lt.clone();
                unverified += 1;
                pending_margin = None;
                timeline.push(row(bundle, IterationEnd::Counterexample, k, i, &v, &l, &lt, h_tilde));
            }
            None => {
                lt = l.clone();
                h_tilde = Some(masked(&v).erm_tally(&lt.tally)?.0);
                let mut r = row(bundle, IterationEnd::Verified, k, i, &v, &l, &lt, h_tilde);
                if cfg.check_invariants {
                    r.favorable_margin = pending_margin.take();
                    r.max_member_error = Some(tracker.max_member_error(bundle, masked(&v)));
                    if let (Some(ks), true) = (k_star, l.len() > 0) {
                        let s_k = sigma_k(ks, l.len(), schedule.per_iteration_class(i.max(1), ks), seq.class_dims())?;
                        r.errh_bound = Some(nu + 8.0 * (nu * s_k).sqrt() + 35.0 * s_k);
                    }
                }
                timeline.push(r);
            }
        }
    }
    Ok(AnytimeRun {
        timeline,
        ledger: *bundle.ledger(),
        hypothesis: h_tilde.map(|h| class.hypothesis(h)),
        unverified,
        steps: i,
        target_level: k_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::NoiseModel;
    use std::sync::Arc;

    #[test]
    fn realizable_threshold_like_target_reaches_zero() {
        let class = Arc::new(EnumeratedClass::interval_unions(11, 2).unwrap());
        let seq = NestedClassSequence::enumerated(class);
        let target = Hypothesis::intervals(&[(0.3, 0.6)]).unwrap();
        let mut b = OracleBundle::realizable(target, 2).with_tau(16.0).unwrap();
        let run = run_aalarch(&seq, &mut b, &AnytimeConfig::new(0.1, 5000, 2000.0)).unwrap();
        let last = run.timeline.last().unwrap();
        assert_eq!(last.exact_error, Some(0.0));
        assert!(run.unverified <= 1);
        for r in &run.timeline {
            assert!(r.k <= 1);
            assert!((r.cost - (r.label_queries as f64 + 16.0 * r.search_queries as f64)).abs() < 1e-9);
            if let Some(m) = r.favorable_margin {
                assert!(m >= 0);
            }
        }
    }

    #[test]
    fn rcn_invariants_hold() {
        let class = Arc::new(EnumeratedClass::interval_unions(11, 3).unwrap());
        let seq = NestedClassSequence::enumerated(class);
        let target = Hypothesis::intervals(&[(0.2, 0.4), (0.6, 0.8)]).unwrap();
        let mut b = OracleBundle::new(target, NoiseModel::Rcn { eta: 0.1 }, 6).unwrap().with_tau(4.0).unwrap();
        let run = run_aalarch(&seq, &mut b, &AnytimeConfig::new(0.1, 20_000, 3000.0)).unwrap();
        assert_eq!(run.target_level, Some(2));
        assert!(run.unverified <= 2);
        for r in &run.timeline {
            assert!(r.k <= 2);
            if let Some(m) = r.favorable_margin {
                assert!(m >= 0);
            }
        }
        let mut buf = Vec::new();
        run.write_timeline_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("cost,label_queries,search_queries,k,verified_size,exact_error,verified"));
    }
}
