use serde::{Deserialize, Serialize};

use super::{canonical_error, dis_mass_or_zero};
use crate::bounds::{check_unit, sigma_k, DeltaSchedule};
use crate::error::{Error, Result};
use crate::hypotheses::{Hypothesis, LabeledExample, NestedClassSequence};
use crate::oracles::{sal_step, OracleBundle, QueryLedger};

/// End-of-iteration summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeabelTraceRow {
    pub i: u64,
    /// `k_{i-1}`, before verification.
    pub k_start: usize,
    /// `k_i`.
    pub k: usize,
    /// `σ_{k_i}(2^i, δ_{i,k_i})`.
    pub sigma: f64,
    pub counterexamples: Vec<LabeledExample>,
    pub ledger: QueryLedger,
    /// `Pr[DIS(V_i^{k_i})]`.
    pub dis_mass: f64,
    pub exact_error: Option<f64>,
    /// Inferred labels in `T_{i+1}` that differ from the target.
    pub inferred_mismatches: u64,
    /// Examples of `S_i ∪ T_{i+1}` the target misclassifies.
    pub target_inconsistent: u64,
    /// LABEL queries during sampling.
    pub sampling_queries: u64,
}

#[derive(Clone, Debug)]
pub struct SeabelRun {
    pub hypothesis: Hypothesis,
    pub ledger: QueryLedger,
    pub trace: Vec<SeabelTraceRow>,
}

impl SeabelRun {
    pub fn counterexamples(&self) -> usize {
        self.trace.iter().map(|r| r.counterexamples.len()).sum()
    }
}

const MAX_ITER: u64 = 40;

fn union(a: &[LabeledExample], b: &[LabeledExample]) -> Vec<LabeledExample> {
    a.iter().chain(b).copied().collect()
}

/// SEABEL: per iteration, a verification stage (SEARCH on
/// `H_k(S ∪ T_i)` until ⊥, stepping `k` upward on each counterexample)
/// then a sampling stage of `2^{i+1}` selective-sampling draws from
/// `V_i = H_{k_i}(S_i ∪ T_i)`. Halts once `σ_{k_i}(2^i, δ_{i,k_i}) <= ε`.
pub fn run_seabel(seq: &NestedClassSequence, bundle: &mut OracleBundle, epsilon: f64, delta: f64) -> Result<SeabelRun> {
    check_unit("seabel epsilon", epsilon)?;
    let schedule = DeltaSchedule::new(delta)?;
    bundle.require_realizable("SEABEL")?;
    let mut s: Vec<LabeledExample> = Vec::new();
    let mut k_prev = 0usize;
    let mut t: Vec<LabeledExample> = (0..2)
        .map(|_| {
            let x = bundle.draw_unlabeled();
            LabeledExample { x, y: bundle.label_query(x) }
        })
        .collect();
    let mut trace = Vec::new();
    for i in 1..=MAX_ITER {
        let mut k = seq.min_consistent_index(&union(&s, &t), k_prev)?;
        let mut found = Vec::new();
        loop {
            let st = union(&s, &t);
            let v = seq.space(k, &st)?;
            match bundle.search_query(k, &v)? {
                Some(e) => {
                    s.push(e);
                    found.push(e);
                    k = seq.min_consistent_above(&union(&s, &t), k)?;
                }
                None => break,
            }
        }
        let v = seq.space(k, &union(&s, &t))?;
        let target = bundle.target().clone();
        let mut next = Vec::with_capacity(1 << (i + 1));
        let mut c = 0u64;
        let mut inferred_mismatches = 0;
        for _ in 0..(1u64 << (i + 1)) {
            let draw = sal_step(&v, bundle, &mut next, &mut c)?;
            if !draw.queried && draw.y != target.predict(draw.x) {
                inferred_mismatches += 1;
            }
        }
        let target_inconsistent = s.iter().chain(&next).filter(|e| target.predict(e.x) != e.y).count() as u64;
        let sigma = sigma_k(k, 1 << i, schedule.per_iteration_class(i, k), seq.class_dims())?;
        trace.push(SeabelTraceRow {
            i,
            k_start: k_prev,
            k,
            sigma,
            counterexamples: found,
            ledger: *bundle.ledger(),
            dis_mass: dis_mass_or_zero(&v)?,
            exact_error: canonical_error(&v, bundle)?,
            inferred_mismatches,
            target_inconsistent,
            sampling_queries: c,
        });
        if sigma <= epsilon {
            return Ok(SeabelRun { hypothesis: v.canonical_member()?, ledger: *bundle.ledger(), trace });
        }
        k_prev = k;
        t = next;
    }
    Err(Error::EpochCap { cap: MAX_ITER as u32 })
}
