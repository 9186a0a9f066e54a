use serde::{Deserialize, Serialize};

use super::cal::run_cal;
use super::{canonical_error, dis_mass_or_zero};
use crate::bounds::check_unit;
use crate::error::Result;
use crate::hypotheses::{Hypothesis, LabeledExample, NestedClassSequence};
use crate::oracles::{OracleBundle, QueryLedger};

/// State at the start of a LARCH iteration, plus what SEARCH answered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LarchTraceRow {
    pub i: u64,
    pub k: usize,
    pub ell: u32,
    /// `None` is ⊥.
    pub search: Option<LabeledExample>,
    pub halted: bool,
    /// Ledger after the iteration.
    pub ledger: QueryLedger,
    /// `Pr[DIS(H_k(S))]` at the start of the iteration.
    pub dis_mass: f64,
    /// Exact error of the canonical member of `H_k(S)` at the start.
    pub exact_error: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct LarchRun {
    pub hypothesis: Hypothesis,
    pub ledger: QueryLedger,
    pub trace: Vec<LarchTraceRow>,
    /// SEARCH counterexamples together with CAL's labeled examples.
    pub constraints: Vec<LabeledExample>,
}

impl LarchRun {
    pub fn iterations(&self) -> u64 {
        self.trace.len() as u64
    }
}

/// LARCH: SEARCH for a mistake of `H_k(S)`; on ⊥ halve the target error
/// (or halt once `2^-ℓ <= ε`), on a counterexample move to the least
/// consistent class; then refine `S` with CAL at accuracy `2^-ℓ`.
pub fn run_larch(seq: &NestedClassSequence, bundle: &mut OracleBundle, epsilon: f64, delta: f64) -> Result<LarchRun> {
    check_unit("larch epsilon", epsilon)?;
    check_unit("larch delta", delta)?;
    bundle.require_realizable("LARCH")?;
    let mut s: Vec<LabeledExample> = Vec::new();
    let (mut k, mut ell) = (0usize, 0u32);
    let mut trace = Vec::new();
    for i in 1u64.. {
        let v = seq.space(k, &s)?;
        let dis_mass = dis_mass_or_zero(&v)?;
        let exact_error = canonical_error(&v, bundle)?;
        let e = bundle.search_query(k, &v)?;
        let mut row = LarchTraceRow { i, k, ell, search: e, halted: false, ledger: *bundle.ledger(), dis_mass, exact_error };
        match e {
            None => {
                if 2f64.powi(-(ell as i32)) <= epsilon {
                    let h = v.canonical_member()?;
                    row.halted = true;
                    trace.push(row);
                    return Ok(LarchRun { hypothesis: h, ledger: *bundle.ledger(), trace, constraints: s });
                }
                ell += 1;
            }
            Some(e) => {
                s.push(e);
                k = seq.min_consistent_index(&s, 0)?;
            }
        }
        let cal = run_cal(&seq.space(k, &s)?, bundle, 2f64.powi(-(ell as i32)), delta / (i * i + i) as f64)?;
        s.extend(cal.examples());
        row.ledger = *bundle.ledger();
        trace.push(row);
    }
    unreachable!("the iteration counter is unbounded")
}
