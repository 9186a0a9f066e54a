use serde::{Deserialize, Serialize};

use super::al::{run_al, AlEpochRow, AlReason};
use crate::bounds::check_unit;
use crate::error::{Error, Result};
use crate::hypotheses::{Hypothesis, LabeledExample, MaskedSpace, NestedClassSequence, VersionSpace};
use crate::oracles::{GammaOracle, OracleBundle, QueryLedger};

/// One A-LARCH round: an AL call on `H_k(S)` and, unless AL rejected,
/// a SEARCH on the returned version space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlarchRound {
    pub k: usize,
    pub al_outcome: AlReason,
    pub al_epochs: u32,
    /// `None` when SEARCH was not called or answered ⊥.
    pub search: Option<LabeledExample>,
    pub searched: bool,
    pub ledger: QueryLedger,
}

#[derive(Clone, Debug)]
pub struct AlarchRun {
    pub hypothesis: Hypothesis,
    pub ledger: QueryLedger,
    pub rounds: Vec<AlarchRound>,
    pub al_epochs: Vec<AlEpochRow>,
    /// `V_{k_0}` for the final index `k_0`.
    pub final_space: MaskedSpace,
}

impl AlarchRun {
    pub fn final_k(&self) -> usize {
        self.final_space.level()
    }
}

/// Confidence handed to AL at class `k`.
pub fn alarch_delta(delta: f64, k: usize) -> f64 {
    delta / ((k as f64 + 1.0) * (k as f64 + 2.0))
}

/// A-LARCH over an enumerated nested sequence.
pub fn run_alarch(
    seq: &NestedClassSequence,
    bundle: &mut OracleBundle,
    gamma: &GammaOracle,
    epsilon: f64,
    delta: f64,
) -> Result<AlarchRun> {
    check_unit("alarch epsilon", epsilon)?;
    check_unit("alarch delta", delta)?;
    if seq.enumerated_class().is_none() {
        return Err(Error::Config("A-LARCH runs on the enumerated backend".into()));
    }
    let mut s: Vec<LabeledExample> = Vec::new();
    let mut k = 0usize;
    let mut rounds = Vec::new();
    let mut al_epochs = Vec::new();
    loop {
        if k > seq.k_max() {
            return Err(Error::Exhausted { k_max: seq.k_max() });
        }
        let VersionSpace::Masked(hk) = seq.space(k, &s)? else { unreachable!("enumerated backend") };
        if hk.is_empty() {
            return Err(Error::Contract(format!("H_{k}(S) is empty; S is inconsistent with the target")));
        }
        let out = run_al(&hk, bundle, gamma, epsilon, alarch_delta(delta, k))?;
        al_epochs.extend(out.trace.iter().cloned());
        let mut round = AlarchRound {
            k,
            al_outcome: out.reason,
            al_epochs: out.halting_epoch,
            search: None,
            searched: false,
            ledger: *bundle.ledger(),
        };
        if out.version_space.is_empty() {
            rounds.push(round);
            k += 1;
            continue;
        }
        let e = bundle.search_query(k, &VersionSpace::Masked(out.version_space.clone()))?;
        round.searched = true;
        round.search = e;
        round.ledger = *bundle.ledger();
        rounds.push(round);
        match e {
            None => {
                return Ok(AlarchRun {
                    hypothesis: out.hypothesis,
                    ledger: *bundle.ledger(),
                    rounds,
                    al_epochs,
                    final_space: out.version_space,
                })
            }
            Some(e) => {
                s.push(e);
                k = seq.min_consistent_above(&s, k)?;
            }
        }
    }
}
