use serde::Serialize;

use super::dis_mass_or_zero;
use crate::bounds::{phi, DeltaSchedule};
use crate::error::{domain, Error, Result};
use crate::hypotheses::{LabeledExample, VersionSpace};
use crate::oracles::OracleBundle;

/// One CAL epoch: `2^i` draws, LABEL only inside `DIS(V(T_{<=i-1}))`.
#[derive(Clone, Debug, Serialize)]
pub struct CalEpoch {
    pub i: u32,
    pub drawn: u64,
    /// `T_i`, the queried examples.
    pub queried: Vec<LabeledExample>,
    /// `Pr[DIS(V(T_{<=i-1}))]`.
    pub dis_mass_before: f64,
    pub phi: f64,
}

#[derive(Clone, Debug)]
pub struct CalResult {
    pub epochs: Vec<CalEpoch>,
    /// `V(T)`; may be empty.
    pub final_space: VersionSpace,
}

impl CalResult {
    /// `T = T_1 ∪ ... ∪ T_I`.
    pub fn examples(&self) -> Vec<LabeledExample> {
        self.epochs.iter().flat_map(|e| e.queried.iter().copied()).collect()
    }

    pub fn num_epochs(&self) -> u32 {
        self.epochs.len() as u32
    }

    pub fn label_queries(&self) -> u64 {
        self.epochs.iter().map(|e| e.queried.len() as u64).sum()
    }
}

// 2^i must fit the draw counter
const MAX_EPOCH: u32 = 40;

/// CAL on `v0` with a noise-free LABEL. Halts after epoch `i` once
/// `phi(d, 2^i, δ_i/2) <= epsilon` or `V(T_{<=i})` is empty.
pub fn run_cal(v0: &VersionSpace, bundle: &mut OracleBundle, epsilon: f64, delta: f64) -> Result<CalResult> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(domain(format!("cal: epsilon must lie in (0,1], got {epsilon}")));
    }
    let schedule = DeltaSchedule::new(delta)?;
    bundle.require_realizable("CAL")?;
    let d = v0.vc_dim();
    let mut v = v0.clone();
    let mut epochs = Vec::new();
    for i in 1..=MAX_EPOCH {
        let n = 1u64 << i;
        let dis_mass_before = dis_mass_or_zero(&v)?;
        let mut queried = Vec::new();
        for _ in 0..n {
            let x = bundle.draw_unlabeled();
            if !v.is_empty() && v.dis_contains(x.get())? {
                let y = bundle.label_query(x);
                queried.push(LabeledExample { x, y });
            }
        }
        v = v.restrict(&queried);
        let bound = phi(d, n, schedule.per_iteration(i as u64) / 2.0)?;
        epochs.push(CalEpoch { i, drawn: n, queried, dis_mass_before, phi: bound });
        if bound <= epsilon || v.is_empty() {
            return Ok(CalResult { epochs, final_space: v });
        }
    }
    Err(Error::EpochCap { cap: MAX_EPOCH })
}
