use serde::{Deserialize, Serialize};

use crate::bounds::{check_unit, sample_size_cap, sigma, DeltaSchedule};
use crate::error::{Error, Result};
use crate::hypotheses::{Hypothesis, MaskedSpace, PieceTally, VersionSpace};
use crate::oracles::{sal_draw, GammaOracle, OracleBundle};

/// Why AL stopped: the early-reject test (empirical error of ĥ too far
/// above γ) or the success test (ĥ within ε of γ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlReason {
    EarlyReject,
    Success,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlEpochRow {
    pub k: usize,
    pub i: u32,
    pub drawn: u64,
    pub queries: u64,
    pub erm_index: usize,
    /// `Pr_{S_i}[ĥ_i(x) != y]`.
    pub erm_error: f64,
    /// `γ(V_{i-1})`.
    pub gamma: f64,
    /// `σ(d, 2^i, δ_i)`.
    pub sigma: f64,
    pub survivors_before: usize,
    pub survivors_after: usize,
    /// `V_i ⊆ V_{i-1}`, checked member by member.
    pub nested: bool,
    /// Whether some copy of the target in the input class survives into
    /// `V_i`; `None` when the input class has none.
    pub target_retained: Option<bool>,
    pub outcome: Option<AlReason>,
}

#[derive(Clone, Debug)]
pub struct AlOutcome {
    /// Empty exactly on early reject.
    pub version_space: MaskedSpace,
    pub hypothesis: Hypothesis,
    pub hypothesis_index: usize,
    pub halting_epoch: u32,
    pub reason: AlReason,
    pub trace: Vec<AlEpochRow>,
}

/// Defensive epoch cap `⌈log2 cap(d, ε·min(1, 1/(ν+ε)), δ)⌉ + 2`.
pub fn al_epoch_cap(d: usize, epsilon: f64, nu: f64, delta: f64) -> Result<u32> {
    let eps = epsilon * (1.0 / (nu + epsilon)).min(1.0);
    let cap = sample_size_cap(d, eps, delta)?;
    Ok((cap as f64).log2().ceil() as u32 + 2)
}

/// Members of `v`'s input class whose positive set equals the target's
/// up to measure zero.
pub(crate) fn target_copies(space: &MaskedSpace, target: &Hypothesis) -> Vec<u32> {
    let class = space.class();
    let dist = class.distances_to(target);
    space.survivors().iter().copied().filter(|&h| dist[h as usize] <= 1e-12).collect()
}

/// AL over the masked class `h`. Epoch `i` draws `2^i` points, querying
/// LABEL only inside `DIS(V_{i-1})`; ĥ_i is the ERM over `V_{i-1}` and
/// `V_i` keeps the members within `3√(err·σ) + 4σ` of it.
pub fn run_al(
    h: &MaskedSpace,
    bundle: &mut OracleBundle,
    gamma: &GammaOracle,
    epsilon: f64,
    delta: f64,
) -> Result<AlOutcome> {
    check_unit("al epsilon", epsilon)?;
    let schedule = DeltaSchedule::new(delta)?;
    if h.is_empty() {
        return Err(Error::EmptyVersionSpace);
    }
    let class = h.class().clone();
    let k = h.level();
    let d = class.dims()[k];
    let cap = al_epoch_cap(d, epsilon, gamma.upper(bundle), delta)?.min(40);
    let copies = target_copies(h, bundle.target());
    let mut v = VersionSpace::Masked(h.clone());
    let mut trace = Vec::new();
    for i in 1..=cap {
        let m = v.as_masked().expect("masked by construction");
        let n = 1u64 << i;
        let mut tally = PieceTally::new(&class);
        let mut queries = 0;
        for _ in 0..n {
            let draw = sal_draw(&v, bundle)?;
            queries += u64::from(draw.queried);
            tally.push(class.piece_of(draw.x.get()), draw.y);
        }
        let (erm_index, erm_count) = m.erm_tally(&tally)?;
        let g = gamma.value(&v, bundle)?;
        let s = sigma(d, n, schedule.per_iteration(i as u64))?;
        let e = erm_count as f64 / n as f64;
        let keep = e + 3.0 * (e * s).sqrt() + 4.0 * s;
        let next = m.retain(|h| tally.err_count(&class, h as usize) as f64 / n as f64 <= keep);
        let outcome = if e > g + (g * s).sqrt() + s {
            Some(AlReason::EarlyReject)
        } else if e + (e * s).sqrt() + s <= g + epsilon {
            Some(AlReason::Success)
        } else {
            None
        };
        trace.push(AlEpochRow {
            k,
            i,
            drawn: n,
            queries,
            erm_index,
            erm_error: e,
            gamma: g,
            sigma: s,
            survivors_before: m.len(),
            survivors_after: next.len(),
            nested: next.is_subset_of(m),
            target_retained: (!copies.is_empty()).then(|| copies.iter().any(|&t| next.contains_index(t as usize))),
            outcome,
        });
        let hypothesis = class.hypothesis(erm_index);
        match outcome {
            Some(AlReason::EarlyReject) => {
                return Ok(AlOutcome {
                    version_space: MaskedSpace::new(class.clone(), k, Vec::new()),
                    hypothesis,
                    hypothesis_index: erm_index,
                    halting_epoch: i,
                    reason: AlReason::EarlyReject,
                    trace,
                })
            }
            Some(AlReason::Success) => {
                return Ok(AlOutcome {
                    version_space: m.clone(),
                    hypothesis,
                    hypothesis_index: erm_index,
                    halting_epoch: i,
                    reason: AlReason::Success,
                    trace,
                })
            }
            None => v = VersionSpace::Masked(next),
        }
    }
    Err(Error::EpochCap { cap })
}
