//! EC, PVS and UVS on the enumerated backend. Error rates are tallied
//! counts divided by the sample size `l`.

use crate::bounds::{sigma_k, DeltaSchedule};
use crate::error::{Error, Result};
use crate::hypotheses::{LabeledExample, MaskedSpace, NestedClassSequence, PieceTally, VersionSpace};

fn class_delta(delta: f64, k: usize) -> f64 {
    delta / ((k as f64 + 1.0) * (k as f64 + 2.0))
}

fn sigma_at(space: &MaskedSpace, k: usize, l: u64, delta: f64) -> Result<f64> {
    sigma_k(k, l, class_delta(delta, k), space.class().dims())
}

/// `err + 2√(err·σ) + 3σ`.
fn widen(err: f64, s: f64) -> f64 {
    err + 2.0 * (err * s).sqrt() + 3.0 * s
}

/// The γ of EC: the smallest widened empirical error over every `H_{k'}`,
/// `k <= k' <= K_max`, with each class's own σ. Classes here are the full
/// `H_{k'}`, not restricted by the seed set.
pub fn ec_gamma(space: &MaskedSpace, l: &PieceTally, delta: f64) -> Result<f64> {
    let n = l.len();
    if n == 0 {
        return Err(Error::Contract("EC requires a nonempty dataset".into()));
    }
    let class = space.class();
    let mins = l.min_err_by_level(class);
    let mut best = f64::INFINITY;
    for (kp, &e) in mins.iter().enumerate().skip(space.level()) {
        best = best.min(widen(e as f64 / n as f64, sigma_at(space, kp, n, delta)?));
    }
    Ok(best)
}

/// EC: whether the best member of `V ⊆ H_k` errs on `L` by more than
/// `γ + 2√(γσ_k) + 3σ_k`. An empty `L` never signals.
pub fn error_check(v: &MaskedSpace, l: &PieceTally, delta: f64) -> Result<bool> {
    let n = l.len();
    if n == 0 {
        return Ok(false);
    }
    let gamma = ec_gamma(v, l, delta)?;
    let s = sigma_at(v, v.level(), n, delta)?;
    let best = v.min_err_count(l)? as f64 / n as f64;
    Ok(best > widen(gamma, s))
}

/// PVS: keep the members of `V` whose error on `L` is within
/// `2√(err·σ_k) + 3σ_k` of the best member's. No-op on an empty `L`.
pub fn prune_version_space(v: &MaskedSpace, l: &PieceTally, delta: f64) -> Result<MaskedSpace> {
    let n = l.len();
    if n == 0 || v.is_empty() {
        return Ok(v.clone());
    }
    let s = sigma_at(v, v.level(), n, delta)?;
    let best = v.min_err_count(l)? as f64 / n as f64;
    let keep = widen(best, s);
    let class = v.class().clone();
    Ok(v.retain(|h| l.err_count(&class, h as usize) as f64 / n as f64 <= keep))
}

/// UVS: add the optional seed to `S`, move to the least `k' > k` with
/// `H_{k'}(S)` nonempty and return the fresh `H_{k'}(S)`.
pub fn upgrade_version_space(
    seq: &NestedClassSequence,
    k: usize,
    s: &mut Vec<LabeledExample>,
    seed: Option<LabeledExample>,
) -> Result<(usize, MaskedSpace)> {
    s.extend(seed);
    let k_new = seq.min_consistent_above(s, k)?;
    match seq.space(k_new, s)? {
        VersionSpace::Masked(m) => Ok((k_new, m)),
        VersionSpace::Constrained(_) => Err(Error::Config("AA-LARCH runs on the enumerated backend".into())),
    }
}

/// `δ_i` as used by AA-LARCH, with `i = 0` treated as `i = 1`.
pub(crate) fn step_delta(schedule: &DeltaSchedule, i: u64) -> f64 {
    schedule.per_iteration(i.max(1))
}
