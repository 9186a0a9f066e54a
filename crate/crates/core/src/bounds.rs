//! Closed-form deviation bounds and confidence-splitting schedules.
//!
//! All logarithms are natural. `d = 0` is legal and corresponds to a
//! singleton class.

use crate::error::{domain, Error, Result};

/// VC deviation radius `(1/m)(d ln(e m^2) + ln(2/delta))`.
///
/// `delta > 1` is accepted so the raw formula can be exercised directly.
pub fn phi(d: usize, m: u64, delta: f64) -> Result<f64> {
    if m < 1 {
        return Err(domain("phi: sample size must be at least 1"));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(domain(format!("phi: delta must be positive, got {delta}")));
    }
    let m = m as f64;
    let d = d as f64;
    Ok((d * (1.0 + 2.0 * m.ln()) + (2.0 / delta).ln()) / m)
}

/// `phi` with the failure probability split three ways.
pub fn sigma(d: usize, m: u64, delta: f64) -> Result<f64> {
    phi(d, m, delta / 3.0)
}

/// `sigma` evaluated at the VC dimension of class `k`.
pub fn sigma_k(k: usize, m: u64, delta: f64, class_dims: &[usize]) -> Result<f64> {
    let d = *class_dims.get(k).ok_or(Error::UnknownClass(k))?;
    sigma(d, m, delta)
}

/// Upper bound on every sample size whose `sigma` radius (with the
/// iteration-split confidence) still exceeds `epsilon`:
/// `ceil((64/eps)(d ln(512/eps) + ln(24/delta)))`.
pub fn sample_size_cap(d: usize, epsilon: f64, delta: f64) -> Result<u64> {
    check_unit("sample_size_cap: epsilon", epsilon)?;
    check_unit("sample_size_cap: delta", delta)?;
    let raw = 64.0 / epsilon * (d as f64 * (512.0 / epsilon).ln() + (24.0 / delta).ln());
    Ok(raw.ceil() as u64)
}

/// Radius in the sample-size fact, `sigma(d, m, delta / (2 ln m (ln m + 1)))`,
/// for `m >= 2`.
pub fn fact_radius(d: usize, m: u64, delta: f64) -> Result<f64> {
    if m < 2 {
        return Err(domain("fact_radius: m must be at least 2"));
    }
    let lm = (m as f64).ln();
    sigma(d, m, delta / (2.0 * lm * (lm + 1.0)))
}

/// First `m > sample_size_cap(d, epsilon, delta)` whose `fact_radius` is
/// still `>= epsilon`, scanning every `m` up to `cap + 2000` and a
/// geometric grid up to `100 cap`. `None` means the cap holds.
pub fn sample_size_cap_violation(d: usize, epsilon: f64, delta: f64) -> Result<Option<u64>> {
    let cap = sample_size_cap(d, epsilon, delta)?;
    for m in (cap + 1).max(2)..=cap + 2000 {
        if fact_radius(d, m, delta)? >= epsilon {
            return Ok(Some(m));
        }
    }
    let mut g = (cap + 2000) as f64;
    while g <= 100.0 * cap as f64 {
        let m = g as u64;
        if fact_radius(d, m, delta)? >= epsilon {
            return Ok(Some(m));
        }
        g *= 1.01;
    }
    Ok(None)
}

/// Inverted Bernstein bound for the mean of `n` Bernoulli(p) draws.
pub fn bernstein_upper(p: f64, n: u64, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("bernstein_upper: p must lie in [0,1], got {p}")));
    }
    if n < 1 {
        return Err(domain("bernstein_upper: n must be at least 1"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain(format!("bernstein_upper: delta must lie in (0,1], got {delta}")));
    }
    let n = n as f64;
    let log_term = (1.0 / delta).ln();
    Ok(p + (2.0 * p * log_term / n).sqrt() + 2.0 * log_term / (3.0 * n))
}

/// Inverted Freedman bound on a sum of `n` adapted Bernoulli variables
/// with conditional-variance proxy `v_n = max(sum p_i, 1)`.
pub fn freedman_count_bound(v_n: f64, n: u64, delta: f64) -> Result<f64> {
    if !(v_n >= 1.0) {
        return Err(domain(format!("freedman_count_bound: v_n must be at least 1, got {v_n}")));
    }
    if n < 1 {
        return Err(domain("freedman_count_bound: n must be at least 1"));
    }
    if !(delta > 0.0) {
        return Err(domain(format!("freedman_count_bound: delta must be positive, got {delta}")));
    }
    let log_term = ((4.0 * n as f64).ln() / delta).ln();
    if log_term < 0.0 {
        return Err(domain("freedman_count_bound: delta exceeds ln(4n)"));
    }
    Ok(2.0 * v_n + (4.0 * v_n * log_term).sqrt() + 2.0 / 3.0 * log_term)
}

/// `delta_i = delta / (i (i+1))`, and with `k` present
/// `delta_{i,k} = delta_i / ((k+1)(k+2))`.
pub fn delta_schedule(delta: f64, i: u64, k: Option<usize>) -> Result<f64> {
    if i < 1 {
        return Err(domain("delta_schedule: iteration index starts at 1"));
    }
    let i = i as f64;
    let per_iteration = delta / (i * (i + 1.0));
    Ok(match k {
        None => per_iteration,
        Some(k) => {
            let k = k as f64;
            per_iteration / ((k + 1.0) * (k + 2.0))
        }
    })
}

/// The two-level confidence schedule for a global failure probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaSchedule {
    delta: f64,
}

impl DeltaSchedule {
    pub fn new(delta: f64) -> Result<Self> {
        check_unit("DeltaSchedule: delta", delta)?;
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn per_iteration(&self, i: u64) -> f64 {
        let i = i.max(1) as f64;
        self.delta / (i * (i + 1.0))
    }

    pub fn per_iteration_class(&self, i: u64, k: usize) -> f64 {
        let k = k as f64;
        self.per_iteration(i) / ((k + 1.0) * (k + 2.0))
    }

    /// Share assigned to class `k` when only the class is split:
    /// `delta / ((k+1)(k+2))`.
    pub fn per_class(&self, k: usize) -> f64 {
        let k = k as f64;
        self.delta / ((k + 1.0) * (k + 2.0))
    }
}

pub(crate) fn check_unit(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{what} must lie in (0,1), got {v}")))
    }
}
