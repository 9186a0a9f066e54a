//! Grid estimates of the disagreement coefficient
//! `θ_V(r) = sup_{h ∈ V, r' >= r} Pr[DIS(B_V(h, r'))] / r'`.

use rayon::prelude::*;

use super::version_space::MaskedSpace;

const DIST_TOL: f64 = 1e-12;

/// Geometric radii `r, r·f, r·f², ...` up to and including 1.
pub fn radius_grid(r: f64, factor: f64) -> Vec<f64> {
    assert!(r > 0.0 && r <= 1.0 && factor > 1.0, "invalid radius grid");
    let mut out = Vec::new();
    let mut cur = r;
    while cur < 1.0 {
        out.push(cur);
        cur *= factor;
    }
    out.push(1.0);
    out
}

/// `max_{r' in radii} Pr[DIS(B_V(center, r'))] / r'` for one center, which
/// may be any member of the underlying class.
pub fn disagreement_coefficient_at(space: &MaskedSpace, center: usize, radii: &[f64]) -> f64 {
    let class = space.class();
    let mut by_dist: Vec<(f64, u32)> =
        space.survivors().iter().map(|&h| (class.pair_distance(center, h as usize), h)).collect();
    by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));

    let np = class.num_pieces();
    let len = class.piece_len();
    let mut diff = vec![0i64; np + 1];
    let mut members = 0usize;
    let mut next = 0usize;
    let mut radii: Vec<f64> = radii.to_vec();
    radii.sort_by(f64::total_cmp);

    let mut best = 0.0f64;
    for &r in &radii {
        while next < by_dist.len() && by_dist[next].0 <= r + DIST_TOL {
            for &(a, b) in class.spans(by_dist[next].1 as usize) {
                diff[2 * a as usize] += 1;
                diff[2 * b as usize + 1] -= 1;
            }
            members += 1;
            next += 1;
        }
        if members < 2 {
            continue;
        }
        let mut acc = 0i64;
        let mut mass = 0.0;
        for p in 0..np {
            acc += diff[p];
            if acc > 0 && (acc as usize) < members {
                mass += len[p];
            }
        }
        best = best.max(mass / r);
    }
    best
}

/// Maximum over every survivor as center; a lower estimate of `θ_V(r)`.
pub fn disagreement_coefficient_estimate(space: &MaskedSpace, r: f64, factor: f64) -> f64 {
    let radii = radius_grid(r, factor);
    space
        .survivors()
        .par_iter()
        .map(|&h| disagreement_coefficient_at(space, h as usize, &radii))
        .reduce(|| 0.0, f64::max)
}
