//! Shared ascent utilities for the optimization-backed operations.
//!
//! Every search here is seed-deterministic: an explicit seed produces an
//! explicit `ChaCha8Rng`, starts are evaluated in a fixed order, and
//! reductions are ordered, so repeated runs give identical results.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::space::NormedLatticeSpace;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Clip negatives and rescale so the space norm is 1. None if the positive
/// part vanishes.
pub(crate) fn normalize_pos(space: &NormedLatticeSpace, v: &[f64]) -> Option<Vec<f64>> {
    let clipped: Vec<f64> = v.iter().map(|t| t.max(0.0)).collect();
    let n = space.norm_abs_slice(&clipped);
    if n <= 0.0 || !n.is_finite() {
        return None;
    }
    Some(clipped.iter().map(|t| t / n).collect())
}

/// Maximize ⟨x, b⟩ over {x ≥ 0 : ‖x‖ ≤ 1} for b ≥ 0 by multi-start
/// projected-gradient ascent on the positive part of the unit sphere.
///
/// The objective is linear and the ball convex, so the maximum sits on the
/// sphere; each step moves along the tangent projection of b and retracts
/// radially. Returns (value, argmax) with ‖argmax‖ = 1.
pub(crate) fn max_linear_on_pos_sphere(
    space: &NormedLatticeSpace,
    b: &[f64],
    starts: usize,
    seed: u64,
) -> (f64, Vec<f64>) {
    let dim = space.dim();
    debug_assert_eq!(b.len(), dim);
    let bmax = b.iter().cloned().fold(0.0f64, f64::max);
    if bmax == 0.0 {
        let mut x = vec![0.0; dim];
        x[0] = 1.0 / space.basis_norm(0);
        return (0.0, x);
    }
    let bhat: Vec<f64> = b.iter().map(|t| t / bmax).collect();

    let mut rng = seeded_rng(seed);
    let mut best_val = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; dim];

    let mut start_points: Vec<Vec<f64>> = Vec::with_capacity(starts);
    // Greedy direction first, then coordinate vertices, then random rays.
    if let Some(x0) = normalize_pos(space, &bhat) {
        start_points.push(x0);
    }
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        if let Some(x0) = normalize_pos(space, &e) {
            start_points.push(x0);
        }
    }
    while start_points.len() < starts {
        let r: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.01..1.0)).collect();
        if let Some(x0) = normalize_pos(space, &r) {
            start_points.push(x0);
        }
    }

    for x0 in start_points {
        let mut x = x0;
        let mut val: f64 = x.iter().zip(&bhat).map(|(a, c)| a * c).sum();
        if val > best_val {
            best_val = val;
            best_x = x.clone();
        }
        for k in 0..300 {
            let g = space.norm_subgradient(&x);
            // Euler: ⟨g, x⟩ = ‖x‖ = 1, so this is the tangent projection.
            let dir: Vec<f64> = bhat
                .iter()
                .zip(&g)
                .map(|(bi, gi)| bi - val * gi)
                .collect();
            let step = 0.5 / (1.0 + k as f64 / 30.0);
            let cand: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            let Some(next) = normalize_pos(space, &cand) else {
                break;
            };
            let next_val: f64 = next.iter().zip(&bhat).map(|(a, c)| a * c).sum();
            if next_val > best_val {
                best_val = next_val;
                best_x = next.clone();
            }
            let stalled = (next_val - val).abs() <= 1e-15 * val.abs().max(1.0);
            x = next;
            val = next_val;
            if stalled && k > 20 {
                break;
            }
        }
    }

    (best_val * bmax, best_x)
}
