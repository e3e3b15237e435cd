//! p-concavification of a basis lattice.
//!
//! The new vector operations are x ⊕ y = (x^p + y^p)^{1/p} and
//! α ⊙ x = α^{1/p}·x (signed powers). The seminorm
//!
//!   ‖x‖_(p) = inf { Σ ‖v_i‖^p : |x| = (Σ v_i^p)^{1/p}, v_i ≥ 0 }
//!
//! is computed by convex-envelope duality: substituting w_i = v_i^p turns the
//! problem into the convex envelope at w = |x|^p of the 1-homogeneous
//! monotone function N(w) = ‖w^{1/p}‖^p, solved by dual cutting planes with
//! primal recovery from the LP multipliers. A simplex-grid brute-force oracle
//! provides an independent upper bound for cross-validation.

use serde::Serialize;

use crate::calculus::{signed_power, signed_power_vec};
use crate::error::{Error, Result};
use crate::optimize::{normalize_pos, seeded_rng};
use crate::simplex::{solve_max, SimplexProblem};
use crate::space::NormedLatticeSpace;
use crate::vector::{pairwise_disjoint, LatticeVector};

use rand::Rng;

/// x ⊕ y = (x^p + y^p)^{1/p} coordinatewise with signed powers.
pub fn oplus(x: &LatticeVector, y: &LatticeVector, p: f64) -> Result<LatticeVector> {
    check_concavification_exponent(p)?;
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(LatticeVector::new(
        x.coords()
            .iter()
            .zip(y.coords())
            .map(|(&a, &b)| signed_power(signed_power(a, p) + signed_power(b, p), 1.0 / p))
            .collect(),
    ))
}

/// α ⊙ x = α^{1/p}·x with the sign convention.
pub fn odot(alpha: f64, x: &LatticeVector, p: f64) -> Result<LatticeVector> {
    check_concavification_exponent(p)?;
    Ok(x.scale(signed_power(alpha, 1.0 / p)))
}

fn check_concavification_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 || p == f64::INFINITY {
        return Err(Error::InvalidExponent(format!(
            "concavification exponent p = {p} must lie in [1, inf)"
        )));
    }
    Ok(())
}

/// Result of the concavification-seminorm solver.
///
/// `value` is the certified dual pairing ⟨φ, |x|^p⟩ of the feasible dual
/// certificate; the primal decomposition cost exceeds it by at most `gap`.
#[derive(Debug, Clone, Serialize)]
pub struct ConcaveSeminormResult {
    pub value: f64,
    /// Nonnegative φ with ⟨φ,u⟩ ≤ ‖u^{1/p}‖^p for all u ≥ 0 (up to the
    /// separation tolerance) and ⟨φ,|x|^p⟩ = value.
    pub dual_certificate: Vec<f64>,
    /// Nonnegative v_i with (Σ v_i^p)^{1/p} = |x| and Σ‖v_i‖^p ≤ value + gap.
    pub primal_certificate: Vec<LatticeVector>,
    pub gap: f64,
    pub rounds: usize,
    pub converged: bool,
}

/// N(w) = ‖w^{1/p}‖^p for w ≥ 0: 1-homogeneous and monotone.
fn envelope_objective(space: &NormedLatticeSpace, w: &[f64], p: f64) -> f64 {
    let root: Vec<f64> = w.iter().map(|&t| t.powf(1.0 / p)).collect();
    space.norm_abs_slice(&root).powf(p)
}

const SEMINORM_ROUNDS: usize = 200;
const SEMINORM_VIOLATION_TOL: f64 = 1e-8;

/// ‖x‖_(p) by dual cutting planes.
pub fn seminorm(
    space: &NormedLatticeSpace,
    x: &LatticeVector,
    p: f64,
) -> Result<ConcaveSeminormResult> {
    check_concavification_exponent(p)?;
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: x.dim(),
        });
    }
    let n = space.dim();
    if x.is_zero() {
        return Ok(ConcaveSeminormResult {
            value: 0.0,
            dual_certificate: vec![0.0; n],
            primal_certificate: vec![],
            gap: 0.0,
            rounds: 0,
            converged: true,
        });
    }

    let w: Vec<f64> = x.coords().iter().map(|t| t.abs().powf(p)).collect();
    let nfun = |u: &[f64]| envelope_objective(space, u, p);

    // Coordinate cuts φ_j ≤ N(e_j) = ‖e_j‖^p keep the LP bounded from round one.
    let mut cuts: Vec<Vec<f64>> = Vec::new();
    let mut cut_values: Vec<f64> = Vec::new();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cut_values.push(nfun(&e));
        cuts.push(e);
    }

    let mut rounds = 0;
    let mut converged = false;
    let mut lp_phi: Vec<f64> = vec![0.0; n];
    let mut lp_value = 0.0;
    let mut lp_duals: Vec<f64> = vec![];
    let mut worst_ratio = 1.0;
    let mut prev_best: Option<Vec<f64>> = None;

    while rounds < SEMINORM_ROUNDS {
        rounds += 1;
        let lp = SimplexProblem::nonneg(w.clone(), cuts.clone(), cut_values.clone());
        let sol = solve_max(&lp)?;
        lp_phi = sol.x;
        lp_value = sol.value;
        lp_duals = sol.duals;

        let (ratio, vstar) = separation(space, &lp_phi, p, prev_best.as_deref(), rounds as u64);
        worst_ratio = ratio;
        if ratio <= 1.0 + SEMINORM_VIOLATION_TOL {
            converged = true;
            break;
        }
        let ustar: Vec<f64> = vstar.iter().map(|&t| t.powf(p)).collect();
        cut_values.push(nfun(&ustar));
        cuts.push(ustar);
        prev_best = Some(vstar);
    }

    // Certified dual value: rescale φ when the separation still sees a violation.
    let scale = worst_ratio.max(1.0);
    let phi_cert: Vec<f64> = lp_phi.iter().map(|t| t / scale).collect();
    let value: f64 = phi_cert.iter().zip(&w).map(|(a, b)| a * b).sum();

    // Primal decomposition from the LP multipliers (≤ dim terms by basicness,
    // within the dim+1 cap from the epigraph-cone Carathéodory bound).
    let (primal_cost, primal_certificate) =
        primal_from_cover(space, &w, p, &cuts, &lp_duals, x, nfun, lp_value)?;

    let gap = (primal_cost - value).max(0.0);
    if !x.is_zero() && value.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Solver(format!(
            "seminorm returned nonpositive value {value} on a nonzero vector"
        )));
    }
    Ok(ConcaveSeminormResult {
        value,
        dual_certificate: phi_cert,
        primal_certificate,
        gap,
        rounds,
        converged,
    })
}

/// Separation oracle: maximize ⟨φ, v^p⟩ over v ≥ 0, ‖v‖ = 1 by 32-start
/// projected-gradient ascent on the norm sphere. The substitution u = v^p
/// keeps the objective smooth near the boundary.
fn separation(
    space: &NormedLatticeSpace,
    phi: &[f64],
    p: f64,
    warm: Option<&[f64]>,
    round: u64,
) -> (f64, Vec<f64>) {
    let n = space.dim();
    let objective = |v: &[f64]| -> f64 {
        v.iter()
            .zip(phi)
            .map(|(&a, &f)| f * a.powf(p))
            .sum::<f64>()
    };

    let mut rng = seeded_rng(0x7365_7061 ^ round);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(32);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        starts.push(e);
    }
    if let Some(v) = warm {
        starts.push(v.to_vec());
    }
    starts.push(phi.to_vec());
    starts.push(vec![1.0; n]);
    while starts.len() < 32 {
        starts.push((0..n).map(|_| rng.gen_range(0.01..1.0f64)).collect());
    }

    let mut best_val = f64::NEG_INFINITY;
    let mut best_v = vec![0.0; n];
    for s in starts {
        let Some(mut v) = normalize_pos(space, &s) else {
            continue;
        };
        let mut val = objective(&v);
        if val > best_val {
            best_val = val;
            best_v = v.clone();
        }
        for k in 0..200 {
            // grad of Σ φ_j v_j^p, tangent-projected via Euler (⟨g_N, v⟩ = 1).
            let g: Vec<f64> = v
                .iter()
                .zip(phi)
                .map(|(&a, &f)| p * f * a.powf(p - 1.0))
                .collect();
            let ns = space.norm_subgradient(&v);
            let proj: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
            let dir: Vec<f64> = g.iter().zip(&ns).map(|(a, b)| a - proj * b).collect();
            let step = 0.4 / (1.0 + k as f64 / 25.0) / (1.0 + p);
            let cand: Vec<f64> = v.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            let Some(next) = normalize_pos(space, &cand) else {
                break;
            };
            let next_val = objective(&next);
            if next_val > best_val {
                best_val = next_val;
                best_v = next.clone();
            }
            let stalled = (next_val - val).abs() <= 1e-14 * val.abs().max(1.0);
            v = next;
            val = next_val;
            if stalled && k > 15 {
                break;
            }
        }
    }
    (best_val, best_v)
}

#[allow(clippy::too_many_arguments)]
fn primal_from_cover(
    space: &NormedLatticeSpace,
    w: &[f64],
    p: f64,
    cuts: &[Vec<f64>],
    duals: &[f64],
    x: &LatticeVector,
    nfun: impl Fn(&[f64]) -> f64,
    lp_value: f64,
) -> Result<(f64, Vec<LatticeVector>)> {
    let n = w.len();
    // Trivial single-term decomposition v = |x| is always available.
    let trivial_cost = space.norm_abs_slice(x.coords()).powf(p);

    let mut pieces: Vec<(f64, &Vec<f64>)> = duals
        .iter()
        .zip(cuts)
        .filter(|(t, _)| **t > 1e-13)
        .map(|(t, u)| (*t, u))
        .collect();
    if pieces.is_empty() {
        return Ok((trivial_cost, vec![x.abs()]));
    }
    // Cover: Σ t_k u_k ≥ w by LP duality; repair small float deficiencies.
    let mut covered = vec![0.0; n];
    for (t, u) in &pieces {
        for j in 0..n {
            covered[j] += t * u[j];
        }
    }
    let mut scale_up: f64 = 1.0;
    for j in 0..n {
        if w[j] > 0.0 {
            if covered[j] <= 0.0 {
                // Multipliers unusable; fall back to the trivial decomposition.
                return Ok((trivial_cost, vec![x.abs()]));
            }
            scale_up = scale_up.max(w[j] / covered[j]);
        }
    }
    if scale_up > 1.0 + 1e-6 {
        return Ok((trivial_cost, vec![x.abs()]));
    }
    if scale_up > 1.0 {
        for piece in pieces.iter_mut() {
            piece.0 *= scale_up;
        }
        covered.iter_mut().for_each(|c| *c *= scale_up);
    }
    // Monotone shrink onto the exact decomposition Σ w_k = w.
    let ratio: Vec<f64> = (0..n)
        .map(|j| if covered[j] > 0.0 { w[j] / covered[j] } else { 0.0 })
        .collect();
    let mut cost = 0.0;
    let mut cert = Vec::with_capacity(pieces.len());
    for (t, u) in &pieces {
        let wk: Vec<f64> = (0..n).map(|j| t * u[j] * ratio[j]).collect();
        cost += nfun(&wk);
        cert.push(LatticeVector::new(
            wk.iter().map(|&a| a.powf(1.0 / p)).collect(),
        ));
    }
    debug_assert!(cost <= lp_value * (1.0 + 1e-9) + 1e-12);
    if trivial_cost < cost {
        Ok((trivial_cost, vec![x.abs()]))
    } else {
        Ok((cost, cert))
    }
}

/// Brute-force oracle: enumerate decompositions w = Σ_{k=1}^{dim+1} w_k over
/// a simplex grid and return min Σ N(w_k) — an upper bound converging to the
/// seminorm as the resolution grows.
pub fn seminorm_bruteforce_oracle(
    space: &NormedLatticeSpace,
    x: &LatticeVector,
    p: f64,
    resolution: usize,
) -> Result<f64> {
    check_concavification_exponent(p)?;
    let n = space.dim();
    if n > 3 {
        return Err(Error::DimensionTooLarge(n, 3));
    }
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    if x.is_zero() {
        return Ok(0.0);
    }
    let res = resolution.max(1);
    let parts = n + 1;
    let w: Vec<f64> = x.coords().iter().map(|t| t.abs().powf(p)).collect();

    // N over the grid of per-coordinate counts, indexed by mixed radix.
    let stride: Vec<usize> = (0..n).map(|j| (res + 1).pow(j as u32)).collect();
    let table_len = (res + 1).pow(n as u32);
    let mut table = vec![0.0f64; table_len];
    let mut counts = vec![0usize; n];
    for (idx, slot) in table.iter_mut().enumerate() {
        let mut rem = idx;
        for j in 0..n {
            counts[j] = rem % (res + 1);
            rem /= res + 1;
        }
        let u: Vec<f64> = (0..n)
            .map(|j| counts[j] as f64 * w[j] / res as f64)
            .collect();
        *slot = envelope_objective(space, &u, p);
    }

    // All compositions of res into `parts` ordered parts.
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; parts];
    fn gen(comps: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, k: usize, left: usize) {
        if k == cur.len() - 1 {
            cur[k] = left;
            comps.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            gen(comps, cur, k + 1, left - v);
        }
    }
    gen(&mut comps, &mut cur, 0, res);

    // Product over coordinates of composition choices; parts sum via table.
    let mut best = f64::INFINITY;
    let mut part_idx = vec![0usize; parts];
    let mut choice = vec![0usize; n];
    loop {
        part_idx.iter_mut().for_each(|v| *v = 0);
        for j in 0..n {
            let comp = &comps[choice[j]];
            for k in 0..parts {
                part_idx[k] += comp[k] * stride[j];
            }
        }
        let cost: f64 = part_idx.iter().map(|&i| table[i]).sum();
        if cost < best {
            best = cost;
        }
        // next choice vector
        let mut j = 0;
        loop {
            if j == n {
                return Ok(best);
            }
            choice[j] += 1;
            if choice[j] < comps.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

/// Witness report for an upper/lower p-estimate constant search.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateConstantReport {
    pub p: f64,
    /// Exactly the best witness ratio found: a certified lower bound on the
    /// optimal constant M.
    pub best_constant_lower_bound: f64,
    pub witness: Vec<LatticeVector>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Copy)]
enum EstimateKind {
    Lower,
    Upper,
}

/// Randomized search maximizing (Σ‖x_k‖^p)^{1/p} / ‖Σ x_k‖ over disjoint
/// families: random support partitions, random magnitudes, local polish.
pub fn lower_estimate_constant(
    space: &NormedLatticeSpace,
    p: f64,
    budget: usize,
    seed: u64,
) -> Result<EstimateConstantReport> {
    estimate_constant(space, p, budget, seed, EstimateKind::Lower)
}

/// Mirror search maximizing ‖Σ x_k‖ / (Σ‖x_k‖^p)^{1/p}.
pub fn upper_estimate_constant(
    space: &NormedLatticeSpace,
    p: f64,
    budget: usize,
    seed: u64,
) -> Result<EstimateConstantReport> {
    estimate_constant(space, p, budget, seed, EstimateKind::Upper)
}

fn estimate_constant(
    space: &NormedLatticeSpace,
    p: f64,
    budget: usize,
    seed: u64,
    kind: EstimateKind,
) -> Result<EstimateConstantReport> {
    check_concavification_exponent(p)?;
    let n = space.dim();
    let mut rng = seeded_rng(seed);

    // A family is (block assignment per coordinate, magnitudes); block usize::MAX
    // marks an unused coordinate.
    let ratio = |blocks: &[usize], mags: &[f64]| -> f64 {
        let nblocks = blocks
            .iter()
            .filter(|&&b| b != usize::MAX)
            .map(|&b| b + 1)
            .max()
            .unwrap_or(0);
        if nblocks == 0 {
            return 0.0;
        }
        let mut sum_norm_p = 0.0;
        let mut total = vec![0.0; n];
        for b in 0..nblocks {
            let xb: Vec<f64> = (0..n)
                .map(|j| if blocks[j] == b { mags[j] } else { 0.0 })
                .collect();
            let nb = space.norm_abs_slice(&xb);
            sum_norm_p += nb.powf(p);
            for j in 0..n {
                total[j] += xb[j];
            }
        }
        let lhs = sum_norm_p.powf(1.0 / p);
        let rhs = space.norm_abs_slice(&total);
        if rhs == 0.0 || lhs == 0.0 {
            return 0.0;
        }
        match kind {
            EstimateKind::Lower => lhs / rhs,
            EstimateKind::Upper => rhs / lhs,
        }
    };

    let mut candidates: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    // Canonical families: a single block, all singletons, all coordinate pairs.
    candidates.push((vec![0; n], vec![1.0; n]));
    candidates.push(((0..n).collect(), vec![1.0; n]));
    for i in 0..n {
        for j in (i + 1)..n {
            let mut blocks = vec![usize::MAX; n];
            blocks[i] = 0;
            blocks[j] = 1;
            candidates.push((blocks, vec![1.0; n]));
        }
    }
    for _ in 0..budget {
        let nblocks = rng.gen_range(1..=n);
        let blocks: Vec<usize> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.85) {
                    rng.gen_range(0..nblocks)
                } else {
                    usize::MAX
                }
            })
            .collect();
        let mags: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0f64)).collect();
        candidates.push((blocks, mags));
    }

    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, (b, m))| (ratio(b, m), i))
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    // Polish the best candidates: finite-difference ascent on magnitudes.
    let mut best_ratio = 0.0;
    let mut best = (vec![0; n], vec![1.0; n]);
    for &(r0, idx) in scored.iter().take(10) {
        let (blocks, mags) = &candidates[idx];
        let mut m = mags.clone();
        let mut r = r0;
        for step_k in 0..40 {
            let h = 1e-6;
            let mut grad = vec![0.0; n];
            for j in 0..n {
                if blocks[j] == usize::MAX {
                    continue;
                }
                let mut mp = m.clone();
                mp[j] += h;
                let mut mm = m.clone();
                mm[j] = (mm[j] - h).max(1e-9);
                grad[j] = (ratio(blocks, &mp) - ratio(blocks, &mm)) / (mp[j] - mm[j]);
            }
            let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < 1e-12 {
                break;
            }
            let step = 0.25 / (1.0 + step_k as f64 / 8.0);
            let cand: Vec<f64> = m
                .iter()
                .zip(&grad)
                .map(|(a, g)| (a + step * g / gnorm).max(0.0))
                .collect();
            let rc = ratio(blocks, &cand);
            if rc > r {
                r = rc;
                m = cand;
            }
        }
        if r > best_ratio {
            best_ratio = r;
            best = (blocks.clone(), m);
        }
    }

    let nblocks = best
        .0
        .iter()
        .filter(|&&b| b != usize::MAX)
        .map(|&b| b + 1)
        .max()
        .unwrap_or(0);
    let witness: Vec<LatticeVector> = (0..nblocks)
        .map(|b| {
            LatticeVector::new(
                (0..n)
                    .map(|j| if best.0[j] == b { best.1[j] } else { 0.0 })
                    .collect(),
            )
        })
        .filter(|v| !v.is_zero())
        .collect();

    Ok(EstimateConstantReport {
        p,
        best_constant_lower_bound: best_ratio,
        witness,
        trials: budget,
        seed,
    })
}

/// The AL renorming: sup over partitions of the support of |x| into disjoint
/// blocks of Σ ‖|x| restricted to block‖, by exact set-partition enumeration.
pub fn al_trinorm(space: &NormedLatticeSpace, x: &LatticeVector) -> Result<f64> {
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: x.dim(),
        });
    }
    let support: Vec<usize> = (0..x.dim()).filter(|&j| x[j] != 0.0).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let k = support.len();
    // Restricted growth strings enumerate set partitions (Bell(8) = 4140).
    let mut assign = vec![0usize; k];
    let mut best = 0.0f64;
    loop {
        let nblocks = assign.iter().max().unwrap() + 1;
        let mut total = 0.0;
        for b in 0..nblocks {
            let part: Vec<f64> = (0..x.dim())
                .map(|j| {
                    match support.iter().position(|&s| s == j) {
                        Some(pos) if assign[pos] == b => x[j].abs(),
                        _ => 0.0,
                    }
                })
                .collect();
            total += space.norm_abs_slice(&part);
        }
        if total > best {
            best = total;
        }
        // next restricted growth string
        let mut i = k - 1;
        loop {
            let cap = assign[..i].iter().max().map_or(0, |m| m + 1);
            if i == 0 {
                return Ok(best);
            }
            if assign[i] < cap {
                assign[i] += 1;
                assign[i + 1..].iter_mut().for_each(|a| *a = 0);
                break;
            }
            i -= 1;
        }
    }
}

/// The lower p-estimate transfer check: ‖Σx_k‖_(p) against (1/M^p)·Σ‖x_k‖_(p)
/// for a disjoint family, using the seminorm solver for both sides.
#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub left: f64,
    pub right: f64,
    pub slack: f64,
    /// The constant M used (supplied, or estimated when absent).
    pub constant: f64,
}

pub fn verify_estimate_transfer(
    space: &NormedLatticeSpace,
    p: f64,
    family: &[LatticeVector],
    constant: Option<f64>,
) -> Result<TransferReport> {
    check_concavification_exponent(p)?;
    if family.is_empty() {
        return Err(Error::Solver("empty family".into()));
    }
    if !pairwise_disjoint(family)? {
        return Err(Error::NotDisjoint);
    }
    let m = match constant {
        Some(m) => m,
        None => {
            lower_estimate_constant(space, p, 500, 0)?
                .best_constant_lower_bound
                .max(1.0)
        }
    };
    let mut sum = LatticeVector::zeros(space.dim());
    let mut right = 0.0;
    for xk in family {
        sum = sum.add(xk)?;
        right += seminorm(space, xk, p)?.value;
    }
    right /= m.powf(p);
    let left = seminorm(space, &sum, p)?.value;
    Ok(TransferReport {
        left,
        right,
        slack: left - right,
        constant: m,
    })
}

/// Signed p-th powers of the coordinates: the ⊕-coefficients of x in the
/// basis expansion x = ⊕-Σ x_j^p ⊙ e_j.
pub fn oplus_coefficients(x: &LatticeVector, p: f64) -> LatticeVector {
    signed_power_vec(x, p)
}
