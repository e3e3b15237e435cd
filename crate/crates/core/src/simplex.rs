//! Dense bounded-variable simplex with Bland's rule.
//!
//! Solves  max c·x  s.t.  A x ≤ b,  l ≤ x ≤ u  where x = l is feasible
//! (all in-repo programs start from the slack basis: b ≥ A·l). This is the
//! one linear-programming routine shared by the concavification, tensor-norm,
//! and diagonal solvers; problems are tiny and dense, so the full tableau is
//! recomputed rather than factorized.

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 20_000;

/// max objective·x  s.t.  rows[r]·x ≤ rhs[r],  lower ≤ x ≤ upper.
#[derive(Debug, Clone)]
pub struct SimplexProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// One multiplier per row; nonnegative at optimality of a max/≤ program.
    pub duals: Vec<f64>,
}

impl SimplexProblem {
    /// All-variables-nonnegative problem with no upper bounds.
    pub fn nonneg(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Self {
        let n = objective.len();
        SimplexProblem {
            objective,
            rows,
            rhs,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

pub fn solve_max(p: &SimplexProblem) -> Result<SimplexSolution> {
    let n = p.objective.len();
    let m = p.rows.len();
    for row in &p.rows {
        if row.len() != n {
            return Err(Error::LinearProgram("row length mismatch".into()));
        }
    }
    if p.rhs.len() != m || p.lower.len() != n || p.upper.len() != n {
        return Err(Error::LinearProgram("shape mismatch".into()));
    }
    for j in 0..n {
        if !p.lower[j].is_finite() {
            return Err(Error::LinearProgram("lower bounds must be finite".into()));
        }
        if p.upper[j] < p.lower[j] {
            return Err(Error::LinearProgram("upper < lower".into()));
        }
    }
    // Slack-basis feasibility at x = lower.
    for r in 0..m {
        let al: f64 = p.rows[r].iter().zip(&p.lower).map(|(a, l)| a * l).sum();
        if al > p.rhs[r] + EPS.max(1e-9 * p.rhs[r].abs()) {
            return Err(Error::LinearProgram(format!(
                "row {r} infeasible at the lower-bound point"
            )));
        }
    }

    let total = n + m;
    // cols: structural then slacks; slack bounds [0, inf).
    let lower = |j: usize| if j < n { p.lower[j] } else { 0.0 };
    let upper = |j: usize| if j < n { p.upper[j] } else { f64::INFINITY };
    let cost = |j: usize| if j < n { p.objective[j] } else { 0.0 };

    // tableau[r] = current B^{-1}[A | I] row; rhs0 = B^{-1} b.
    let mut tab: Vec<Vec<f64>> = (0..m)
        .map(|r| {
            let mut row = vec![0.0; total];
            row[..n].copy_from_slice(&p.rows[r]);
            row[n + r] = 1.0;
            row
        })
        .collect();
    let mut rhs0: Vec<f64> = p.rhs.clone();

    let mut state: Vec<VarState> = (0..total)
        .map(|j| {
            if j >= n {
                VarState::Basic(j - n)
            } else {
                VarState::AtLower
            }
        })
        .collect();
    let mut basic: Vec<usize> = (0..m).map(|r| n + r).collect();

    let nonbasic_value = |j: usize, state: &[VarState]| -> f64 {
        match state[j] {
            VarState::AtLower => lower(j),
            VarState::AtUpper => upper(j),
            VarState::Basic(_) => unreachable!(),
        }
    };

    // beta[r] = value of basic variable in row r.
    let compute_beta = |tab: &[Vec<f64>], rhs0: &[f64], state: &[VarState]| -> Vec<f64> {
        (0..m)
            .map(|r| {
                let mut v = rhs0[r];
                for j in 0..total {
                    if !matches!(state[j], VarState::Basic(_)) {
                        let xv = match state[j] {
                            VarState::AtLower => lower(j),
                            VarState::AtUpper => upper(j),
                            VarState::Basic(_) => unreachable!(),
                        };
                        if xv != 0.0 {
                            v -= tab[r][j] * xv;
                        }
                    }
                }
                v
            })
            .collect()
    };

    let mut beta = compute_beta(&tab, &rhs0, &state);

    for _pivot in 0..MAX_PIVOTS {
        // Reduced costs d_j = c_j - c_B . tab[:, j].
        let mut entering: Option<(usize, f64)> = None;
        for j in 0..total {
            if matches!(state[j], VarState::Basic(_)) {
                continue;
            }
            if upper(j) - lower(j) <= 0.0 {
                continue; // fixed variable
            }
            let mut z = 0.0;
            for r in 0..m {
                let cb = cost(basic[r]);
                if cb != 0.0 {
                    z += cb * tab[r][j];
                }
            }
            let d = cost(j) - z;
            let eligible = match state[j] {
                VarState::AtLower => d > EPS,
                VarState::AtUpper => d < -EPS,
                VarState::Basic(_) => false,
            };
            if eligible {
                entering = Some((j, d));
                break; // Bland: first eligible index
            }
        }
        let Some((jin, _d)) = entering else {
            // Optimal: extract solution.
            let mut x = vec![0.0; total];
            for j in 0..total {
                match state[j] {
                    VarState::Basic(r) => x[j] = beta[r],
                    _ => x[j] = nonbasic_value(j, &state),
                }
            }
            let value: f64 = (0..n).map(|j| p.objective[j] * x[j]).sum();
            // Duals sit in the slack part of c_B B^{-1}.
            let mut duals = vec![0.0; m];
            for (r0, dual) in duals.iter_mut().enumerate() {
                let mut z = 0.0;
                for r in 0..m {
                    let cb = cost(basic[r]);
                    if cb != 0.0 {
                        z += cb * tab[r][n + r0];
                    }
                }
                *dual = z;
            }
            return Ok(SimplexSolution {
                value,
                x: x[..n].to_vec(),
                duals,
            });
        };

        let sigma = match state[jin] {
            VarState::AtLower => 1.0,
            VarState::AtUpper => -1.0,
            VarState::Basic(_) => unreachable!(),
        };

        // Ratio test: largest t >= 0 keeping all basic vars in their bounds.
        let mut t_limit = upper(jin) - lower(jin); // bound-to-bound flip
        let mut leave: Option<(usize, bool)> = None; // (row, hits_upper)
        for r in 0..m {
            let coef = sigma * tab[r][jin];
            if coef > PIVOT_EPS {
                let room = beta[r] - lower(basic[r]);
                let t = room.max(0.0) / coef;
                if t < t_limit - PIVOT_EPS
                    || (t < t_limit + PIVOT_EPS
                        && leave.is_some_and(|(lr, _)| basic[r] < basic[lr]))
                {
                    t_limit = t.max(0.0);
                    leave = Some((r, false));
                }
            } else if coef < -PIVOT_EPS {
                let ub = upper(basic[r]);
                if ub.is_finite() {
                    let room = ub - beta[r];
                    let t = room.max(0.0) / (-coef);
                    if t < t_limit - PIVOT_EPS
                        || (t < t_limit + PIVOT_EPS
                            && leave.is_some_and(|(lr, _)| basic[r] < basic[lr]))
                    {
                        t_limit = t.max(0.0);
                        leave = Some((r, true));
                    }
                }
            }
        }

        if !t_limit.is_finite() {
            return Err(Error::LinearProgram("objective unbounded".into()));
        }

        match leave {
            None => {
                // Bound flip of the entering variable.
                state[jin] = match state[jin] {
                    VarState::AtLower => VarState::AtUpper,
                    VarState::AtUpper => VarState::AtLower,
                    VarState::Basic(_) => unreachable!(),
                };
                beta = compute_beta(&tab, &rhs0, &state);
            }
            Some((r, hits_upper)) => {
                let jout = basic[r];
                // Pivot on tab[r][jin].
                let piv = tab[r][jin];
                if piv.abs() < PIVOT_EPS {
                    return Err(Error::LinearProgram("numerically singular pivot".into()));
                }
                let row_r: Vec<f64> = tab[r].iter().map(|v| v / piv).collect();
                let rhs_r = rhs0[r] / piv;
                for rr in 0..m {
                    if rr == r {
                        continue;
                    }
                    let f = tab[rr][jin];
                    if f != 0.0 {
                        for j in 0..total {
                            tab[rr][j] -= f * row_r[j];
                        }
                        rhs0[rr] -= f * rhs_r;
                    }
                }
                tab[r] = row_r;
                rhs0[r] = rhs_r;

                state[jout] = if hits_upper {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                state[jin] = VarState::Basic(r);
                basic[r] = jin;
                beta = compute_beta(&tab, &rhs0, &state);
            }
        }
    }

    Err(Error::LinearProgram("pivot limit exceeded".into()))
}

/// Convenience: minimize c·x over the same constraint form.
pub fn solve_min(p: &SimplexProblem) -> Result<SimplexSolution> {
    let flipped = SimplexProblem {
        objective: p.objective.iter().map(|c| -c).collect(),
        rows: p.rows.clone(),
        rhs: p.rhs.clone(),
        lower: p.lower.clone(),
        upper: p.upper.clone(),
    };
    let mut sol = solve_max(&flipped)?;
    sol.value = -sol.value;
    sol.duals.iter_mut().for_each(|d| *d = -*d);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn textbook_lp() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18, x,y >= 0 -> 36 at (2,6)
        let p = SimplexProblem::nonneg(
            vec![3.0, 5.0],
            vec![
                vec![1.0, 0.0],
                vec![0.0, 2.0],
                vec![3.0, 2.0],
            ],
            vec![4.0, 12.0, 18.0],
        );
        let s = solve_max(&p).unwrap();
        assert_relative_eq!(s.value, 36.0, max_relative = 1e-12);
        assert_relative_eq!(s.x[0], 2.0, max_relative = 1e-12);
        assert_relative_eq!(s.x[1], 6.0, max_relative = 1e-12);
    }

    #[test]
    fn pure_box_lp_no_rows() {
        // max x - 2y over [0,3] x [0,5]
        let p = SimplexProblem {
            objective: vec![1.0, -2.0],
            rows: vec![],
            rhs: vec![],
            lower: vec![0.0, 0.0],
            upper: vec![3.0, 5.0],
        };
        let s = solve_max(&p).unwrap();
        assert_eq!(s.x, vec![3.0, 0.0]);
        assert_relative_eq!(s.value, 3.0);
    }

    #[test]
    fn upper_bound_binds_through_rows() {
        // max x + y s.t. x + y <= 10, x <= 2 (bound), y <= 3 (bound)
        let p = SimplexProblem {
            objective: vec![1.0, 1.0],
            rows: vec![vec![1.0, 1.0]],
            rhs: vec![10.0],
            lower: vec![0.0, 0.0],
            upper: vec![2.0, 3.0],
        };
        let s = solve_max(&p).unwrap();
        assert_relative_eq!(s.value, 5.0, max_relative = 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let p = SimplexProblem::nonneg(vec![1.0], vec![], vec![]);
        assert!(solve_max(&p).is_err());
    }

    #[test]
    fn duals_satisfy_strong_duality() {
        let p = SimplexProblem::nonneg(
            vec![2.0, 1.0, 3.0],
            vec![
                vec![1.0, 1.0, 1.0],
                vec![2.0, 0.5, 1.0],
                vec![0.0, 1.0, 2.0],
            ],
            vec![4.0, 5.0, 6.0],
        );
        let s = solve_max(&p).unwrap();
        let dual_value: f64 = s.duals.iter().zip(&p.rhs).map(|(y, b)| y * b).sum();
        assert_relative_eq!(s.value, dual_value, max_relative = 1e-9);
        assert!(s.duals.iter().all(|&y| y >= -1e-9));
        // dual feasibility: yᵀA >= c
        for j in 0..3 {
            let ya: f64 = (0..3).map(|r| s.duals[r] * p.rows[r][j]).sum();
            assert!(ya >= p.objective[j] - 1e-9);
        }
    }

    #[test]
    fn degenerate_lp_terminates() {
        // Multiple rows active at the optimum.
        let p = SimplexProblem::nonneg(
            vec![1.0, 1.0],
            vec![
                vec![1.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
            vec![1.0, 1.0, 2.0, 1.0],
        );
        let s = solve_max(&p).unwrap();
        assert_relative_eq!(s.value, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn fixed_variables_are_respected() {
        let p = SimplexProblem {
            objective: vec![5.0, 1.0],
            rows: vec![vec![1.0, 1.0]],
            rhs: vec![4.0],
            lower: vec![1.5, 0.0],
            upper: vec![1.5, f64::INFINITY],
        };
        let s = solve_max(&p).unwrap();
        assert_relative_eq!(s.x[0], 1.5);
        assert_relative_eq!(s.x[1], 2.5, max_relative = 1e-12);
    }

    #[test]
    fn infeasible_start_is_an_error() {
        // x >= 2 (lower bound) but row forces x <= 1.
        let p = SimplexProblem {
            objective: vec![1.0],
            rows: vec![vec![1.0]],
            rhs: vec![1.0],
            lower: vec![2.0],
            upper: vec![5.0],
        };
        assert!(solve_max(&p).is_err());
    }
}
