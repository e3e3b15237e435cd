//! The named experiments: seeded sweeps over the lab's central identities,
//! each reporting machine-readable rows and a pass/fail summary per clause.

use std::time::Instant;

use anyhow::Result;

use lattice_square::sampling::{
    canonical_spaces, sample_generic_vector, sample_vector, seeded_rng,
};
use lattice_square::*;

use crate::config::ExperimentConfig;
use crate::table::{fmt_f64, fmt_vec, ClauseSummary, ExperimentReport, Table};

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let t0 = Instant::now();
    let mut report = match cfg.experiment.as_str() {
        "lp-diagonal" => lp_diagonal(cfg)?,
        "main-isometry" => main_isometry(cfg)?,
        "atom-table" => atom_table(cfg)?,
        "al-renorm" => al_renorm(cfg)?,
        "duality-gap" => duality_gap(cfg)?,
        "basis-disjointness" => basis_disjointness(cfg)?,
        "estimate-constants" => estimate_constants(cfg)?,
        "ioc-membership" => ioc_membership(cfg)?,
        other => anyhow::bail!("unknown experiment {other:?}"),
    };
    report
        .timing
        .push(("total".into(), t0.elapsed().as_secs_f64()));
    if let Some(out) = &cfg.output {
        crate::table::emit_table(&report, out.format, &out.path)?;
    }
    Ok(report)
}

fn summarize(criterion: &str, failures: usize, total: usize, extra: &str) -> ClauseSummary {
    ClauseSummary {
        criterion: criterion.to_string(),
        passed: failures == 0 && total > 0,
        detail: if failures == 0 {
            format!("{total} checks passed{extra}")
        } else {
            format!("{failures} of {total} checks failed{extra}")
        },
    }
}

/// Acceptance 1: quotient_norm_dual(diag u) equals ‖u‖_{l_{p/2}} for p ≥ 2
/// and ‖u‖_{l_1} for p ≤ 2, within 1e-2 relative.
fn lp_diagonal(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let ps = cfg.p.map(|p| vec![p]).unwrap_or_else(|| vec![1.0, 1.5, 2.0, 3.0, 4.0]);
    let dims = if cfg.dims.is_empty() { vec![2, 3] } else { cfg.dims.clone() };
    let trials = cfg.trials_or(20);
    let tol = cfg.tolerance_or("rel", 1e-2);
    let mut rng = seeded_rng(cfg.seed());

    let mut table = Table::new(&[
        "space", "dim", "p", "trial", "u", "expected", "observed", "rel_err", "pass",
    ]);
    let mut failures = 0;
    let mut total = 0;
    for &p in &ps {
        for &dim in &dims {
            let space = NormedLatticeSpace::lp(dim, p)?;
            for trial in 0..trials {
                let u = sample_generic_vector(&mut rng, dim);
                let expected = if p >= 2.0 {
                    u.coords()
                        .iter()
                        .map(|v| v.abs().powf(p / 2.0))
                        .sum::<f64>()
                        .powf(2.0 / p)
                } else {
                    u.coords().iter().map(|v| v.abs()).sum()
                };
                let d = DiagonalElement::new(space.clone(), u.coords().to_vec())?;
                let observed = quotient_norm_dual(&d)?.value;
                let rel = (observed - expected).abs() / expected.max(1e-12);
                let pass = rel <= tol;
                total += 1;
                if !pass {
                    failures += 1;
                }
                table.push(vec![
                    space.label(),
                    dim.to_string(),
                    fmt_f64(p),
                    trial.to_string(),
                    fmt_vec(u.coords()),
                    fmt_f64(expected),
                    fmt_f64(observed),
                    fmt_f64(rel),
                    pass.to_string(),
                ]);
            }
        }
    }
    Ok(ExperimentReport {
        experiment: "lp-diagonal".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![summarize(
            "acceptance-1: lp diagonal identity",
            failures,
            total,
            &format!(" (tol {tol:e})"),
        )],
        timing: vec![],
    })
}

/// Acceptance 2: the main isometry — seminorm, primal quotient, and dual
/// quotient agree within 1e-2 relative on seeded samples.
fn main_isometry(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let spaces = if cfg.spaces.is_empty() {
        vec![
            NormedLatticeSpace::lp(3, 1.5)?,
            NormedLatticeSpace::lp(3, 3.0)?,
            NormedLatticeSpace::interlace(2, 1.0, 2.0, 1.0)?,
            NormedLatticeSpace::weighted_lp(3.0, vec![1.0, 2.0, 1.0])?,
        ]
    } else {
        cfg.spaces.clone()
    };
    let trials = cfg.trials_or(50);
    let mut rng = seeded_rng(cfg.seed());

    let mut table = Table::new(&[
        "space",
        "dim",
        "seed",
        "x",
        "seminorm",
        "quotient_primal",
        "quotient_dual",
        "discrepancy",
    ]);
    let mut failures = 0;
    let mut total = 0;
    for space in &spaces {
        for trial in 0..trials {
            let x = sample_generic_vector(&mut rng, space.dim());
            let r = verify_main_isometry(space, &x, cfg.seed() ^ trial as u64)?;
            total += 1;
            if !r.passed {
                failures += 1;
            }
            table.push(vec![
                space.label(),
                space.dim().to_string(),
                trial.to_string(),
                fmt_vec(x.coords()),
                fmt_f64(r.seminorm_value),
                fmt_f64(r.quotient_primal),
                fmt_f64(r.quotient_dual),
                fmt_f64(r.max_discrepancy),
            ]);
        }
    }
    Ok(ExperimentReport {
        experiment: "main-isometry".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![summarize(
            "acceptance-2: main isometry",
            failures,
            total,
            " (discrepancy <= 1e-2 relative)",
        )],
        timing: vec![],
    })
}

/// Acceptance 3: atom norms ‖e_i‖_(p) = ‖e_i‖^p to 1e-12 relative.
fn atom_table(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut spaces = if cfg.spaces.is_empty() {
        canonical_spaces(3)
    } else {
        cfg.spaces.clone()
    };
    if cfg.spaces.is_empty() {
        spaces.push(NormedLatticeSpace::lp(3, f64::INFINITY)?);
    }
    let ps = cfg.p.map(|p| vec![p]).unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
    let tol = cfg.tolerance_or("rel", 1e-12);

    let mut table = Table::new(&["space", "p", "atom", "basis_norm", "expected", "observed", "pass"]);
    let mut failures = 0;
    let mut total = 0;
    for space in &spaces {
        for &p in &ps {
            for i in 0..space.dim() {
                let e = LatticeVector::basis(space.dim(), i);
                let expected = space.basis_norm(i).powf(p);
                let observed = seminorm(space, &e, p)?.value;
                let pass = (observed - expected).abs() <= tol * expected.max(1e-12);
                total += 1;
                if !pass {
                    failures += 1;
                }
                table.push(vec![
                    space.label(),
                    fmt_f64(p),
                    i.to_string(),
                    fmt_f64(space.basis_norm(i)),
                    fmt_f64(expected),
                    fmt_f64(observed),
                    pass.to_string(),
                ]);
            }
        }
    }
    Ok(ExperimentReport {
        experiment: "atom-table".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![summarize(
            "acceptance-3: atom norms exact",
            failures,
            total,
            &format!(" (tol {tol:e})"),
        )],
        timing: vec![],
    })
}

/// Acceptance 8: trinorm exactly additive on disjoint positives; on l_1.5^3
/// with p = 2 the l1 sum of ⊕-coefficients is bounded by the seminorm.
fn al_renorm(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = cfg.trials_or(50);
    let tol_add = cfg.tolerance_or("additivity", 1e-12);
    let tol_bound = cfg.tolerance_or("bound", 1e-3);
    let mut rng = seeded_rng(cfg.seed());

    let mut table = Table::new(&["clause", "space", "trial", "lhs", "rhs", "err", "pass"]);
    let mut failures = 0;
    let mut total = 0;

    for space in canonical_spaces(4) {
        for trial in 0..trials / 5 {
            let raw = sample_vector(&mut rng, 4, 1.5).abs();
            let mut xa = raw.coords().to_vec();
            let mut ya = raw.coords().to_vec();
            for j in 0..4 {
                if (trial + j) % 2 == 0 {
                    xa[j] = 0.0;
                } else {
                    ya[j] = 0.0;
                }
            }
            let (x, y): (LatticeVector, LatticeVector) = (xa.into(), ya.into());
            let lhs = al_trinorm(&space, &x.add(&y)?)?;
            let rhs = al_trinorm(&space, &x)? + al_trinorm(&space, &y)?;
            let err = (lhs - rhs).abs() / lhs.abs().max(1.0);
            let pass = err <= tol_add;
            total += 1;
            if !pass {
                failures += 1;
            }
            table.push(vec![
                "additivity".into(),
                space.label(),
                trial.to_string(),
                fmt_f64(lhs),
                fmt_f64(rhs),
                fmt_f64(err),
                pass.to_string(),
            ]);
        }
    }

    let space = NormedLatticeSpace::lp(3, 1.5)?;
    for trial in 0..trials {
        let x = sample_generic_vector(&mut rng, 3);
        // ⊕-coefficients a_i = x_i^2; Σ|a_i| ≤ M²·‖x‖_(2) with M = 1.
        let lhs: f64 = x.coords().iter().map(|t| t * t).sum();
        let rhs = seminorm(&space, &x, 2.0)?.value;
        let pass = lhs <= rhs + tol_bound * rhs.max(1.0);
        total += 1;
        if !pass {
            failures += 1;
        }
        table.push(vec![
            "lower-2-estimate".into(),
            space.label(),
            trial.to_string(),
            fmt_f64(lhs),
            fmt_f64(rhs),
            fmt_f64(lhs - rhs),
            pass.to_string(),
        ]);
    }

    Ok(ExperimentReport {
        experiment: "al-renorm".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![summarize(
            "acceptance-8: AL renorming",
            failures,
            total,
            "",
        )],
        timing: vec![],
    })
}

/// Acceptance 4: bracket gap ≤ 1e-3 relative on dim-2 spaces and the
/// cross-norm identity for elementary tensors.
fn duality_gap(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let spaces = if cfg.spaces.is_empty() {
        canonical_spaces(2)
    } else {
        cfg.spaces.clone()
    };
    let trials = cfg.trials_or(50);
    let tol = cfg.tolerance_or("rel", 1e-3);
    let mut rng = seeded_rng(cfg.seed());

    let mut table = Table::new(&[
        "clause", "space", "trial", "lower", "upper", "gap", "rel", "pass",
    ]);
    let mut gap_failures = 0;
    let mut cross_failures = 0;
    let mut gap_total = 0;
    let mut cross_total = 0;

    for space in &spaces {
        let mut solver = FremlinSolver::new(space.clone(), space.clone())?;
        for trial in 0..trials {
            let u = sampling::sample_tensor(&mut rng, space, space, 1.0);
            let b = solver.norm(&u)?;
            let rel = b.gap / b.lower.max(1.0);
            let pass = rel <= tol && b.converged;
            gap_total += 1;
            if !pass {
                gap_failures += 1;
            }
            table.push(vec![
                "bracket-gap".into(),
                space.label(),
                trial.to_string(),
                fmt_f64(b.lower),
                fmt_f64(b.upper),
                fmt_f64(b.gap),
                fmt_f64(rel),
                pass.to_string(),
            ]);
        }
        for trial in 0..8 {
            let x = sample_generic_vector(&mut rng, 2);
            let y = sample_generic_vector(&mut rng, 2);
            let u = TensorElement::outer(space.clone(), space.clone(), &x, &y)?;
            let b = solver.norm(&u)?;
            let expect = space.norm(&x)? * space.norm(&y)?;
            let mid = 0.5 * (b.lower + b.upper);
            let rel = (mid - expect).abs() / expect.max(1.0);
            let pass = rel <= tol;
            cross_total += 1;
            if !pass {
                cross_failures += 1;
            }
            table.push(vec![
                "cross-norm".into(),
                space.label(),
                trial.to_string(),
                fmt_f64(mid),
                fmt_f64(expect),
                fmt_f64(mid - expect),
                fmt_f64(rel),
                pass.to_string(),
            ]);
        }
    }

    Ok(ExperimentReport {
        experiment: "duality-gap".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![
            summarize(
                "acceptance-4a: bracket gap <= 1e-3 relative",
                gap_failures,
                gap_total,
                "",
            ),
            summarize(
                "acceptance-4b: cross norm within 1e-3 relative",
                cross_failures,
                cross_total,
                "",
            ),
        ],
        timing: vec![],
    })
}

/// Acceptance 5: meets of distinct basis tensors vanish and the closed form
/// matches the simplex LP.
fn basis_disjointness(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let dims = if cfg.dims.is_empty() { vec![2, 3, 4] } else { cfg.dims.clone() };
    let tol_meet = cfg.tolerance_or("meet", 1e-8);
    let tol_lp = cfg.tolerance_or("lp", 1e-9);
    let mut rng = seeded_rng(cfg.seed());

    let mut table = Table::new(&["space", "pair", "meet", "lp_diff", "pass"]);
    let mut failures = 0;
    let mut total = 0;
    for &dim in &dims {
        let spaces = [
            NormedLatticeSpace::lp(dim, 1.5)?,
            NormedLatticeSpace::lp(dim, 3.0)?,
            NormedLatticeSpace::interlace(dim, 1.0, 2.0, 1.0)?,
        ];
        for space in &spaces {
            let mut t = RegularOperator::zeros(space.clone(), space.clone());
            for j in 0..dim {
                for i in 0..dim {
                    t.set_entry(j, i, sample_vector(&mut rng, 1, 1.0)[0].abs() + 0.1);
                }
            }
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        for l in 0..dim {
                            if (i, j) == (k, l) {
                                continue;
                            }
                            let u = TensorElement::basis(space.clone(), space.clone(), i, j);
                            let v = TensorElement::basis(space.clone(), space.clone(), k, l);
                            let meet = tensor_meet_eval(&u, &v, &t)?;
                            let lp = tensor_meet_eval_lp(&u, &v, &t)?;
                            let pass = meet.abs() <= tol_meet && (meet - lp).abs() <= tol_lp;
                            total += 1;
                            if !pass {
                                failures += 1;
                            }
                            table.push(vec![
                                space.label(),
                                format!("({i}{j})~({k}{l})"),
                                fmt_f64(meet),
                                fmt_f64(meet - lp),
                                pass.to_string(),
                            ]);
                        }
                    }
                }
            }
        }
    }
    Ok(ExperimentReport {
        experiment: "basis-disjointness".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![summarize(
            "acceptance-5: basis tensor disjointness",
            failures,
            total,
            "",
        )],
        timing: vec![],
    })
}

/// Acceptance 10: estimate-constant searches reproduce the exact constants.
fn estimate_constants(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let budget = cfg.trials_or(2000);
    let seed = cfg.seed();
    let mut table = Table::new(&["kind", "space", "p", "bound", "reference", "pass"]);
    let mut failures = 0;
    let mut total = 0;

    let mut record = |kind: &str,
                      space: &NormedLatticeSpace,
                      p: f64,
                      bound: f64,
                      reference: f64,
                      pass: bool,
                      table: &mut Table| {
        total += 1;
        if !pass {
            failures += 1;
        }
        table.push(vec![
            kind.into(),
            space.label(),
            fmt_f64(p),
            fmt_f64(bound),
            fmt_f64(reference),
            pass.to_string(),
        ]);
    };

    for p in [1.0, 1.5, 2.0, 3.0] {
        let s = NormedLatticeSpace::lp(3, p)?;
        let r = lower_estimate_constant(&s, p, budget, seed)?;
        let pass = (r.best_constant_lower_bound - 1.0).abs() <= 1e-9;
        record("lower-lp-self", &s, p, r.best_constant_lower_bound, 1.0, pass, &mut table);
    }
    {
        let s = NormedLatticeSpace::lp(3, 1.0)?;
        let r = lower_estimate_constant(&s, 2.0, budget, seed)?;
        let pass = r.best_constant_lower_bound <= 1.0 + 1e-9;
        record("lower-l1-p2", &s, 2.0, r.best_constant_lower_bound, 1.0, pass, &mut table);
    }
    {
        let s = NormedLatticeSpace::lp(2, f64::INFINITY)?;
        let r = lower_estimate_constant(&s, 1.0, budget.min(800), seed)?;
        let pass = (r.best_constant_lower_bound - 2.0).abs() <= 1e-9;
        record("lower-linf-p1", &s, 1.0, r.best_constant_lower_bound, 2.0, pass, &mut table);
    }
    {
        let s = NormedLatticeSpace::lp(2, 1.0)?;
        let r = upper_estimate_constant(&s, 2.0, budget.min(800), seed)?;
        let pass = (r.best_constant_lower_bound - 2f64.sqrt()).abs() <= 1e-9;
        record(
            "upper-l1-p2",
            &s,
            2.0,
            r.best_constant_lower_bound,
            2f64.sqrt(),
            pass,
            &mut table,
        );
    }

    Ok(ExperimentReport {
        experiment: "estimate-constants".into(),
        seed,
        rows: table,
        summary: vec![summarize(
            "acceptance-10: estimate constants",
            failures,
            total,
            "",
        )],
        timing: vec![],
    })
}

/// Acceptance 9: residuals of antisymmetric and product-difference elements.
fn ioc_membership(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = cfg.trials_or(50);
    let tol = cfg.tolerance_or("rel", 1e-6);
    let mut rng = seeded_rng(cfg.seed());
    let spaces = [
        NormedLatticeSpace::lp(2, 2.0)?,
        NormedLatticeSpace::lp(3, 1.5)?,
        NormedLatticeSpace::lp(3, 3.0)?,
    ];

    let mut table = Table::new(&["clause", "space", "trial", "residual", "bound", "pass"]);
    let mut failures = 0;
    let mut total = 0;
    for space in &spaces {
        for trial in 0..trials / 3 + 1 {
            // antisymmetric part: arbitrary signs
            let x = sample_vector(&mut rng, space.dim(), 1.5);
            let y = sample_vector(&mut rng, space.dim(), 1.5);
            let xy = TensorElement::outer(space.clone(), space.clone(), &x, &y)?;
            let yx = TensorElement::outer(space.clone(), space.clone(), &y, &x)?;
            let res = ioc_residual(&xy.sub(&yx)?)?;
            let bound = tol * space.norm(&x)? * space.norm(&y)?;
            let pass = res <= bound.max(1e-15);
            total += 1;
            if !pass {
                failures += 1;
            }
            table.push(vec![
                "antisymmetric".into(),
                space.label(),
                trial.to_string(),
                fmt_f64(res),
                fmt_f64(bound),
                pass.to_string(),
            ]);

            // product difference: nonnegative pair
            let x = sample_vector(&mut rng, space.dim(), 1.5).abs();
            let y = sample_vector(&mut rng, space.dim(), 1.5).abs();
            let g = half_power_product(&x, &y)?;
            let xy = TensorElement::outer(space.clone(), space.clone(), &x, &y)?;
            let gg = TensorElement::outer(space.clone(), space.clone(), &g, &g)?;
            let res = ioc_residual(&xy.sub(&gg)?)?;
            let bound = tol * space.norm(&x)? * space.norm(&y)?;
            let pass = res <= bound.max(1e-15);
            total += 1;
            if !pass {
                failures += 1;
            }
            table.push(vec![
                "product-difference".into(),
                space.label(),
                trial.to_string(),
                fmt_f64(res),
                fmt_f64(bound),
                pass.to_string(),
            ]);
        }
    }
    Ok(ExperimentReport {
        experiment: "ioc-membership".into(),
        seed: cfg.seed(),
        rows: table,
        summary: vec![summarize(
            "acceptance-9: off-diagonal ideal membership",
            failures,
            total,
            "",
        )],
        timing: vec![],
    })
}

/// The selftest: exact-identity suites of the calculus and the
/// concavification oracle, covering the functional-calculus and
/// oracle-equivalence acceptance clauses.
pub fn run_selftest(seed: u64) -> Result<Vec<ExperimentReport>> {
    Ok(vec![selftest_calculus(seed)?, selftest_oracle(seed)?])
}

/// Acceptance 7: functional-calculus identities at 1e-10 on seeded samples.
pub fn selftest_calculus(seed: u64) -> Result<ExperimentReport> {
    let mut rng = seeded_rng(seed);
    let tol = 1e-10;
    let samples = 1000;
    let mut table = Table::new(&["identity", "checks", "max_err", "pass"]);
    let mut failures = 0;
    let mut total = 0;

    let mut clause = |name: &str, max_err: f64, checks: usize, table: &mut Table| {
        let pass = max_err <= tol;
        total += 1;
        if !pass {
            failures += 1;
        }
        table.push(vec![
            name.into(),
            checks.to_string(),
            fmt_f64(max_err),
            pass.to_string(),
        ]);
    };

    // |x^{1/2}y^{1/2}| = |x|^{1/2}|y|^{1/2}
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = sample_vector(&mut rng, 3, 2.0);
        let y = sample_vector(&mut rng, 3, 2.0);
        let lhs = half_power_product(&x, &y)?.abs();
        let rhs = half_power_product(&x.abs(), &y.abs())?;
        for j in 0..3 {
            err = err.max((lhs[j] - rhs[j]).abs() / (1.0 + rhs[j].abs()));
        }
    }
    clause("modulus-of-product", err, samples, &mut table);

    // ‖x^{1/2}y^{1/2}‖ ≤ ‖x‖^{1/2}‖y‖^{1/2}
    let space = NormedLatticeSpace::lp(3, 2.0)?;
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = sample_vector(&mut rng, 3, 2.0);
        let y = sample_vector(&mut rng, 3, 2.0);
        let lhs = space.norm(&half_power_product(&x, &y)?)?;
        let rhs = space.norm(&x)?.sqrt() * space.norm(&y)?.sqrt();
        err = err.max((lhs - rhs).max(0.0) / (1.0 + rhs));
    }
    clause("product-norm-bound", err, samples, &mut table);

    // disjoint: x^{1/2}y^{1/2} = 0 and (x^p+y^p)^{1/p} = x+y
    let mut err: f64 = 0.0;
    for k in 0..samples {
        let raw = sample_vector(&mut rng, 4, 2.0).abs();
        let mut xa = raw.coords().to_vec();
        let mut ya = raw.coords().to_vec();
        for j in 0..4 {
            if (j + k) % 2 == 0 {
                xa[j] = 0.0;
            } else {
                ya[j] = 0.0;
            }
        }
        let (x, y): (LatticeVector, LatticeVector) = (xa.into(), ya.into());
        let prod = half_power_product(&x, &y)?;
        for j in 0..4 {
            err = err.max(prod[j].abs());
        }
        for p in [1.0, 2.0, 3.0] {
            let s = oplus(&x, &y, p)?;
            let plain = x.add(&y)?;
            for j in 0..4 {
                err = err.max((s[j] - plain[j]).abs() / (1.0 + plain[j].abs()));
            }
        }
    }
    clause("disjoint-identities", err, samples, &mut table);

    // distribution law and signed squares
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x1 = sample_vector(&mut rng, 3, 2.0);
        let x2 = sample_vector(&mut rng, 3, 2.0);
        let y = sample_vector(&mut rng, 3, 2.0);
        let lhs = half_power_product(&x1.add(&x2)?, &y)?;
        let a = half_power_product(&x1, &y)?;
        let b = half_power_product(&x2, &y)?;
        let rhs = oplus(&a, &b, 2.0)?;
        for j in 0..3 {
            err = err.max((lhs[j] - rhs[j]).abs() / (1.0 + lhs[j].abs()));
        }
        let r = half_power_product(&x1, &x1.abs())?;
        for j in 0..3 {
            err = err.max((r[j] - x1[j]).abs() / (1.0 + x1[j].abs()));
        }
    }
    clause("distribution-law", err, samples, &mut table);

    Ok(ExperimentReport {
        experiment: "selftest-calculus".into(),
        seed,
        rows: table,
        summary: vec![summarize(
            "acceptance-7: functional calculus identities",
            failures,
            total,
            " (tol 1e-10)",
        )],
        timing: vec![],
    })
}

/// Acceptance 6: cutting-plane seminorm vs the brute grid oracle at
/// resolution 128 on dim-2 instances across families, p = 2.
pub fn selftest_oracle(seed: u64) -> Result<ExperimentReport> {
    let mut rng = seeded_rng(seed);
    let tol = 2e-2;
    let mut table = Table::new(&["space", "x", "solver", "oracle", "rel_err", "pass"]);
    let mut failures = 0;
    let mut total = 0;
    for space in canonical_spaces(2) {
        for _ in 0..2 {
            let x = sample_generic_vector(&mut rng, 2);
            let solved = seminorm(&space, &x, 2.0)?;
            let oracle = seminorm_bruteforce_oracle(&space, &x, 2.0, 128)?;
            let rel = (solved.value - oracle).abs() / solved.value.max(1.0);
            let dual_value = solved.value;
            let pass = rel <= tol && oracle >= dual_value - 1e-9 * (1.0 + dual_value);
            total += 1;
            if !pass {
                failures += 1;
            }
            table.push(vec![
                space.label(),
                fmt_vec(x.coords()),
                fmt_f64(solved.value),
                fmt_f64(oracle),
                fmt_f64(rel),
                pass.to_string(),
            ]);
        }
    }
    Ok(ExperimentReport {
        experiment: "selftest-oracle".into(),
        seed,
        rows: table,
        summary: vec![summarize(
            "acceptance-6: oracle equivalence",
            failures,
            total,
            " (res 128, tol 2e-2)",
        )],
        timing: vec![],
    })
}
