//! Acceptance suite: one test per criterion, each driving the corresponding
//! experiment at its pinned tolerance and printing one pass/fail line.
//!
//! Criteria and tolerances are fixed here in code; configs only carry seeds
//! and sizes. Run with `cargo test -p labcli --test acceptance -- --nocapture`
//! to see the lines.

use labcli::config::ExperimentConfig;
use labcli::experiments::{run_experiment, selftest_calculus, selftest_oracle};
use labcli::table::ExperimentReport;

fn report_line(tag: &str, report: &ExperimentReport) -> bool {
    let ok = report.passed();
    for clause in &report.summary {
        println!(
            "ACCEPTANCE {tag} [{}] {}: {}",
            if clause.passed { "PASS" } else { "FAIL" },
            clause.criterion,
            clause.detail
        );
    }
    ok
}

#[test]
fn criterion_01_lp_diagonal_identity() {
    // p ∈ {1, 1.5, 2, 3, 4}, dims 2–3, 20 seeded u per cell, 1e-2 relative.
    let mut cfg = ExperimentConfig::named("lp-diagonal");
    cfg.seed = Some(7);
    cfg.trials = Some(20);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("1", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_02_main_isometry() {
    // 50 seeded x for each of l_{1.5}^3, l_3^3, interlace(1,2,1) dim 2,
    // weighted l_3 (1,2,1); discrepancy ≤ 1e-2 relative.
    let mut cfg = ExperimentConfig::named("main-isometry");
    cfg.seed = Some(7);
    cfg.trials = Some(50);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("2", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_03_atom_norms_exact() {
    // ‖e_i‖_(p) = ‖e_i‖^p to 1e-12 relative across families, p ∈ {1.5,2,3}.
    let mut cfg = ExperimentConfig::named("atom-table");
    cfg.seed = Some(7);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("3", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_04_fremlin_bracket() {
    // dim-2 spaces: bracket gap ≤ 1e-3 relative on 50 seeded tensors per
    // family; cross-norm within 1e-3 relative.
    let mut cfg = ExperimentConfig::named("duality-gap");
    cfg.seed = Some(7);
    cfg.trials = Some(50);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("4", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_05_basis_tensor_disjointness() {
    // tensor meets vanish to 1e-8 for all distinct basis pairs, dims ≤ 4;
    // closed form equals the simplex LP to 1e-9.
    let mut cfg = ExperimentConfig::named("basis-disjointness");
    cfg.seed = Some(7);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("5", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_06_oracle_equivalence() {
    // cutting-plane seminorm vs brute grid (resolution 128) within 2e-2
    // relative on dim-2 instances across families, p = 2.
    let report = selftest_oracle(7).unwrap();
    assert!(report_line("6", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_07_functional_calculus_identities() {
    // calculus identities hold to 1e-10 on 1000 seeded samples.
    let report = selftest_calculus(7).unwrap();
    assert!(report_line("7", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_08_al_renorming() {
    // trinorm exactly additive on disjoint positives; lower-2-estimate bound
    // on l_{1.5}^3 with p = 2 within 1e-3 on 50 samples.
    let mut cfg = ExperimentConfig::named("al-renorm");
    cfg.seed = Some(7);
    cfg.trials = Some(50);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("8", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_09_ideal_membership() {
    // residuals of antisymmetric and product-difference elements bounded by
    // 1e-6·‖x‖‖y‖ on seeded pairs.
    let mut cfg = ExperimentConfig::named("ioc-membership");
    cfg.seed = Some(7);
    cfg.trials = Some(50);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("9", &report), "{:#?}", report.summary);
}

#[test]
fn criterion_10_estimate_constants() {
    // lower_estimate_constant(l_p, p) = 1 ± 1e-9; on l_1 with p = 2 the bound
    // never exceeds 1 + 1e-9 over 2000 trials.
    let mut cfg = ExperimentConfig::named("estimate-constants");
    cfg.seed = Some(7);
    cfg.trials = Some(2000);
    let report = run_experiment(&cfg).unwrap();
    assert!(report_line("10", &report), "{:#?}", report.summary);
}
