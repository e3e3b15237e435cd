//! Seminorm axioms, oracle consistency, and estimate-transfer properties for
//! the p-concavification solver.

use lattice_square::sampling::{sample_generic_vector, sample_vector, seeded_rng};
use lattice_square::*;

#[test]
fn seminorm_axioms_on_concavified_operations() {
    // ‖α⊙x‖_(p) = |α|·‖x‖_(p), triangle inequality for ⊕, monotone in |x|.
    let mut rng = seeded_rng(21);
    let spaces = [
        NormedLatticeSpace::lp(2, 1.5).unwrap(),
        NormedLatticeSpace::lp(2, 3.0).unwrap(),
        NormedLatticeSpace::interlace(2, 1.0, 2.0, 1.0).unwrap(),
        NormedLatticeSpace::weighted_lp(3.0, vec![1.0, 2.0]).unwrap(),
    ];
    let p = 2.0;
    for space in &spaces {
        for _ in 0..6 {
            let x = sample_vector(&mut rng, 2, 1.5);
            let y = sample_vector(&mut rng, 2, 1.5);
            let nx = seminorm(space, &x, p).unwrap().value;
            let ny = seminorm(space, &y, p).unwrap().value;

            let alpha: f64 = -1.7;
            let ax = odot(alpha, &x, p).unwrap();
            let nax = seminorm(space, &ax, p).unwrap().value;
            assert!(
                (nax - alpha.abs() * nx).abs() <= 1e-6 * (1.0 + nx),
                "odot homogeneity on {space}: {nax} vs {}",
                alpha.abs() * nx
            );

            let s = oplus(&x, &y, p).unwrap();
            let ns = seminorm(space, &s, p).unwrap().value;
            assert!(
                ns <= nx + ny + 1e-6 * (1.0 + nx + ny),
                "oplus triangle on {space}: {ns} vs {nx}+{ny}"
            );

            // monotone: |x| ≤ |x| + |y| so seminorm must not decrease
            let bigger = x.abs().add(&y.abs()).unwrap();
            let nb = seminorm(space, &bigger, p).unwrap().value;
            assert!(nx <= nb + 1e-6 * (1.0 + nb));
        }
    }
}

#[test]
fn dual_certificate_is_feasible_on_samples() {
    let mut rng = seeded_rng(22);
    let space = NormedLatticeSpace::lp(3, 3.0).unwrap();
    let x = sample_generic_vector(&mut rng, 3);
    let p = 2.0;
    let r = seminorm(&space, &x, p).unwrap();
    for _ in 0..500 {
        let u = sample_vector(&mut rng, 3, 2.0).abs();
        let pairing: f64 = r
            .dual_certificate
            .iter()
            .zip(u.coords())
            .map(|(a, b)| a * b)
            .sum();
        let root = LatticeVector::new(u.coords().iter().map(|t| t.sqrt()).collect());
        let nu = space.norm(&root).unwrap().powi(2);
        assert!(pairing <= nu + 1e-9 * (1.0 + nu));
    }
    // value sits between dual pairing and primal cost
    let primal_cost: f64 = r
        .primal_certificate
        .iter()
        .map(|v| space.norm(v).unwrap().powi(2))
        .sum();
    assert!(r.value <= primal_cost + 1e-12);
    assert!(primal_cost - r.value <= r.gap + 1e-12);
}

#[test]
fn oracle_consistency_across_families_dim2() {
    // Cutting-plane value vs brute grid at resolution 128, p = 2.
    let mut rng = seeded_rng(23);
    for space in sampling::canonical_spaces(2) {
        let x = sample_generic_vector(&mut rng, 2);
        let solved = seminorm(&space, &x, 2.0).unwrap();
        let oracle = seminorm_bruteforce_oracle(&space, &x, 2.0, 128).unwrap();
        assert!(
            (solved.value - oracle).abs() <= 2e-2 * solved.value.max(1.0),
            "{space}: solver {} vs oracle {}",
            solved.value,
            oracle
        );
        // the oracle is an upper bound: never below the dual certificate
        let dual_value: f64 = solved
            .dual_certificate
            .iter()
            .zip(x.coords())
            .map(|(a, b)| a * b.abs().powi(2))
            .sum();
        assert!(oracle >= dual_value - 1e-9 * (1.0 + dual_value));
    }
}

use lattice_square::sampling;

#[test]
fn lower_estimate_transfers_to_the_concavification() {
    // l_q with q <= p has the lower p-estimate with M = 1, hence the
    // concavified norm is additive on disjoint families.
    let space = NormedLatticeSpace::lp(3, 1.5).unwrap();
    let fam = [
        LatticeVector::new(vec![0.9, 0.0, 0.0]),
        LatticeVector::new(vec![0.0, 0.4, 1.2]),
    ];
    let r = verify_estimate_transfer(&space, 2.0, &fam, Some(1.0)).unwrap();
    assert!(r.slack >= -1e-6, "lower estimate violated: {:?}", r);
    // with M = 1 both sides agree (AL behaviour)
    assert!((r.left - r.right).abs() <= 1e-6 * (1.0 + r.left));
}

#[test]
fn p_estimate_basis_identification() {
    // For l_q^n, q <= p, normalized basis: ‖Σ a_i ⊙ e_i‖_(p) = Σ|a_i|,
    // i.e. ‖x‖_(p) = Σ|x_i|^p for the coordinate vector x.
    let mut rng = seeded_rng(24);
    for q in [1.0, 1.5] {
        let space = NormedLatticeSpace::lp(3, q).unwrap();
        for _ in 0..10 {
            let x = sample_vector(&mut rng, 3, 1.5);
            let r = seminorm(&space, &x, 2.0).unwrap();
            let expect: f64 = x.coords().iter().map(|t| t * t).sum();
            assert!(
                (r.value - expect).abs() <= 1e-3 * expect.max(1e-9),
                "q={q}: {} vs {}",
                r.value,
                expect
            );
        }
    }
}

#[test]
fn trinorm_equivalence_constants() {
    // ‖x‖ ≤ trinorm(x) ≤ C·‖x‖ with C the lower-1-estimate witness bound.
    let mut rng = seeded_rng(25);
    for space in sampling::canonical_spaces(3) {
        let c = lower_estimate_constant(&space, 1.0, 800, 3)
            .unwrap()
            .best_constant_lower_bound;
        for _ in 0..20 {
            let x = sample_vector(&mut rng, 3, 2.0);
            let tri = al_trinorm(&space, &x).unwrap();
            let n = space.norm(&x).unwrap();
            assert!(n <= tri + 1e-10 * (1.0 + tri));
            assert!(
                tri <= c * n * (1.0 + 1e-7),
                "{space}: trinorm {tri} > C·norm {} (C = {c})",
                c * n
            );
        }
    }
}

#[test]
fn oracle_dim3_small_resolution() {
    let space = NormedLatticeSpace::lp(3, 2.0).unwrap();
    let x: LatticeVector = vec![1.0, 0.8, 0.6].into();
    // p = 2 on l2: the value is ‖x‖²; a coarse grid brackets it from above.
    let solved = seminorm(&space, &x, 2.0).unwrap().value;
    let oracle = seminorm_bruteforce_oracle(&space, &x, 2.0, 8).unwrap();
    assert!(oracle >= solved - 1e-9);
    assert!(oracle <= solved * 1.2);
}
