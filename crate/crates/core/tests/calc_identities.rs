//! Functional-calculus identities on seeded samples.
//!
//! These are the exact-identity suites: modulus multiplicativity, the norm
//! inequality for half-power products, disjoint p-sums, the square-root
//! distribution law, and the signed-square identities.

use lattice_square::sampling::{sample_vector, seeded_rng};
use lattice_square::*;

const SAMPLES: usize = 1000;
const TOL: f64 = 1e-10;

fn spaces() -> Vec<NormedLatticeSpace> {
    let mut v = sampling::canonical_spaces(3);
    v.push(NormedLatticeSpace::lp(3, f64::INFINITY).unwrap());
    v
}

use lattice_square::sampling;

#[test]
fn modulus_of_half_power_product() {
    // |x^{1/2} y^{1/2}| = |x|^{1/2} |y|^{1/2}, exactly.
    let mut rng = seeded_rng(101);
    for _ in 0..SAMPLES {
        let x = sample_vector(&mut rng, 3, 2.0);
        let y = sample_vector(&mut rng, 3, 2.0);
        let lhs = half_power_product(&x, &y).unwrap().abs();
        let rhs = half_power_product(&x.abs(), &y.abs()).unwrap();
        for j in 0..3 {
            assert!((lhs[j] - rhs[j]).abs() <= TOL * (1.0 + rhs[j].abs()));
        }
    }
}

#[test]
fn norm_of_half_power_product() {
    // ‖x^{1/2} y^{1/2}‖ ≤ ‖x‖^{1/2}·‖y‖^{1/2} in every family.
    let mut rng = seeded_rng(102);
    for space in spaces() {
        for _ in 0..SAMPLES / 4 {
            let x = sample_vector(&mut rng, 3, 2.0);
            let y = sample_vector(&mut rng, 3, 2.0);
            let prod = half_power_product(&x, &y).unwrap();
            let lhs = space.norm(&prod).unwrap();
            let rhs = space.norm(&x).unwrap().sqrt() * space.norm(&y).unwrap().sqrt();
            assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs} on {space}");
        }
    }
}

#[test]
fn disjoint_product_vanishes() {
    let mut rng = seeded_rng(103);
    for _ in 0..SAMPLES {
        let x = sample_vector(&mut rng, 4, 2.0);
        let mut xa = x.coords().to_vec();
        let mut ya = x.coords().to_vec();
        for j in 0..4 {
            if j % 2 == 0 {
                xa[j] = 0.0;
            } else {
                ya[j] = 0.0;
            }
        }
        let (x, y): (LatticeVector, LatticeVector) = (xa.into(), ya.into());
        assert!(is_disjoint(&x, &y).unwrap());
        let prod = half_power_product(&x, &y).unwrap();
        assert!(prod.is_zero());
    }
}

#[test]
fn nonneg_p_sums_stay_nonneg() {
    let mut rng = seeded_rng(104);
    for _ in 0..SAMPLES {
        let x = sample_vector(&mut rng, 3, 2.0).abs();
        let y = sample_vector(&mut rng, 3, 2.0).abs();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let s = oplus(&x, &y, p).unwrap();
            assert!(s.is_nonneg());
        }
    }
}

#[test]
fn disjoint_p_sum_is_plain_sum() {
    // (x^p + y^p)^{1/p} = x + y for disjoint nonnegative x, y, exactly.
    let mut rng = seeded_rng(105);
    for _ in 0..SAMPLES {
        let raw = sample_vector(&mut rng, 4, 2.0).abs();
        let mut xa = raw.coords().to_vec();
        let mut ya = raw.coords().to_vec();
        for j in 0..4 {
            if j < 2 {
                ya[j] = 0.0;
            } else {
                xa[j] = 0.0;
            }
        }
        let (x, y): (LatticeVector, LatticeVector) = (xa.into(), ya.into());
        for p in [1.0, 2.0, 3.5] {
            let s = oplus(&x, &y, p).unwrap();
            let plain = x.add(&y).unwrap();
            for j in 0..4 {
                assert!((s[j] - plain[j]).abs() <= TOL * (1.0 + plain[j].abs()));
            }
        }
    }
}

#[test]
fn square_root_distribution_law() {
    // (x1+x2)^{1/2} y^{1/2} = ((x1^{1/2}y^{1/2})^2 + (x2^{1/2}y^{1/2})^2)^{1/2}
    let mut rng = seeded_rng(106);
    for _ in 0..SAMPLES {
        let x1 = sample_vector(&mut rng, 3, 2.0);
        let x2 = sample_vector(&mut rng, 3, 2.0);
        let y = sample_vector(&mut rng, 3, 2.0);
        let lhs = half_power_product(&x1.add(&x2).unwrap(), &y).unwrap();
        let a = half_power_product(&x1, &y).unwrap();
        let b = half_power_product(&x2, &y).unwrap();
        let rhs = oplus(&a, &b, 2.0).unwrap();
        for j in 0..3 {
            assert!(
                (lhs[j] - rhs[j]).abs() <= 1e-10 * (1.0 + lhs[j].abs()),
                "{} vs {}",
                lhs[j],
                rhs[j]
            );
        }
    }
}

#[test]
fn signed_square_root_identity() {
    // x^{1/2}|x|^{1/2} = x and (x^2)^{1/2} = x under the sign convention.
    let mut rng = seeded_rng(107);
    for _ in 0..SAMPLES {
        let x = sample_vector(&mut rng, 3, 3.0);
        let r = half_power_product(&x, &x.abs()).unwrap();
        for j in 0..3 {
            assert!((r[j] - x[j]).abs() <= 1e-10 * (1.0 + x[j].abs()));
            let back = signed_power(signed_power(x[j], 2.0), 0.5);
            assert!((back - x[j]).abs() <= 1e-10 * (1.0 + x[j].abs()));
        }
    }
}

#[test]
fn bipolar_inequality_and_monotonicity() {
    let mut rng = seeded_rng(108);
    for space in spaces() {
        for _ in 0..SAMPLES / 10 {
            let x = sample_vector(&mut rng, 3, 2.0);
            let y = sample_vector(&mut rng, 3, 2.0);
            let pairing = x.dot(&y).unwrap();
            let bound = space.norm(&x).unwrap() * space.dual_norm(&y).unwrap();
            assert!(pairing <= bound + 1e-9 * (1.0 + bound.abs()));

            // |x| ≤ |z| coordinatewise ⟹ ‖x‖ ≤ ‖z‖ for norm and dual norm,
            // with independent per-coordinate inflation factors
            use rand::Rng;
            let z = LatticeVector::new(
                x.coords()
                    .iter()
                    .map(|t| t * rng.gen_range(1.0..3.0))
                    .collect::<Vec<_>>(),
            );
            assert!(x.abs_leq(&z));
            assert!(space.norm(&x).unwrap() <= space.norm(&z).unwrap() + 1e-12);
            assert!(space.dual_norm(&x).unwrap() <= space.dual_norm(&z).unwrap() + 1e-9);
        }
    }
}

#[test]
fn dual_norm_is_a_norm() {
    // homogeneity and triangle inequality, sampled per family
    let mut rng = seeded_rng(109);
    for space in spaces() {
        for _ in 0..40 {
            let x = sample_vector(&mut rng, 3, 2.0);
            let y = sample_vector(&mut rng, 3, 2.0);
            let dx = space.dual_norm(&x).unwrap();
            let dy = space.dual_norm(&y).unwrap();
            let dxy = space.dual_norm(&x.add(&y).unwrap()).unwrap();
            assert!(dxy <= dx + dy + 1e-8 * (1.0 + dx + dy));
            let d2 = space.dual_norm(&x.scale(-2.5)).unwrap();
            assert!((d2 - 2.5 * dx).abs() <= 1e-8 * (1.0 + dx));
        }
    }
}

#[test]
fn homogeneous_apply_is_lattice_homomorphism_in_f() {
    // join/meet of functions map to join/meet of images at fixed arguments
    let mut rng = seeded_rng(110);
    for _ in 0..50 {
        let x = sample_vector(&mut rng, 3, 2.0);
        let y = sample_vector(&mut rng, 3, 2.0);
        let fmax = HomogeneousFunction::max(2);
        let fmin = HomogeneousFunction::min(2);
        let jm = apply_homogeneous(&fmax, &[x.clone(), y.clone()]).unwrap();
        let mm = apply_homogeneous(&fmin, &[x.clone(), y.clone()]).unwrap();
        assert_eq!(jm, x.join(&y).unwrap());
        assert_eq!(mm, x.meet(&y).unwrap());
    }
}
