//! Seeded sampling helpers shared by experiments and tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fremlin::TensorElement;
use crate::space::NormedLatticeSpace;
use crate::vector::LatticeVector;

pub use crate::optimize::seeded_rng;

/// Uniform coordinates in [-scale, scale].
pub fn sample_vector(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> LatticeVector {
    LatticeVector::new((0..dim).map(|_| rng.gen_range(-scale..scale)).collect())
}

/// Uniform coordinates in [lo, hi] with 0 ≤ lo < hi.
pub fn sample_nonneg_vector(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> LatticeVector {
    LatticeVector::new((0..dim).map(|_| rng.gen_range(lo..hi)).collect())
}

/// A vector bounded away from zero in every coordinate, with random signs.
pub fn sample_generic_vector(rng: &mut ChaCha8Rng, dim: usize) -> LatticeVector {
    LatticeVector::new(
        (0..dim)
            .map(|_| {
                let mag = rng.gen_range(0.2..1.4f64);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect(),
    )
}

/// Random tensor with entries uniform in [-scale, scale].
pub fn sample_tensor(
    rng: &mut ChaCha8Rng,
    left: &NormedLatticeSpace,
    right: &NormedLatticeSpace,
    scale: f64,
) -> TensorElement {
    let mut t = TensorElement::zeros(left.clone(), right.clone());
    for i in 0..left.dim() {
        for j in 0..right.dim() {
            t.set_entry(i, j, rng.gen_range(-scale..scale));
        }
    }
    t
}

/// The standard sweep families at a given dimension.
pub fn canonical_spaces(dim: usize) -> Vec<NormedLatticeSpace> {
    let mut v = vec![
        NormedLatticeSpace::lp(dim, 1.0).unwrap(),
        NormedLatticeSpace::lp(dim, 1.5).unwrap(),
        NormedLatticeSpace::lp(dim, 2.0).unwrap(),
        NormedLatticeSpace::lp(dim, 3.0).unwrap(),
        NormedLatticeSpace::lp(dim, 4.0).unwrap(),
        NormedLatticeSpace::interlace(dim, 1.0, 2.0, 1.0).unwrap(),
    ];
    let weights: Vec<f64> = (0..dim).map(|i| if i % 2 == 1 { 2.0 } else { 1.0 }).collect();
    v.push(NormedLatticeSpace::weighted_lp(3.0, weights).unwrap());
    v
}
