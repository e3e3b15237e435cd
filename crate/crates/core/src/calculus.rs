//! Homogeneous functional calculus on basis lattices.
//!
//! For a lattice with 1-unconditional basis the calculus acts
//! coordinatewise. Powers follow the sign convention t^p = |t|^p·sign(t)
//! throughout, including p < 1.

use crate::error::{Error, Result};
use crate::vector::LatticeVector;

/// Signed power |t|^p · sign(t). Odd in t; 0 maps to 0.
pub fn signed_power(t: f64, p: f64) -> f64 {
    debug_assert!(p > 0.0, "signed_power requires p > 0");
    if t == 0.0 {
        0.0
    } else if t > 0.0 {
        t.powf(p)
    } else {
        -((-t).powf(p))
    }
}

/// Coordinatewise signed power of a vector.
pub fn signed_power_vec(x: &LatticeVector, p: f64) -> LatticeVector {
    LatticeVector::new(x.coords().iter().map(|&t| signed_power(t, p)).collect())
}

/// A continuous positively homogeneous function R^n → R of degree 1.
///
/// Construction samples the homogeneity identity f(λt) = λ·f(t), λ ≥ 0,
/// at relative tolerance 1e-12 and rejects functions that fail it.
pub struct HomogeneousFunction {
    arity: usize,
    eval: Box<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl HomogeneousFunction {
    pub fn new<F>(arity: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if arity == 0 {
            return Err(Error::NotHomogeneous("arity must be positive".into()));
        }
        let h = HomogeneousFunction {
            arity,
            eval: Box::new(f),
        };
        h.check_homogeneity()?;
        Ok(h)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[f64]) -> Result<f64> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        Ok((self.eval)(args))
    }

    fn check_homogeneity(&self) -> Result<()> {
        // Fixed deterministic sample: a small LCG over test points.
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        let lambdas = [0.0, 0.5, 1.0, 2.0, 7.25];
        for _ in 0..24 {
            let t: Vec<f64> = (0..self.arity).map(|_| next()).collect();
            let ft = (self.eval)(&t);
            for &l in &lambdas {
                let lt: Vec<f64> = t.iter().map(|&a| l * a).collect();
                let flt = (self.eval)(&lt);
                let err = (flt - l * ft).abs();
                if err > 1e-12 * (1.0 + (l * ft).abs()) {
                    return Err(Error::NotHomogeneous(format!(
                        "f(λt) = {flt}, λ·f(t) = {} at λ = {l}",
                        l * ft
                    )));
                }
            }
        }
        Ok(())
    }

    /// f(t_1,…,t_n) = t_i.
    pub fn projection(arity: usize, i: usize) -> Self {
        assert!(i < arity);
        HomogeneousFunction {
            arity,
            eval: Box::new(move |t| t[i]),
        }
    }

    /// f(t_1,…,t_n) = (t_1^p + … + t_n^p)^{1/p} with signed powers.
    pub fn signed_p_sum(arity: usize, p: f64) -> Self {
        HomogeneousFunction {
            arity,
            eval: Box::new(move |t| {
                let s: f64 = t.iter().map(|&a| signed_power(a, p)).sum();
                signed_power(s, 1.0 / p)
            }),
        }
    }

    pub fn max(arity: usize) -> Self {
        HomogeneousFunction {
            arity,
            eval: Box::new(|t| t.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        }
    }

    pub fn min(arity: usize) -> Self {
        HomogeneousFunction {
            arity,
            eval: Box::new(|t| t.iter().cloned().fold(f64::INFINITY, f64::min)),
        }
    }
}

/// Apply a homogeneous function coordinatewise: output j is
/// f(x_1[j], …, x_n[j]).
pub fn apply_homogeneous(
    f: &HomogeneousFunction,
    xs: &[LatticeVector],
) -> Result<LatticeVector> {
    if xs.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            got: xs.len(),
        });
    }
    let dim = xs[0].dim();
    for x in xs {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.dim(),
            });
        }
    }
    let mut out = vec![0.0; dim];
    let mut args = vec![0.0; xs.len()];
    for (j, slot) in out.iter_mut().enumerate() {
        for (k, x) in xs.iter().enumerate() {
            args[k] = x[j];
        }
        *slot = f.eval(&args)?;
    }
    Ok(LatticeVector::new(out))
}

/// Coordinatewise x^{1/2}·y^{1/2} with the sign convention.
///
/// Satisfies |x^{1/2}y^{1/2}| = |x|^{1/2}|y|^{1/2} and x^{1/2}|x|^{1/2} = x.
pub fn half_power_product(x: &LatticeVector, y: &LatticeVector) -> Result<LatticeVector> {
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
            .map(|(&a, &b)| signed_power(a, 0.5) * signed_power(b, 0.5))
            .collect(),
    ))
}
