use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coordinate vector in the 1-unconditional basis of a space.
///
/// Lattice operations (modulus, meet, join) act coordinatewise and exactly.
/// The vector does not carry its space; operations that need a norm take the
/// space as an argument and check dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<f64>);

impl LatticeVector {
    pub fn new(coords: Vec<f64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        LatticeVector(vec![0.0; dim])
    }

    /// The i-th basis vector of a dim-dimensional space.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index out of range");
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        LatticeVector(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&t| t == 0.0)
    }

    /// Coordinatewise modulus |x|.
    pub fn abs(&self) -> Self {
        LatticeVector(self.0.iter().map(|t| t.abs()).collect())
    }

    /// Coordinatewise meet x ∧ y.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(LatticeVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.min(*b)).collect(),
        ))
    }

    /// Coordinatewise join x ∨ y.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(LatticeVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.max(*b)).collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(LatticeVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(LatticeVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        LatticeVector(self.0.iter().map(|t| alpha * t).collect())
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&t| t >= 0.0)
    }

    /// |x| ≤ |y| coordinatewise.
    pub fn abs_leq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| a.abs() <= b.abs())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.0.len() != other.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                got: other.0.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for LatticeVector {
    fn from(v: Vec<f64>) -> Self {
        LatticeVector(v)
    }
}

impl From<&[f64]> for LatticeVector {
    fn from(v: &[f64]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl std::ops::Index<usize> for LatticeVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// True iff x and y have disjoint supports: min(|x_j|, |y_j|) = 0 for all j.
///
/// Exact, no tolerance: inputs are constructed, not measured.
pub fn is_disjoint(x: &LatticeVector, y: &LatticeVector) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(x.0
        .iter()
        .zip(&y.0)
        .all(|(a, b)| a.abs().min(b.abs()) == 0.0))
}

/// True iff all vectors in the family are pairwise disjoint.
pub fn pairwise_disjoint(family: &[LatticeVector]) -> Result<bool> {
    for (k, x) in family.iter().enumerate() {
        for y in &family[k + 1..] {
            if !is_disjoint(x, y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
