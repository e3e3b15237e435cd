use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize;
use crate::vector::LatticeVector;

/// Norm family of a finite-dimensional Banach lattice with 1-unconditional basis.
///
/// A closed enumeration rather than arbitrary callables, so that dual norms,
/// norming vectors, and atom norms all have decidable evaluation paths.
#[derive(Debug, Clone, PartialEq)]
pub enum NormFamily {
    /// ‖x‖ = (Σ|x_i|^p)^{1/p}, p ∈ [1, ∞].
    Lp { p: f64 },
    /// ‖x‖ = (Σ w_i|x_i|^p)^{1/p} with w_i > 0.
    WeightedLp { p: f64, weights: Vec<f64> },
    /// ‖x‖ = max(‖x‖_p, c·‖x‖_q), c > 0. Exists to provide spaces with
    /// nontrivial convexity and estimate constants.
    Interlace { p: f64, q: f64, c: f64 },
}

/// A finite-dimensional Banach lattice: a dimension plus a monotone norm.
///
/// The basis vectors e_i are atoms; the order is coordinatewise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub struct NormedLatticeSpace {
    dim: usize,
    family: NormFamily,
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidFamily(format!("exponent p = {p} must be >= 1")));
    }
    Ok(())
}

impl NormedLatticeSpace {
    pub fn new(dim: usize, family: NormFamily) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFamily("dimension must be positive".into()));
        }
        match &family {
            NormFamily::Lp { p } => check_exponent(*p)?,
            NormFamily::WeightedLp { p, weights } => {
                check_exponent(*p)?;
                if weights.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: weights.len(),
                    });
                }
                if weights.iter().any(|&w| w.is_nan() || w <= 0.0 || !w.is_finite()) {
                    return Err(Error::InvalidFamily("weights must be positive".into()));
                }
            }
            NormFamily::Interlace { p, q, c } => {
                check_exponent(*p)?;
                check_exponent(*q)?;
                if c.is_nan() || *c <= 0.0 || !c.is_finite() {
                    return Err(Error::InvalidFamily(format!("c = {c} must be > 0")));
                }
            }
        }
        Ok(NormedLatticeSpace { dim, family })
    }

    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        Self::new(dim, NormFamily::Lp { p })
    }

    pub fn weighted_lp(p: f64, weights: Vec<f64>) -> Result<Self> {
        let dim = weights.len();
        Self::new(dim, NormFamily::WeightedLp { p, weights })
    }

    pub fn interlace(dim: usize, p: f64, q: f64, c: f64) -> Result<Self> {
        Self::new(dim, NormFamily::Interlace { p, q, c })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    fn check_vec(&self, x: &LatticeVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// ‖x‖ for the ambient family.
    pub fn norm(&self, x: &LatticeVector) -> Result<f64> {
        self.check_vec(x)?;
        Ok(self.norm_abs_slice(x.coords()))
    }

    /// Norm of a slice, taking |x| first. No dimension check.
    pub(crate) fn norm_abs_slice(&self, x: &[f64]) -> f64 {
        match &self.family {
            NormFamily::Lp { p } => lp_norm_abs(x, *p),
            NormFamily::WeightedLp { p, weights } => weighted_lp_norm_abs(x, *p, weights),
            NormFamily::Interlace { p, q, c } => {
                lp_norm_abs(x, *p).max(c * lp_norm_abs(x, *q))
            }
        }
    }

    /// Dual norm sup{⟨x,y⟩ : ‖x‖ ≤ 1}.
    ///
    /// Analytic conjugate-exponent formulas for `Lp` and `WeightedLp`; a
    /// seeded 32-start projected-gradient ascent for `Interlace`.
    pub fn dual_norm(&self, y: &LatticeVector) -> Result<f64> {
        self.check_vec(y)?;
        Ok(match &self.family {
            NormFamily::Lp { p } => lp_norm_abs(y.coords(), conjugate_exponent(*p)),
            NormFamily::WeightedLp { p, weights } => {
                weighted_dual_norm_abs(y.coords(), *p, weights)
            }
            NormFamily::Interlace { .. } => self.dual_norm_numeric_abs(y.coords()),
        })
    }

    /// Numeric dual-norm evaluation by multi-start ascent over the positive
    /// part of the unit sphere. Works for every family; `Lp`/`WeightedLp`
    /// normally take the analytic route, this path exists for cross-checks.
    pub fn dual_norm_numeric(&self, y: &LatticeVector) -> Result<f64> {
        self.check_vec(y)?;
        Ok(self.dual_norm_numeric_abs(y.coords()))
    }

    fn dual_norm_numeric_abs(&self, y: &[f64]) -> f64 {
        let b: Vec<f64> = y.iter().map(|t| t.abs()).collect();
        if b.iter().all(|&t| t == 0.0) {
            return 0.0;
        }
        let (mut value, _) = optimize::max_linear_on_pos_sphere(self, &b, 32, 0x6475_616c);
        // The norming vector is another feasible point; keep the better one.
        if let Some(x) = self.norming_vector(&b) {
            let v: f64 = x.iter().zip(&b).map(|(a, t)| a * t).sum();
            value = value.max(v);
        }
        value
    }

    /// For z ≥ 0 returns x ≥ 0 with ‖x‖ = 1 and ⟨x,z⟩ = dual_norm(z).
    ///
    /// Closed forms for `Lp`, `WeightedLp`, and `Interlace(1,2,c)`; ascent
    /// fallback for other interlace exponents. Returns `None` for z = 0.
    pub(crate) fn norming_vector(&self, z: &[f64]) -> Option<Vec<f64>> {
        debug_assert!(z.iter().all(|&t| t >= 0.0));
        if z.iter().all(|&t| t == 0.0) {
            return None;
        }
        Some(match &self.family {
            NormFamily::Lp { p } => lp_norming(z, *p),
            NormFamily::WeightedLp { p, weights } => weighted_norming(z, *p, weights),
            NormFamily::Interlace { p, q, c } => {
                if *p == 1.0 && *q == 2.0 {
                    interlace_12_norming(z, *c)
                } else {
                    let (_, x) = optimize::max_linear_on_pos_sphere(self, z, 16, 0x6e6f_726d);
                    x
                }
            }
        })
    }

    /// A subgradient of the norm at t ≥ 0, t ≠ 0.
    pub(crate) fn norm_subgradient(&self, t: &[f64]) -> Vec<f64> {
        match &self.family {
            NormFamily::Lp { p } => lp_subgradient(t, *p),
            NormFamily::WeightedLp { p, weights } => {
                let n = weighted_lp_norm_abs(t, *p, weights);
                if *p == f64::INFINITY {
                    let i = argmax(&t.iter().zip(weights).map(|(a, w)| a * w).collect::<Vec<_>>());
                    let mut g = vec![0.0; t.len()];
                    g[i] = weights[i];
                    g
                } else if n == 0.0 {
                    weights.iter().map(|w| w.powf(1.0 / p)).collect()
                } else {
                    t.iter()
                        .zip(weights)
                        .map(|(a, w)| w * (a / n).powf(p - 1.0))
                        .collect()
                }
            }
            NormFamily::Interlace { p, q, c } => {
                let np = lp_norm_abs(t, *p);
                let nq = lp_norm_abs(t, *q);
                if np >= *c * nq {
                    lp_subgradient(t, *p)
                } else {
                    lp_subgradient(t, *q).iter().map(|g| c * g).collect()
                }
            }
        }
    }

    /// ‖e_i‖ for the i-th basis vector.
    pub fn basis_norm(&self, i: usize) -> f64 {
        assert!(i < self.dim);
        match &self.family {
            NormFamily::Lp { .. } => 1.0,
            NormFamily::WeightedLp { p, weights } => {
                if *p == f64::INFINITY {
                    weights[i]
                } else {
                    weights[i].powf(1.0 / p)
                }
            }
            NormFamily::Interlace { c, .. } => 1f64.max(*c),
        }
    }

    /// Short label used in tables, e.g. `lp(1.5)^3`.
    pub fn label(&self) -> String {
        match &self.family {
            NormFamily::Lp { p } => format!("lp({})^{}", fmt_exp(*p), self.dim),
            NormFamily::WeightedLp { p, weights } => {
                let w: Vec<String> = weights.iter().map(|x| x.to_string()).collect();
                format!("wlp({};{})", fmt_exp(*p), w.join(","))
            }
            NormFamily::Interlace { p, q, c } => {
                format!("interlace({},{};c={})^{}", fmt_exp(*p), fmt_exp(*q), c, self.dim)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }
}

impl std::fmt::Display for NormedLatticeSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn fmt_exp(p: f64) -> String {
    if p == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// Conjugate exponent: 1/p + 1/q = 1, with 1 ↔ ∞.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p == f64::INFINITY {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn argmax(t: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in t.iter().enumerate() {
        if v > t[best] {
            best = i;
        }
    }
    best
}

fn lp_norm_abs(x: &[f64], p: f64) -> f64 {
    if p == f64::INFINITY {
        x.iter().fold(0.0, |m, t| m.max(t.abs()))
    } else if p == 1.0 {
        x.iter().map(|t| t.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|t| t * t).sum::<f64>().sqrt()
    } else {
        x.iter()
            .map(|t| t.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

fn weighted_lp_norm_abs(x: &[f64], p: f64, w: &[f64]) -> f64 {
    if p == f64::INFINITY {
        x.iter()
            .zip(w)
            .fold(0.0, |m, (t, wi)| m.max(wi * t.abs()))
    } else {
        x.iter()
            .zip(w)
            .map(|(t, wi)| wi * t.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

fn weighted_dual_norm_abs(y: &[f64], p: f64, w: &[f64]) -> f64 {
    if p == 1.0 {
        y.iter()
            .zip(w)
            .fold(0.0, |m, (t, wi)| m.max(t.abs() / wi))
    } else if p == f64::INFINITY {
        y.iter().zip(w).map(|(t, wi)| t.abs() / wi).sum()
    } else {
        let q = conjugate_exponent(p);
        y.iter()
            .zip(w)
            .map(|(t, wi)| wi.powf(1.0 - q) * t.abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

fn lp_subgradient(t: &[f64], p: f64) -> Vec<f64> {
    if p == 1.0 {
        vec![1.0; t.len()]
    } else if p == f64::INFINITY {
        let i = argmax(t);
        let mut g = vec![0.0; t.len()];
        g[i] = 1.0;
        g
    } else {
        let n = lp_norm_abs(t, p);
        if n == 0.0 {
            return vec![1.0; t.len()];
        }
        t.iter().map(|a| (a / n).powf(p - 1.0)).collect()
    }
}

fn lp_norming(z: &[f64], p: f64) -> Vec<f64> {
    if p == 1.0 {
        let mut x = vec![0.0; z.len()];
        x[argmax(z)] = 1.0;
        x
    } else if p == f64::INFINITY {
        vec![1.0; z.len()]
    } else {
        let q = conjugate_exponent(p);
        let nq = lp_norm_abs(z, q);
        z.iter().map(|t| (t / nq).powf(q - 1.0)).collect()
    }
}

fn weighted_norming(z: &[f64], p: f64, w: &[f64]) -> Vec<f64> {
    if p == 1.0 {
        let ratios: Vec<f64> = z.iter().zip(w).map(|(t, wi)| t / wi).collect();
        let i = argmax(&ratios);
        let mut x = vec![0.0; z.len()];
        x[i] = 1.0 / w[i];
        x
    } else if p == f64::INFINITY {
        w.iter().map(|wi| 1.0 / wi).collect()
    } else {
        let q = conjugate_exponent(p);
        let raw: Vec<f64> = z
            .iter()
            .zip(w)
            .map(|(t, wi)| (t / wi).powf(q - 1.0))
            .collect();
        let n = weighted_lp_norm_abs(&raw, p, w);
        raw.iter().map(|a| a / n).collect()
    }
}

/// Norming vector for max(‖·‖_1, c·‖·‖_2): water-filling over the
/// intersection of the two balls. The active-set structure is x ∝ (z − θ)₊.
fn interlace_12_norming(z: &[f64], c: f64) -> Vec<f64> {
    let zmax = z.iter().cloned().fold(0.0f64, f64::max);
    // Pure l1 regime: the l2 constraint never binds inside the l1 ball.
    if c <= 1.0 {
        let mut x = vec![0.0; z.len()];
        x[argmax(z)] = 1.0;
        return x;
    }
    // Pure l2 face.
    let n2 = lp_norm_abs(z, 2.0);
    let cand: Vec<f64> = z.iter().map(|t| t / (c * n2)).collect();
    if lp_norm_abs(&cand, 1.0) <= 1.0 + 1e-12 {
        return cand;
    }
    // Both constraints active: bisect θ so that ‖(z−θ)₊‖₁/‖(z−θ)₊‖₂ = c.
    let ratio = |theta: f64| -> f64 {
        let v: Vec<f64> = z.iter().map(|t| (t - theta).max(0.0)).collect();
        let n2 = lp_norm_abs(&v, 2.0);
        if n2 == 0.0 {
            1.0
        } else {
            lp_norm_abs(&v, 1.0) / n2
        }
    };
    let (mut lo, mut hi) = (0.0, zmax);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let v: Vec<f64> = z.iter().map(|t| (t - theta).max(0.0)).collect();
    let n1 = lp_norm_abs(&v, 1.0);
    if n1 == 0.0 {
        let mut x = vec![0.0; z.len()];
        x[argmax(z)] = 1.0;
        return x;
    }
    v.iter().map(|t| t / n1).collect()
}

// ---------------------------------------------------------------------------
// JSON descriptor
// ---------------------------------------------------------------------------

/// Wire format: {"family": "lp"|"weighted_lp"|"interlace", "dim": n,
/// "p": …, "q": …, "c": …, "weights": […]}. Infinite exponents are the
/// string "inf".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub family: String,
    pub dim: usize,
    #[serde(with = "maybe_inf")]
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "maybe_inf_opt")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl TryFrom<SpaceDescriptor> for NormedLatticeSpace {
    type Error = Error;

    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        match d.family.as_str() {
            "lp" => NormedLatticeSpace::lp(d.dim, d.p),
            "weighted_lp" => {
                let weights = d
                    .weights
                    .ok_or_else(|| Error::InvalidFamily("weighted_lp requires weights".into()))?;
                if weights.len() != d.dim {
                    return Err(Error::DimensionMismatch {
                        expected: d.dim,
                        got: weights.len(),
                    });
                }
                NormedLatticeSpace::weighted_lp(d.p, weights)
            }
            "interlace" => {
                let q = d
                    .q
                    .ok_or_else(|| Error::InvalidFamily("interlace requires q".into()))?;
                let c = d
                    .c
                    .ok_or_else(|| Error::InvalidFamily("interlace requires c".into()))?;
                NormedLatticeSpace::interlace(d.dim, d.p, q, c)
            }
            other => Err(Error::InvalidFamily(format!("unknown family tag {other:?}"))),
        }
    }
}

impl From<NormedLatticeSpace> for SpaceDescriptor {
    fn from(s: NormedLatticeSpace) -> Self {
        match s.family {
            NormFamily::Lp { p } => SpaceDescriptor {
                family: "lp".into(),
                dim: s.dim,
                p,
                q: None,
                c: None,
                weights: None,
            },
            NormFamily::WeightedLp { p, weights } => SpaceDescriptor {
                family: "weighted_lp".into(),
                dim: s.dim,
                p,
                q: None,
                c: None,
                weights: Some(weights),
            },
            NormFamily::Interlace { p, q, c } => SpaceDescriptor {
                family: "interlace".into(),
                dim: s.dim,
                p,
                q: Some(q),
                c: Some(c),
                weights: None,
            },
        }
    }
}

mod maybe_inf {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum NumOrStr {
            Num(f64),
            Str(String),
        }
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(v) => Ok(v),
            NumOrStr::Str(s) => match s.to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
                other => Err(D::Error::custom(format!("not an exponent: {other:?}"))),
            },
        }
    }
}

mod maybe_inf_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::maybe_inf::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::maybe_inf")] f64);
        Option::<Wrap>::deserialize(d).map(|o| o.map(|w| w.0))
    }
}
