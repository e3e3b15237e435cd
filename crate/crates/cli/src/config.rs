//! Experiment configuration: JSON in, defaults per experiment.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use lattice_square::NormedLatticeSpace;

pub const EXPERIMENTS: &[(&str, &str)] = &[
    (
        "lp-diagonal",
        "diagonal quotient norms on l_p against the l_{p/2} / l_1 closed forms",
    ),
    (
        "main-isometry",
        "2-concavification seminorm vs primal and dual diagonal quotient norms",
    ),
    ("atom-table", "concavification seminorm of basis atoms against ||e_i||^p"),
    (
        "al-renorm",
        "trinorm additivity on disjoint positives and the lower-2-estimate bound",
    ),
    ("duality-gap", "Fremlin bracket gaps and the cross-norm identity on dim-2 spaces"),
    (
        "basis-disjointness",
        "meet of distinct basis tensors vanishes; closed form vs simplex LP",
    ),
    ("estimate-constants", "lower/upper p-estimate constant searches with known answers"),
    (
        "ioc-membership",
        "residuals of antisymmetric and product-difference tensors in the off-diagonal ideal",
    ),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: String,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub spaces: Vec<NormedLatticeSpace>,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    /// A config with every field left to the experiment's defaults.
    pub fn named(experiment: &str) -> Self {
        ExperimentConfig {
            experiment: experiment.to_string(),
            spaces: vec![],
            dims: vec![],
            p: None,
            trials: None,
            seed: None,
            tolerances: BTreeMap::new(),
            output: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(s).context("parsing experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !EXPERIMENTS.iter().any(|(name, _)| *name == self.experiment) {
            bail!(
                "unknown experiment {:?}; valid names: {}",
                self.experiment,
                EXPERIMENTS
                    .iter()
                    .map(|(n, _)| *n)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        if let Some(t) = self.trials {
            if t == 0 {
                bail!("trials must be >= 1");
            }
        }
        for (name, tol) in &self.tolerances {
            if tol.is_nan() || *tol <= 0.0 {
                bail!("tolerance {name:?} must be positive, got {tol}");
            }
        }
        for d in &self.dims {
            if *d == 0 || *d > 8 {
                bail!("dims must lie in 1..=8, got {d}");
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(7)
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn tolerance_or(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}
