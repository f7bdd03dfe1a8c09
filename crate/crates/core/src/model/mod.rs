//! Concrete monoids with twist, and evaluation of diagrams in them.

pub mod algebra;
pub mod checks;
pub mod free_module;
pub mod semantics;

use std::fmt::Debug;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::report::Mode;

pub use algebra::{AlgebraBackend, AlgebraValidation, TwistKind};
pub use free_module::{Convention, FreeModuleBackend};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("backend configuration: {0}")]
    Config(String),
    #[error("level {level} is too large for {backend}")]
    LevelTooLarge { level: usize, backend: String },
}

/// Outcome of comparing two maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal { mode: Mode, points: u64 },
    Differ { witness: String },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }
}

/// A monoid `(K, η, μ)` with a twist `t` in some monoidal category, where
/// maps `K^{⋄a} -> K^{⋄b}` can be built and compared.
pub trait MonoidWithTwist {
    type Map: Clone + Debug;

    fn name(&self) -> String;

    /// Whether maps out of or into `K^{⋄level}` can be realized.
    fn supports_level(&self, level: usize) -> bool;

    fn identity(&self, level: usize) -> Self::Map;
    /// `η: I -> K`.
    fn unit(&self) -> Self::Map;
    /// `μ: K ⋄ K -> K`.
    fn multiplication(&self) -> Self::Map;
    /// `t: K ⋄ K -> K ⋄ K`.
    fn twist(&self) -> Self::Map;

    /// `then ∘ first`.
    fn compose(&self, first: &Self::Map, then: &Self::Map) -> Self::Map;
    /// `K^{⋄left} ⋄ f ⋄ K^{⋄right}`.
    fn whisker(&self, left: usize, f: &Self::Map, right: usize) -> Self::Map;
    fn levels(&self, f: &Self::Map) -> (usize, usize);
    fn compare(&self, f: &Self::Map, g: &Self::Map) -> Comparison;

    /// `f ⋄ g`.
    fn tensor(&self, f: &Self::Map, g: &Self::Map) -> Self::Map {
        let (_, fb) = self.levels(f);
        let (ga, _) = self.levels(g);
        self.compose(&self.whisker(0, f, ga), &self.whisker(fb, g, 0))
    }

    /// `acc` followed by `K^{⋄left} ⋄ g ⋄ K^{⋄right}`.
    fn apply_slice(&self, acc: &Self::Map, left: usize, g: &Self::Map, right: usize) -> Self::Map {
        self.compose(acc, &self.whisker(left, g, right))
    }

    /// Seed used for sampled comparisons, if any.
    fn sample_seed(&self) -> Option<u64> {
        None
    }
}

/// A backend definition file.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BackendSpec {
    Algebra {
        name: Option<String>,
        p: u32,
        dim: usize,
        /// `e_i e_j = Σ_l structure[(i*dim + j)*dim + l] e_l`.
        structure: Vec<u32>,
        unit: Option<Vec<u32>>,
    },
    FreeModule {
        modulus: u32,
        base_size: u32,
        convention: Option<String>,
        samples: Option<usize>,
        seed: Option<u64>,
    },
}

/// A backend built from a definition file.
#[derive(Clone, Debug)]
pub enum Backend {
    Algebra(AlgebraBackend),
    FreeModule(FreeModuleBackend),
}

impl BackendSpec {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        toml::from_str(text).map_err(|e| ModelError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn build(&self) -> Result<Backend, ModelError> {
        match self {
            BackendSpec::Algebra { name, p, dim, structure, unit } => Ok(Backend::Algebra(AlgebraBackend::new(
                name.clone().unwrap_or_else(|| format!("algebra over Z/{p} of dimension {dim}")),
                *p,
                *dim,
                structure,
                unit.as_deref(),
                AlgebraValidation::Strict,
                TwistKind::Swap,
            )?)),
            BackendSpec::FreeModule { modulus, base_size, convention, samples, seed } => {
                let conv = match convention.as_deref() {
                    None | Some("nested") => Convention::Nested,
                    Some("reversed") => Convention::Reversed,
                    Some(other) => return Err(ModelError::Config(format!("unknown convention '{other}'"))),
                };
                let b = FreeModuleBackend::new(*modulus, *base_size, conv)?;
                let seed = seed.unwrap_or(b.seed());
                Ok(Backend::FreeModule(b.with_sampling(samples.unwrap_or(free_module::DEFAULT_SAMPLES), seed)))
            }
        }
    }
}
