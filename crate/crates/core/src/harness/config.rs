use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hypotheses::{
    interval_union_count, ConstrainedSpace, EnumeratedClass, Family, Hypothesis, LabeledExample, MaskedSpace, NestedClassSequence,
    VersionSpace,
};
use crate::oracles::{GammaOracle, NoiseModel, SearchPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    BinarySearchDemo,
    Cal,
    Larch,
    Seabel,
    Al,
    Alarch,
    Aalarch,
    PassiveBaseline,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BinarySearchDemo => "binary-search-demo",
            Algorithm::Cal => "cal",
            Algorithm::Larch => "larch",
            Algorithm::Seabel => "seabel",
            Algorithm::Al => "al",
            Algorithm::Alarch => "alarch",
            Algorithm::Aalarch => "aalarch",
            Algorithm::PassiveBaseline => "passive-baseline",
        }
    }

    fn realizable_only(self) -> bool {
        matches!(self, Algorithm::BinarySearchDemo | Algorithm::Cal | Algorithm::Larch | Algorithm::Seabel)
    }

    fn needs_enumerated(self) -> bool {
        matches!(self, Algorithm::Al | Algorithm::Alarch | Algorithm::Aalarch)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Thresholds,
    Intervals,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    #[default]
    Exact,
    Enumerated,
}

fn default_resolution() -> usize {
    201
}

/// Largest enumerated class a config may request.
pub const MAX_CLASS_SIZE: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub family: FamilyKind,
    /// Largest class index; ignored for thresholds (a single class).
    #[serde(default)]
    pub k_max: usize,
    #[serde(default)]
    pub backend: BackendKind,
    /// Breakpoint grid size of the enumerated backend.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_tau() -> f64 {
    1.0
}

/// One experiment: an algorithm run for every `(seed, epsilon)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub class: ClassSpec,
    pub target: Hypothesis,
    #[serde(default = "default_noise")]
    pub noise: NoiseModel,
    /// γ oracle for al / alarch; defaults to `constant(ν)`.
    #[serde(default)]
    pub gamma: Option<GammaOracle>,
    pub epsilons: Vec<f64>,
    pub delta: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Sample-size cap for aalarch.
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub cost_cap: Option<f64>,
    #[serde(default)]
    pub max_steps: Option<u64>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub search_policy: SearchPolicy,
    /// Constraints every run starts from (cal and passive-baseline).
    #[serde(default)]
    pub seed_constraints: Vec<LabeledExample>,
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_noise() -> NoiseModel {
    NoiseModel::Realizable
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| bad(e.to_string()))
    }

    /// Largest class index in use.
    pub fn k_max(&self) -> usize {
        match self.class.family {
            FamilyKind::Thresholds => 0,
            FamilyKind::Intervals => self.class.k_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.algorithm.name();
        if self.epsilons.is_empty() {
            return Err(bad("epsilons must list at least one value"));
        }
        for &e in &self.epsilons {
            if !(e > 0.0 && e < 1.0) {
                return Err(bad(format!("epsilon must lie in (0,1), got {e}")));
            }
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(bad(format!("delta must lie in (0,1), got {}", self.delta)));
        }
        if !(self.tau >= 1.0 && self.tau.is_finite()) {
            return Err(bad(format!("tau must be a finite value >= 1, got {}", self.tau)));
        }
        if self.seeds.is_empty() {
            return Err(bad("seeds must list at least one value"));
        }
        self.noise.validate().map_err(|e| bad(format!("noise: {e}")))?;
        if self.algorithm.realizable_only() && self.noise != NoiseModel::Realizable {
            return Err(bad(format!("{a} requires realizable noise")));
        }
        if self.class.resolution < 2 {
            return Err(bad(format!("class.resolution must be >= 2, got {}", self.class.resolution)));
        }
        match (self.class.family, &self.target) {
            (FamilyKind::Thresholds, Hypothesis::Threshold { .. }) => {}
            (FamilyKind::Thresholds, _) => return Err(bad("thresholds family needs a threshold target")),
            (FamilyKind::Intervals, Hypothesis::Intervals { intervals }) => {
                if intervals.count() > self.class.k_max {
                    return Err(bad(format!(
                        "target uses {} intervals but class.k_max is {}",
                        intervals.count(),
                        self.class.k_max
                    )));
                }
            }
            (FamilyKind::Intervals, _) => return Err(bad("intervals family needs an intervals target")),
        }
        if self.algorithm.needs_enumerated() && self.class.backend != BackendKind::Enumerated {
            return Err(bad(format!("{a} runs on the enumerated backend only")));
        }
        if self.class.backend == BackendKind::Enumerated && self.class.family == FamilyKind::Intervals {
            let size = interval_union_count(self.class.resolution, self.class.k_max);
            if size > MAX_CLASS_SIZE {
                return Err(bad(format!(
                    "enumerated class with resolution {} and k_max {} has {size} members (limit {MAX_CLASS_SIZE}); \
                     lower class.resolution or class.k_max",
                    self.class.resolution, self.class.k_max
                )));
            }
        }
        match self.algorithm {
            Algorithm::BinarySearchDemo if self.class.family != FamilyKind::Thresholds => {
                return Err(bad("binary-search-demo needs the thresholds family"));
            }
            Algorithm::Larch | Algorithm::Seabel | Algorithm::Alarch | Algorithm::Aalarch
                if self.class.family != FamilyKind::Intervals =>
            {
                return Err(bad(format!("{a} needs the nested intervals family")));
            }
            Algorithm::Aalarch => {
                match self.cost_cap {
                    Some(c) if c > 0.0 && c.is_finite() => {}
                    _ => return Err(bad("aalarch needs a positive cost_cap")),
                }
                if !matches!(self.n, Some(n) if n >= 1) {
                    return Err(bad("aalarch needs n >= 1"));
                }
            }
            _ => {}
        }
        if let Some(g) = &self.gamma {
            match *g {
                GammaOracle::Constant { nu } => {
                    GammaOracle::constant(nu).map_err(|e| bad(format!("gamma: {e}")))?;
                }
                GammaOracle::Rcn { eta_bar } => {
                    GammaOracle::rcn(eta_bar).map_err(|e| bad(format!("gamma: {e}")))?;
                }
                GammaOracle::Exact => {}
            }
        }
        Ok(())
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON form, with
    /// the output path cleared.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn gamma_oracle(&self) -> GammaOracle {
        self.gamma.unwrap_or(GammaOracle::Constant { nu: self.noise.nu() })
    }

    pub fn enumerated_class(&self) -> Result<Arc<EnumeratedClass>> {
        let c = match self.class.family {
            FamilyKind::Thresholds => EnumeratedClass::thresholds(self.class.resolution)?,
            FamilyKind::Intervals => EnumeratedClass::interval_unions(self.class.resolution, self.class.k_max)?,
        };
        Ok(Arc::new(c))
    }

    pub fn exact_family(&self) -> Family {
        match self.class.family {
            FamilyKind::Thresholds => Family::Thresholds,
            FamilyKind::Intervals => Family::Intervals { k: self.class.k_max },
        }
    }
}

/// Shared, immutable pieces built once per experiment.
#[derive(Clone, Debug)]
pub(crate) struct Prepared {
    pub enumerated: Option<Arc<EnumeratedClass>>,
}

impl Prepared {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let enumerated = match cfg.class.backend {
            BackendKind::Enumerated => Some(cfg.enumerated_class()?),
            BackendKind::Exact => None,
        };
        Ok(Self { enumerated })
    }

    pub fn sequence(&self, cfg: &ExperimentConfig) -> NestedClassSequence {
        match &self.enumerated {
            Some(c) => NestedClassSequence::enumerated(c.clone()),
            None => NestedClassSequence::exact_intervals(cfg.class.k_max),
        }
    }

    /// `H_{K_max}(seed_constraints)`.
    pub fn initial_space(&self, cfg: &ExperimentConfig) -> VersionSpace {
        match &self.enumerated {
            Some(c) => VersionSpace::Masked(MaskedSpace::constrained(c.clone(), cfg.k_max(), &cfg.seed_constraints)),
            None => VersionSpace::Constrained(ConstrainedSpace::new(cfg.exact_family(), &cfg.seed_constraints)),
        }
    }
}
