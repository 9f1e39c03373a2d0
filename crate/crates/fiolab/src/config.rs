//! Experiment configuration (TOML) and its content hash.
//!
//! Every report row carries [`ExperimentConfig::hash`]: the SHA-256 of
//! `"blob <len>\0" + canonical TOML`, where the canonical text is this
//! struct re-serialized with the output section cleared, so that the hash
//! names the computation and not where its results were written.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use fiolab_core::GridSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Scaling,
    WaveSweep,
    Atoms,
    Sharpness1d,
    Envelope,
    KernelDecay,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::WaveSweep => "wave-sweep",
            ExperimentKind::Atoms => "atoms",
            ExperimentKind::Sharpness1d => "sharpness-1d",
            ExperimentKind::Envelope => "envelope",
            ExperimentKind::KernelDecay => "kernel-decay",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "N")]
    pub samples: usize,
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.n, self.length, self.samples)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorConfig {
    /// `one`, `jap` or `compact_x`
    pub amplitude: String,
    pub m: f64,
    /// `linear`, `wave`, `anisotropic` or an expression
    pub phase: String,
    pub t: f64,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self { amplitude: "jap".into(), m: 0.0, phase: "wave".into(), t: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRange {
    pub min: usize,
    pub max: usize,
}

impl Default for LevelRange {
    fn default() -> Self {
        Self { min: 3, max: 7 }
    }
}

/// Parameter grid. `p = inf` is written `inf` in TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpaceGrid {
    /// `"B"` and/or `"F"`
    pub kinds: Vec<String>,
    pub s: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Also include the cell `q = p` for every `p`.
    pub q_equal_p: bool,
    pub times: Vec<f64>,
}

impl Default for SpaceGrid {
    fn default() -> Self {
        Self { kinds: vec!["B".into()], s: vec![0.0], p: vec![2.0], q: vec![2.0], q_equal_p: false, times: vec![1.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusConfig {
    /// `random`, `focusing`, `knapp` or `mixed`
    pub kind: String,
    pub size: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { kind: "random".into(), size: 10 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub plots: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    /// Box lengths for experiments that sweep `L` at fixed spacing.
    #[serde(default)]
    pub boxes: Vec<f64>,
    /// Envelope orders `N_env` reported by the envelope experiment.
    #[serde(default)]
    pub n_env: Vec<u32>,
    pub grid: GridConfig,
    #[serde(default)]
    pub operator: OperatorConfig,
    #[serde(default)]
    pub levels: LevelRange,
    #[serde(default)]
    pub space: SpaceGrid,
    #[serde(default)]
    pub corpus: CorpusConfig,
    /// Named tolerances; missing entries fall back to the experiment's
    /// defaults.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    /// The defaults used when no config file is given.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let base = |n, length, samples| Self {
            experiment: kind,
            seed: 1,
            boxes: Vec::new(),
            n_env: Vec::new(),
            grid: GridConfig { n, length, samples },
            operator: OperatorConfig::default(),
            levels: LevelRange::default(),
            space: SpaceGrid::default(),
            corpus: CorpusConfig::default(),
            tolerances: BTreeMap::new(),
            output: OutputConfig::default(),
        };
        match kind {
            ExperimentKind::Scaling => base(2, 4.0, 1024),
            ExperimentKind::WaveSweep => {
                let mut c = base(2, 8.0, 256);
                c.levels = LevelRange { min: 2, max: 4 };
                c.space = SpaceGrid {
                    kinds: vec!["B".into(), "F".into()],
                    s: vec![0.0, 1.0],
                    p: vec![0.8, 1.0, 2.0, 4.0, f64::INFINITY],
                    q: vec![2.0],
                    q_equal_p: true,
                    times: vec![0.5, 1.0],
                };
                c.corpus = CorpusConfig { kind: "mixed".into(), size: 20 };
                c
            }
            ExperimentKind::Atoms => {
                let mut c = base(2, 8.0, 512);
                c.space.p = vec![0.75, 1.0];
                c.corpus = CorpusConfig { kind: "atoms".into(), size: 50 };
                c
            }
            ExperimentKind::Sharpness1d => {
                let mut c = base(1, 512.0, 1 << 15);
                c.operator = OperatorConfig { amplitude: "one".into(), m: 0.0, phase: "abs(xi1) + x1*xi1".into(), t: 1.0 };
                c.space.p = vec![0.4, 0.45, 0.6, 0.75];
                c.boxes = vec![256.0, 512.0, 1024.0];
                c
            }
            ExperimentKind::Envelope => {
                let mut c = base(2, 4.0, 512);
                c.n_env = vec![0, 1, 2];
                c
            }
            ExperimentKind::KernelDecay => {
                let mut c = base(2, 1024.0, 2048);
                c.operator = OperatorConfig { amplitude: "one".into(), m: 0.0, phase: "wave".into(), t: 1.0 };
                c
            }
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: Self = toml::from_str(&text).map_err(|e| Error::format(path, e.message()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.grid.spec()?;
        if self.levels.min > self.levels.max {
            return Err(Error::Config(format!("level range {}..={} is empty", self.levels.min, self.levels.max)));
        }
        // Psi_j reaches psi_{j+1}, which must be resolved as well
        let top = match self.experiment {
            ExperimentKind::Scaling => spec.max_level() - 1,
            ExperimentKind::Envelope => spec.max_level(),
            _ => i32::MAX,
        };
        if self.levels.max as i32 > top {
            return Err(Error::Config(format!(
                "levels.max = {} exceeds {} for n = {}, L = {}, N = {}",
                self.levels.max, top, self.grid.n, self.grid.length, self.grid.samples
            )));
        }
        for kind in &self.space.kinds {
            if kind != "B" && kind != "F" {
                return Err(Error::Config(format!("space kind {kind:?} is not B or F")));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn canonical_toml(&self) -> String {
        let mut c = self.clone();
        c.output = OutputConfig::default();
        toml::to_string(&c).expect("config serializes")
    }

    /// Git-style content hash (SHA-256) of the canonical config text.
    pub fn hash(&self) -> String {
        let body = self.canonical_toml();
        let mut h = Sha256::new();
        h.update(format!("blob {}\0", body.len()).as_bytes());
        h.update(body.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
