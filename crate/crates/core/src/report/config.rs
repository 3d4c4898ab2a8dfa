//! Run configuration for the `validate`, `analyze` and `synth` commands.
//!
//! Paths in a config file resolve against the file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::freq::DeviationMode;
use crate::lexicon::Priority;
use crate::synth::ChannelParams;

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_TOP_K: usize = 5;
pub const DEFAULT_SYNTH_WORDS: usize = 50_000;
pub const DEFAULT_SYNTH_SEED: u64 = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconConfig {
    pub paths: Vec<PathBuf>,
    /// Translation accuracy of the lists was confirmed by a translator.
    #[serde(default)]
    pub attested: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptMapConfig {
    pub path: PathBuf,
    pub source_language: String,
    pub target_language: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    #[serde(default = "default_words")]
    pub words: usize,
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub concept_budget: BTreeMap<String, f64>,
    /// Empty means one default machine and one default human channel.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<ChannelParams>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            words: DEFAULT_SYNTH_WORDS,
            density: default_density(),
            seed: DEFAULT_SYNTH_SEED,
            concept_budget: BTreeMap::new(),
            channels: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    /// Lexicon sources per language code.
    #[serde(default)]
    pub lexicons: BTreeMap<String, LexiconConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept_map: Option<ConceptMapConfig>,
    /// Reference frequency table per language code.
    #[serde(default)]
    pub frequency_tables: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub priority: Priority,
    /// Grouping keys; `language` and `translation_kind` are always available.
    #[serde(default = "default_factors")]
    pub factors: Vec<String>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub deviation_mode: DeviationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthConfig>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_factors() -> Vec<String> {
    vec!["translation_kind".into()]
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_top_k() -> usize {
    DEFAULT_TOP_K
}

fn default_output() -> PathBuf {
    PathBuf::from("report")
}

fn default_words() -> usize {
    DEFAULT_SYNTH_WORDS
}

fn default_density() -> f64 {
    0.1
}

fn default_seed() -> u64 {
    DEFAULT_SYNTH_SEED
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifest: None,
            lexicons: BTreeMap::new(),
            concept_map: None,
            frequency_tables: BTreeMap::new(),
            priority: Priority::default(),
            factors: default_factors(),
            alpha: DEFAULT_ALPHA,
            top_k: DEFAULT_TOP_K,
            output_dir: default_output(),
            deviation_mode: DeviationMode::default(),
            synth: None,
            base_dir: PathBuf::new(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut config: RunConfig =
            serde_json::from_str(text).map_err(|source| Error::Config {
                path: path.to_path_buf(),
                source,
            })?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, path)
    }

    /// Absolute or config-relative path.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        crate::ingest::resolve(&self.base_dir, path)
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// Range checks on the scalar settings.
    pub fn check_settings(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParam(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidParam("top_k must be at least 1".into()));
        }
        if self.factors.is_empty() {
            return Err(Error::InvalidParam("at least one grouping factor is required".into()));
        }
        if let Some(dup) = self
            .factors
            .iter()
            .enumerate()
            .find_map(|(i, f)| self.factors[..i].contains(f).then_some(f))
        {
            return Err(Error::InvalidParam(format!("factor {dup:?} listed twice")));
        }
        Ok(())
    }

    pub fn synth_or_default(&self) -> SynthConfig {
        self.synth.clone().unwrap_or_default()
    }
}
