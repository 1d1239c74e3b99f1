//! Pipeline configuration: a flat `key=value` file whose keys mirror the
//! command-line flags. List-valued keys (`medline`, `ann`) may repeat.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use crate::annot::ValidationMode;
use crate::extract::EntityMode;
use crate::rank::{Algorithm, DegreeMode, RankParams};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub medline: Vec<PathBuf>,
    pub ann: Vec<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub rank: RankParams,
    pub algorithm: Algorithm,
    pub top_k: usize,
    pub min_weight: u64,
    pub collapse_mirrors: bool,
    pub entity_mode: EntityMode,
    pub validation: ValidationMode,
    pub out: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            medline: Vec::new(),
            ann: Vec::new(),
            lexicon: None,
            gazetteer: None,
            patterns: None,
            rank: RankParams::default(),
            algorithm: Algorithm::Weighted,
            top_k: 20,
            min_weight: 1,
            collapse_mirrors: false,
            entity_mode: EntityMode::default(),
            validation: ValidationMode::Lenient,
            out: PathBuf::from("out"),
        }
    }
}

fn parse_bool(key: &str, v: &str) -> anyhow::Result<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => bail!("{key}: expected true or false, got {v:?}"),
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> anyhow::Result<T> {
    v.parse().map_err(|_| anyhow::anyhow!("{key}: cannot parse {v:?}"))
}

impl PipelineConfig {
    /// Applies one setting. Relative paths are resolved against `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> anyhow::Result<()> {
        let path = || base.join(value);
        match key {
            "medline" => self.medline.push(path()),
            "ann" => self.ann.push(path()),
            "lexicon" => self.lexicon = Some(path()),
            "gazetteer" => self.gazetteer = Some(path()),
            "patterns" => self.patterns = Some(path()),
            "damping" => self.rank.d = num(key, value)?,
            "c" => self.rank.c = Some(num(key, value)?),
            "tol" => self.rank.tol = num(key, value)?,
            "max-iters" => self.rank.max_iters = num(key, value)?,
            "sum-normalize" => self.rank.sum_normalize = parse_bool(key, value)?,
            "degree-mode" => self.rank.degree_mode = value.parse::<DegreeMode>().map_err(anyhow::Error::msg)?,
            "algorithm" => self.algorithm = value.parse().map_err(anyhow::Error::msg)?,
            "top-k" => self.top_k = num(key, value)?,
            "min-weight" => self.min_weight = num(key, value)?,
            "collapse-mirrors" => self.collapse_mirrors = parse_bool(key, value)?,
            "entity-mode" => self.entity_mode = value.parse().map_err(anyhow::Error::msg)?,
            "strict" => {
                self.validation = if parse_bool(key, value)? {
                    ValidationMode::Strict
                } else {
                    ValidationMode::Lenient
                }
            }
            "out" => self.out = path(),
            _ => bail!("unknown configuration key {key:?}"),
        }
        Ok(())
    }

    /// Parses a configuration file body.
    pub fn parse(text: &str, base: &Path) -> anyhow::Result<Self> {
        let mut cfg = PipelineConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .with_context(|| format!("config line {}: expected key=value", i + 1))?;
            cfg.set(k.trim(), v.trim(), base)
                .with_context(|| format!("config line {}", i + 1))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.top_k == 0 {
            bail!("top-k must be at least 1");
        }
        self.rank.validate()?;
        let files = self
            .medline
            .iter()
            .chain(&self.ann)
            .chain(self.lexicon.iter())
            .chain(self.gazetteer.iter())
            .chain(self.patterns.iter());
        for p in files {
            if !p.is_file() {
                bail!("input file {} does not exist", p.display());
            }
        }
        Ok(())
    }

    /// `key=value` lines describing the settings that shape the outputs.
    /// The output directory is left out so runs into different directories
    /// stay comparable.
    pub fn snapshot(&self) -> Vec<(String, String)> {
        let list = |v: &[PathBuf]| v.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(",");
        let opt = |p: &Option<PathBuf>| p.as_ref().map_or_else(|| "<bundled>".to_string(), |p| p.display().to_string());
        vec![
            ("medline".into(), list(&self.medline)),
            ("ann".into(), list(&self.ann)),
            ("lexicon".into(), opt(&self.lexicon)),
            ("gazetteer".into(), opt(&self.gazetteer)),
            ("patterns".into(), opt(&self.patterns)),
            ("damping".into(), self.rank.d.to_string()),
            ("c".into(), self.rank.c.map_or_else(|| "none".to_string(), |c| c.to_string())),
            ("tol".into(), format!("{:e}", self.rank.tol)),
            ("max-iters".into(), self.rank.max_iters.to_string()),
            ("sum-normalize".into(), self.rank.sum_normalize.to_string()),
            ("degree-mode".into(), self.rank.degree_mode.name().into()),
            (
                "algorithm".into(),
                match self.algorithm {
                    Algorithm::Simple => "simple",
                    Algorithm::Weighted => "weighted",
                }
                .into(),
            ),
            ("top-k".into(), self.top_k.to_string()),
            ("min-weight".into(), self.min_weight.to_string()),
            ("collapse-mirrors".into(), self.collapse_mirrors.to_string()),
            (
                "entity-mode".into(),
                match self.entity_mode {
                    EntityMode::Gold => "gold",
                    EntityMode::Gazetteer => "gazetteer",
                    EntityMode::GoldPlusGazetteer => "gold+gazetteer",
                }
                .into(),
            ),
            ("strict".into(), (self.validation == ValidationMode::Strict).to_string()),
        ]
    }
}
