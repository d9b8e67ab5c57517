//! Run configuration: command-line flags over an optional TOML file over defaults.

use std::path::{Path, PathBuf};

use mnrs_core::{CountingMode, EntityDim, KeyScope};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Format;

pub const OUTPUT_DIR_ENV: &str = "MNRS_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "mnrs-out";

/// Every setting as optional, the shape of both the config file and the flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialConfig {
    pub corpus: Option<PathBuf>,
    pub groups: Option<Vec<String>>,
    pub mode: Option<String>,
    pub baseline_dir: Option<PathBuf>,
    pub entity: Option<String>,
    pub min_distinct: Option<u64>,
    pub top_k: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub workers: Option<usize>,
    pub taxonomy: Option<PathBuf>,
    pub key_scope: Option<String>,
    pub schema_version: Option<String>,
    pub tag: Option<String>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| Error::Usage(format!("{}: {}", path.display(), e.message())))
    }

    /// Fields set here win over `lower`.
    pub fn over(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            corpus: self.corpus.or(lower.corpus),
            groups: self.groups.or(lower.groups),
            mode: self.mode.or(lower.mode),
            baseline_dir: self.baseline_dir.or(lower.baseline_dir),
            entity: self.entity.or(lower.entity),
            min_distinct: self.min_distinct.or(lower.min_distinct),
            top_k: self.top_k.or(lower.top_k),
            output_dir: self.output_dir.or(lower.output_dir),
            formats: self.formats.or(lower.formats),
            workers: self.workers.or(lower.workers),
            taxonomy: self.taxonomy.or(lower.taxonomy),
            key_scope: self.key_scope.or(lower.key_scope),
            schema_version: self.schema_version.or(lower.schema_version),
            tag: self.tag.or(lower.tag),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub groups: Vec<String>,
    pub mode: CountingMode,
    pub baseline_dir: Option<PathBuf>,
    pub entity: EntityDim,
    pub min_distinct: u64,
    pub top_k: usize,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    /// 0 means one worker per core.
    pub workers: usize,
    pub taxonomy: Option<PathBuf>,
    pub key_scope: KeyScope,
    pub schema_version: String,
    pub tag: Option<String>,
}

impl RunConfig {
    /// Fills defaults and validates. `env_output_dir` is the environment's default
    /// output directory, used when neither flags nor file name one.
    pub fn resolve(p: PartialConfig, env_output_dir: Option<PathBuf>) -> Result<RunConfig> {
        let corpus = p.corpus.ok_or_else(|| {
            Error::Usage("no corpus given (--corpus or `corpus` in the config file)".into())
        })?;
        let groups: Vec<String> = p
            .groups
            .unwrap_or_else(|| vec!["BS".into()])
            .into_iter()
            .flat_map(|g| {
                g.split(',')
                    .map(|s| s.trim().to_string())
                    .collect::<Vec<_>>()
            })
            .filter(|g| !g.is_empty())
            .collect();
        if groups.is_empty() {
            return Err(Error::Usage("at least one target group is required".into()));
        }
        let mode = match p.mode {
            None => CountingMode::default(),
            Some(m) => CountingMode::parse(&m).ok_or_else(|| {
                Error::Usage(format!(
                    "unknown counting mode `{m}` (multiplicative, fractional, full-averaged, full-scaled)"
                ))
            })?,
        };
        let entity = match p.entity {
            None => EntityDim::Journal,
            Some(e) => EntityDim::parse(&e).ok_or_else(|| {
                Error::Usage(format!(
                    "unknown entity `{e}` (journal, country, institution, custom:FIELD)"
                ))
            })?,
        };
        let min_distinct = p.min_distinct.unwrap_or(1);
        if min_distinct < 1 {
            return Err(Error::Usage("min-distinct must be at least 1".into()));
        }
        let formats = match p.formats {
            None => vec![Format::Csv, Format::Markdown],
            Some(fs) => {
                let mut out = Vec::new();
                for f in fs.iter().flat_map(|f| f.split(',')) {
                    let f: Format = f.parse()?;
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
                out
            }
        };
        if formats.is_empty() {
            return Err(Error::Usage("no output formats".into()));
        }
        let key_scope = match p.key_scope {
            None => KeyScope::default(),
            Some(s) => KeyScope::parse(&s).ok_or_else(|| {
                Error::Usage(format!(
                    "unknown key scope `{s}` (category+doc_type+year, category+year, category+doc_type, category)"
                ))
            })?,
        };
        Ok(RunConfig {
            corpus,
            groups,
            mode,
            baseline_dir: p.baseline_dir,
            entity,
            min_distinct,
            top_k: p.top_k.unwrap_or(20),
            output_dir: p
                .output_dir
                .or(env_output_dir)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            formats,
            workers: p.workers.unwrap_or(0),
            taxonomy: p.taxonomy,
            key_scope,
            schema_version: p.schema_version.unwrap_or_else(|| "1".into()),
            tag: p.tag.map(|t| t.trim().to_string()),
        })
    }

    /// Echo for the run manifest. Worker count is left out: it does not affect outputs.
    pub fn to_json(&self) -> Value {
        json!({
            "corpus": self.corpus.display().to_string(),
            "groups": self.groups,
            "mode": self.mode.as_str(),
            "baseline_dir": self.baseline_dir.as_ref().map(|p| p.display().to_string()),
            "entity": self.entity.to_string(),
            "min_distinct": self.min_distinct,
            "top_k": self.top_k,
            "output_dir": self.output_dir.display().to_string(),
            "formats": self.formats.iter().map(|f| f.extension()).collect::<Vec<_>>(),
            "taxonomy": self.taxonomy.as_ref().map(|p| p.display().to_string()),
            "key_scope": self.key_scope.as_str(),
            "schema_version": self.schema_version,
            "tag": self.tag,
        })
    }
}
