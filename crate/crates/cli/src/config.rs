//! Experiment config: a top-level `seed`, an optional `out` directory and
//! exactly one subcommand table.

use std::path::{Path, PathBuf};

use cycle_factors::generators::ConstructionSpec;
use cycle_factors::lab::{PackerChoice, SweepConfig, Target};
use cycle_factors::layered::{FactorMode, LayeredOptions, LayeredSpec};
use cycle_factors::oracle::OracleConfig;
use cycle_factors::packer::PackerSettings;
use cycle_factors::stability::{SearchMode, SearchOptions, SizeRounding};
use cycle_factors::Fraction;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SUBCOMMANDS: [&str; 7] = ["generate", "oracle", "pack", "stability", "layered", "sweep", "witness"];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<GenerateCmd>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCmd>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pack: Option<PackCmd>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityCmd>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layered: Option<LayeredCmd>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessCmd>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateCmd {
    pub construction: ConstructionSpec,
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub ell: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCmd {
    #[serde(default)]
    pub construction: Option<ConstructionSpec>,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    pub ell: usize,
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub limit: Option<usize>,
    #[serde(default)]
    pub oracle: OracleConfig,
}

fn default_target() -> Target {
    Target::FACTOR
}

fn default_packer() -> PackerChoice {
    PackerChoice::Sublinear
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackCmd {
    #[serde(default)]
    pub construction: Option<ConstructionSpec>,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    pub ell: usize,
    #[serde(default = "default_target")]
    pub target: Target,
    #[serde(default)]
    pub p: f64,
    #[serde(default = "default_packer")]
    pub packer: PackerChoice,
    #[serde(default)]
    pub settings: PackerSettings,
    #[serde(default)]
    pub oracle: OracleConfig,
}

fn default_mode() -> SearchMode {
    SearchMode::Exhaustive
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityCmd {
    #[serde(default)]
    pub construction: Option<ConstructionSpec>,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    pub alpha: Fraction,
    pub beta: Fraction,
    #[serde(default)]
    pub rounding: SizeRounding,
    #[serde(default = "default_mode")]
    pub mode: SearchMode,
    #[serde(default)]
    pub options: SearchOptions,
}

fn default_factor_mode() -> FactorMode {
    FactorMode::Heuristic
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityCmd {
    pub eps: f64,
    pub d: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    200
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayeredCmd {
    #[serde(default)]
    pub instance: Option<PathBuf>,
    #[serde(default)]
    pub spec: Option<LayeredSpec>,
    #[serde(default = "default_factor_mode")]
    pub mode: FactorMode,
    #[serde(default)]
    pub options: LayeredOptions,
    #[serde(default)]
    pub regularity: Option<RegularityCmd>,
}

fn default_witness_trials() -> usize {
    500
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCmd {
    pub n: usize,
    pub ell: usize,
    pub c: f64,
    #[serde(default = "default_witness_trials")]
    pub trials: usize,
}

/// Parses a `--set` value as a TOML value, falling back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key just written"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Applies `key=value`. Keys without a known top-level head go into the
/// single subcommand table.
pub fn apply_override(root: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("override {assignment:?} is not key=value")))?;
    let key = key.trim();
    let mut path: Vec<&str> = key.split('.').collect();
    if path.iter().any(|s| s.is_empty()) {
        return Err(CliError::Validation(format!("override key {key:?} is malformed")));
    }
    let head = path[0];
    if head != "seed" && head != "out" && !SUBCOMMANDS.contains(&head) {
        let present: Vec<&str> = SUBCOMMANDS.iter().copied().filter(|s| root.contains_key(*s)).collect();
        match present.as_slice() {
            [one] => path.insert(0, one),
            _ => return Err(CliError::Validation(format!("override key {key:?} needs a subcommand prefix"))),
        }
    }
    let mut table = root;
    for seg in &path[..path.len() - 1] {
        let entry = table.entry(seg.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Validation(format!("override key {key:?}: {seg} is not a table")))?;
    }
    table.insert(path[path.len() - 1].to_string(), parse_value(raw.trim()));
    Ok(())
}

/// Reads, overrides and type-checks the config. Relative paths inside it
/// are resolved against the config file's directory.
pub fn load(path: &Path, overrides: &[String], seed: Option<u64>) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
    let mut root: toml::Table =
        text.parse().map_err(|e: toml::de::Error| CliError::Validation(format!("config {}: {e}", path.display())))?;
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    if let Some(s) = seed {
        root.insert("seed".into(), toml::Value::Integer(s as i64));
    }
    let present: Vec<&str> = SUBCOMMANDS.iter().copied().filter(|s| root.contains_key(*s)).collect();
    if present.len() != 1 {
        return Err(CliError::Validation(format!(
            "config must hold exactly one of {} tables, found {}",
            SUBCOMMANDS.join(", "),
            if present.is_empty() { "none".to_string() } else { present.join(", ") }
        )));
    }
    if present[0] == "sweep" {
        if let Some(t) = root.get_mut("sweep").and_then(|v| v.as_table_mut()) {
            if t.contains_key("seed") {
                return Err(CliError::Validation("sweep.seed: set the top-level seed instead".into()));
            }
        }
    }
    let mut cfg: ExperimentConfig = serde_path_to_error::deserialize(toml::Value::Table(root))
        .map_err(|e| {
            let inner = e.inner().to_string();
            CliError::Validation(format!("{}: {}", e.path(), inner.lines().next().unwrap_or_default()))
        })?;
    if let Some(s) = cfg.sweep.as_mut() {
        s.seed = cfg.seed;
    }
    if let Some(l) = cfg.layered.as_mut() {
        l.options.seed = cfg.seed;
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let fix = |p: &mut Option<PathBuf>, key: &str| -> Result<(), CliError> {
        if let Some(p) = p.as_mut() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
            if !p.is_file() {
                return Err(CliError::Validation(format!("{key}: file {} does not exist", p.display())));
            }
        }
        Ok(())
    };
    if let Some(c) = cfg.oracle.as_mut() {
        fix(&mut c.graph, "oracle.graph")?;
    }
    if let Some(c) = cfg.pack.as_mut() {
        fix(&mut c.graph, "pack.graph")?;
    }
    if let Some(c) = cfg.stability.as_mut() {
        fix(&mut c.graph, "stability.graph")?;
    }
    if let Some(c) = cfg.layered.as_mut() {
        fix(&mut c.instance, "layered.instance")?;
    }
    Ok(cfg)
}
