//! Constructive `C_ell` packings in `G ∪ G(n, p)` for a host of minimum degree `m`.
//!
//! * [`high_degree`]: covering vertices of large degree with one cycle each.
//! * [`stars`]: disjoint stars closed through chains of random neighbours.
//! * [`odd`]: max-cut bipartition, dependent random choice paths and rounds of
//!   freshly revealed random edges for odd `ell`.
//! * [`even`]: greedy search for even cycles in the host alone.
//! * [`dispatch`]: the regime dispatcher combining the above.
//!
//! Every procedure returns what it built together with per-stage records.
//! Shortfalls are data, not errors; errors are reserved for violated
//! preconditions.

pub mod dispatch;
pub mod even;
pub mod high_degree;
pub mod odd;
pub mod stars;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::CyclePacking;

pub use dispatch::{sublinear_pack, Regime};
pub use even::even_greedy_pack;
pub use high_degree::{greedy_cover_high_degree, path_in_random_subgraph, split_high_degree, HighDegreeSplit};
pub use odd::{drc_path, max_cut_bipartition, odd_rounds_pack, DrcError, DrcPath, MaxCut, RoundPlan};
pub use stars::{expander_extend, star_chain_pack, star_chain_pack_traced, star_family, ChainTrace, Expansion, StarFamily};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PackError {
    #[error("cycle length {ell} is invalid: {reason}")]
    CycleLength { ell: usize, reason: &'static str },
    #[error("minimum degree {have} is below the required {need}")]
    MinDegree { have: usize, need: usize },
    #[error("maximum degree {have} exceeds the allowed {limit:.3}")]
    MaxDegree { have: usize, limit: f64 },
    #[error("m = {m} is outside the supported range [{lo:.3}, {hi:.3}]")]
    Range { m: usize, lo: f64, hi: f64 },
    #[error("round budget violated: t = {t} rounds of q = {q:.3e} need more than p = {p:.3e}")]
    Budget { t: usize, q: f64, p: f64 },
    #[error("config: {0}")]
    Config(String),
}

/// Tunable constants. Two profiles ship: [`PackerConfig::asymptotic`] keeps the
/// asymptotic values, [`PackerConfig::calibrated`] (the default) uses values
/// that make the procedures do something at a few hundred vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackerConfig {
    pub ell: usize,
    /// `V'` is the set of vertices of degree at least `n / high_degree_divisor`.
    pub high_degree_divisor: f64,
    /// Star leaf counts lie in `[ceil(eps m), floor(eps sqrt n)]`.
    pub leaf_eps: f64,
    /// Multiplier `s` in the reported star family target `s eps^2 n m`.
    pub star_s: f64,
    /// Maximum degree allowed by star chains, as a fraction of `n`.
    pub gamma: f64,
    /// Range constant `M`: star chains up to `M sqrt n`, rounds above.
    pub sqrt_range_constant: f64,
    /// Below `(ln n)^lower_range_exponent` cycles are harvested from the random part alone.
    pub lower_range_exponent: u32,
    /// Fraction of the vertices forming the harvesting region.
    pub harvest_fraction: f64,
    /// Dense vertices need at least `m / dense_degree_divisor` available neighbours.
    pub dense_degree_divisor: f64,
    /// Anchor sets have `ceil(m / anchor_size_divisor)` vertices.
    pub anchor_size_divisor: f64,
    /// Dependent random choice runs on `ceil(m / drc_subset_divisor)` dense vertices.
    pub drc_subset_divisor: f64,
    /// When no pivot passes the dense-neighbourhood test, search directly for
    /// dense vertices joined through common neighbours.
    pub drc_direct_fallback: bool,
    /// Let each round take anchors from whichever cut side has more free vertices.
    pub swap_sides: bool,
    /// Reserve only path vertices in a round; each closing edge may use any
    /// free neighbours of the path ends, claimed in build order.
    pub shared_anchors: bool,
    /// `C` in `q = C ln n / m^2`; when absent it is read off `p = C ln n / n`.
    pub round_q_constant: Option<f64>,
    /// Keep running rounds after the planned `t` while `q` fits in the remaining budget.
    pub extra_rounds: bool,
    /// `K` in the edge-count certificate `e > K v^(1 + 2/ell)` for even cycles.
    pub even_turan_constant: f64,
    /// Skip the degree and range hypotheses of the individual procedures.
    pub waive_hypotheses: bool,
    /// Finish short packings with cycles found greedily in the union graph.
    pub union_fallback: bool,
    /// Expansion budget of each path or cycle search.
    pub search_budget: u64,
    /// Mixed into every internal tie-break.
    pub seed: u64,
    /// Record wall-clock time per stage (makes output non-reproducible).
    pub record_timing: bool,
}

impl PackerConfig {
    /// Constants as they appear in the asymptotic argument.
    pub fn asymptotic(ell: usize) -> Self {
        let half_floor = (ell / 2).max(1) as f64;
        Self {
            ell,
            high_degree_divisor: 64.0 * half_floor,
            leaf_eps: 0.05,
            star_s: 8.0,
            gamma: 1.0 / (32.0 * half_floor),
            sqrt_range_constant: 16.0 * ell as f64,
            lower_range_exponent: ell as u32,
            harvest_fraction: 0.5,
            dense_degree_divisor: 16.0,
            anchor_size_divisor: 16.0,
            drc_subset_divisor: 8.0 * ell as f64,
            drc_direct_fallback: false,
            swap_sides: false,
            shared_anchors: false,
            round_q_constant: None,
            extra_rounds: false,
            even_turan_constant: if ell == 4 { 0.75 } else { 1.0 },
            waive_hypotheses: false,
            union_fallback: false,
            search_budget: 2_000_000,
            seed: 0,
            record_timing: false,
        }
    }

    /// Desk-scale defaults chosen by pilot runs at `n` in the hundreds.
    pub fn calibrated(ell: usize) -> Self {
        let half_floor = (ell / 2).max(1) as f64;
        Self {
            high_degree_divisor: 8.0 * half_floor,
            leaf_eps: 0.25,
            star_s: 1.0,
            gamma: 0.5,
            sqrt_range_constant: 1.0,
            lower_range_exponent: 1,
            drc_subset_divisor: 2.0,
            drc_direct_fallback: true,
            swap_sides: true,
            shared_anchors: true,
            extra_rounds: true,
            waive_hypotheses: true,
            union_fallback: true,
            ..Self::asymptotic(ell)
        }
    }

    pub fn validate(&self) -> Result<(), PackError> {
        if self.ell < 3 {
            return Err(PackError::CycleLength { ell: self.ell, reason: "must be at least 3" });
        }
        let positive = [
            ("high_degree_divisor", self.high_degree_divisor),
            ("leaf_eps", self.leaf_eps),
            ("star_s", self.star_s),
            ("gamma", self.gamma),
            ("sqrt_range_constant", self.sqrt_range_constant),
            ("harvest_fraction", self.harvest_fraction),
            ("dense_degree_divisor", self.dense_degree_divisor),
            ("anchor_size_divisor", self.anchor_size_divisor),
            ("drc_subset_divisor", self.drc_subset_divisor),
            ("even_turan_constant", self.even_turan_constant),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(PackError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.harvest_fraction > 1.0 {
            return Err(PackError::Config("harvest_fraction must be at most 1".into()));
        }
        if let Some(c) = self.round_q_constant {
            if !(c.is_finite() && c > 0.0) {
                return Err(PackError::Config(format!("round_q_constant must be positive, got {c}")));
            }
        }
        Ok(())
    }
}

/// Which constants a [`PackerSettings`] starts from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    #[default]
    Calibrated,
    Asymptotic,
}

/// Config-file form of [`PackerConfig`]: a profile plus optional overrides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PackerSettings {
    pub profile: Profile,
    pub high_degree_divisor: Option<f64>,
    pub leaf_eps: Option<f64>,
    pub star_s: Option<f64>,
    pub gamma: Option<f64>,
    pub sqrt_range_constant: Option<f64>,
    pub lower_range_exponent: Option<u32>,
    pub harvest_fraction: Option<f64>,
    pub dense_degree_divisor: Option<f64>,
    pub anchor_size_divisor: Option<f64>,
    pub drc_subset_divisor: Option<f64>,
    pub drc_direct_fallback: Option<bool>,
    pub swap_sides: Option<bool>,
    pub shared_anchors: Option<bool>,
    pub round_q_constant: Option<f64>,
    pub extra_rounds: Option<bool>,
    pub even_turan_constant: Option<f64>,
    pub waive_hypotheses: Option<bool>,
    pub union_fallback: Option<bool>,
    pub search_budget: Option<u64>,
    pub record_timing: Option<bool>,
}

impl PackerSettings {
    pub fn resolve(&self, ell: usize, seed: u64) -> Result<PackerConfig, PackError> {
        let mut c = match self.profile {
            Profile::Calibrated => PackerConfig::calibrated(ell),
            Profile::Asymptotic => PackerConfig::asymptotic(ell),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        take!(
            high_degree_divisor,
            leaf_eps,
            star_s,
            gamma,
            sqrt_range_constant,
            lower_range_exponent,
            harvest_fraction,
            dense_degree_divisor,
            anchor_size_divisor,
            drc_subset_divisor,
            drc_direct_fallback,
            swap_sides,
            shared_anchors,
            extra_rounds,
            even_turan_constant,
            waive_hypotheses,
            union_fallback,
            search_budget,
            record_timing
        );
        if self.round_q_constant.is_some() {
            c.round_q_constant = self.round_q_constant;
        }
        c.seed = seed;
        c.validate()?;
        Ok(c)
    }
}

/// Outcome of one stage of a packing procedure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub target: usize,
    pub achieved: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A packing plus the trace of how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackOutcome {
    pub packing: CyclePacking,
    pub target: usize,
    pub stages: Vec<StageRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
}

impl PackOutcome {
    pub fn new(ell: usize, target: usize) -> Self {
        Self { packing: CyclePacking::new(ell), target, stages: Vec::new(), regime: None }
    }

    pub fn achieved(&self) -> usize {
        self.packing.len()
    }

    pub fn shortfall(&self) -> usize {
        self.target.saturating_sub(self.packing.len())
    }

    pub fn success(&self) -> bool {
        self.shortfall() == 0
    }
}

/// Times a stage when the config asks for it.
#[derive(Clone, Copy)]
pub(crate) struct StageClock {
    start: Option<Instant>,
}

impl StageClock {
    pub(crate) fn start(cfg: &PackerConfig) -> Self {
        Self { start: cfg.record_timing.then(Instant::now) }
    }

    pub(crate) fn record(self, stage: &str, target: usize, achieved: usize, note: Option<String>) -> StageRecord {
        StageRecord {
            stage: stage.to_string(),
            target,
            achieved,
            elapsed_ms: self.start.map(|s| s.elapsed().as_secs_f64() * 1e3),
            note,
        }
    }
}

/// Natural logarithm of `n`, clamped below at 1 so that tiny graphs keep finite ranges.
pub(crate) fn ln_n(n: usize) -> f64 {
    (n.max(3) as f64).ln().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_differ_where_documented() {
        let p = PackerConfig::asymptotic(3);
        assert_eq!(p.high_degree_divisor, 64.0);
        assert_eq!(p.sqrt_range_constant, 48.0);
        assert_eq!(p.lower_range_exponent, 3);
        assert!(!p.waive_hypotheses);
        assert_eq!(PackerConfig::asymptotic(4).even_turan_constant, 0.75);
        assert_eq!(PackerConfig::asymptotic(5).anchor_size_divisor, 16.0);
        assert!(PackerConfig::calibrated(5).validate().is_ok());
    }

    #[test]
    fn settings_override_profile_values() {
        let s = PackerSettings { anchor_size_divisor: Some(32.0), ..Default::default() };
        let c = s.resolve(5, 9).unwrap();
        assert_eq!(c.anchor_size_divisor, 32.0);
        assert_eq!(c.seed, 9);
        assert_eq!(c.leaf_eps, PackerConfig::calibrated(5).leaf_eps);
        let bad = PackerSettings { leaf_eps: Some(-1.0), ..Default::default() };
        assert!(matches!(bad.resolve(3, 0), Err(PackError::Config(_))));
        assert!(matches!(PackerSettings::default().resolve(2, 0), Err(PackError::CycleLength { .. })));
    }
}
