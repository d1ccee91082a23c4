//! Monte Carlo sweeps over `p`, first-moment witnesses for the bipartite
//! lower bound, and minimum-degree classification of instances.

use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{enumerate_cycles, expected_cycle_count, verify_packing, CyclePacking};
use crate::generators::{complete_multipartite, perturb, ConstructionSpec, GeneratorError, PerturbedGraph};
use crate::graph::Graph;
use crate::oracle::{max_disjoint_cycles_exact, OracleConfig};
use crate::packer::{
    even_greedy_pack, greedy_cover_high_degree, odd_rounds_pack, split_high_degree, star_chain_pack, sublinear_pack,
    PackError, PackOutcome, PackerSettings, Regime,
};
use crate::rng::{derive_seed, streams};
use crate::scalar::Fraction;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid sweep: {0}")]
    Config(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Pack(#[from] PackError),
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
    #[error("packer returned an invalid packing: {0}")]
    InvalidPacking(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackerChoice {
    Oracle,
    Sublinear,
    StarChain,
    OddRounds,
    EvenGreedy,
    GreedyHighDegree,
}

impl PackerChoice {
    pub fn name(self) -> &'static str {
        match self {
            Self::Oracle => "oracle",
            Self::Sublinear => "sublinear",
            Self::StarChain => "star_chain",
            Self::OddRounds => "odd_rounds",
            Self::EvenGreedy => "even_greedy",
            Self::GreedyHighDegree => "greedy_high_degree",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorWord {
    Factor,
}

/// Number of cycles to pack, or `"factor"` for `floor(n / ell)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Count(usize),
    Named(FactorWord),
}

impl Target {
    pub const FACTOR: Target = Target::Named(FactorWord::Factor);

    pub fn resolve(self, n: usize, ell: usize) -> usize {
        match self {
            Target::Count(m) => m,
            Target::Named(FactorWord::Factor) => n / ell,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Grid {
    Explicit { values: Vec<f64> },
    /// `c ln n / n` for each `c`.
    LogMultiples { c: Vec<f64> },
}

impl Grid {
    pub fn points(&self, n: usize) -> Vec<f64> {
        match self {
            Grid::Explicit { values } => values.clone(),
            Grid::LogMultiples { c } => {
                let scale = (n as f64).ln() / n as f64;
                c.iter().map(|c| (c * scale).min(1.0)).collect()
            }
        }
    }
}

fn default_trials() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub construction: ConstructionSpec,
    pub ell: usize,
    pub target: Target,
    pub grid: Grid,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub packer: PackerChoice,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub settings: PackerSettings,
    #[serde(default)]
    pub oracle: OracleConfig,
    /// Adds wall-clock times to the report, which then differs between runs.
    #[serde(default)]
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<Vec<f64>, LabError> {
        if self.trials == 0 {
            return Err(LabError::Config("trials must be at least 1".into()));
        }
        if self.ell < 3 {
            return Err(LabError::Config(format!("cycle length {} is below 3", self.ell)));
        }
        let points = self.grid.points(self.construction.n());
        if points.is_empty() {
            return Err(LabError::Config("grid is empty".into()));
        }
        if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(LabError::Config(format!("grid value {p} is not a probability")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Config("grid must be strictly increasing".into()));
        }
        self.settings.resolve(self.ell, self.seed)?;
        Ok(points)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub p: f64,
    pub trial: usize,
    pub success: bool,
    pub target: usize,
    pub achieved: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Seeds of one trial. The instance and the random edges depend on the
/// trial index only, so trials at different `p` share their uniforms and
/// the random graphs are nested as `p` grows.
pub fn trial_seeds(master: u64, trial: usize) -> (u64, u64) {
    (
        derive_seed(master, &[streams::TRIAL, streams::INSTANCE, trial as u64]),
        derive_seed(master, &[streams::TRIAL, streams::PERTURB, trial as u64]),
    )
}

/// Packs with the chosen packer; the packing is checked against the union.
pub fn run_packer(
    choice: PackerChoice,
    pg: &PerturbedGraph,
    ell: usize,
    target: usize,
    settings: &PackerSettings,
    oracle: &OracleConfig,
    seed: u64,
) -> Result<PackOutcome, LabError> {
    let cfg = settings.resolve(ell, seed)?;
    let out = match choice {
        PackerChoice::Oracle => {
            let res = max_disjoint_cycles_exact(pg.union(), ell, Some(target), oracle)
                .map_err(|e| LabError::OracleUnavailable(e.to_string()))?;
            let mut out = PackOutcome::new(ell, target);
            out.packing = res.packing;
            out
        }
        PackerChoice::Sublinear => sublinear_pack(pg, target, &cfg)?,
        PackerChoice::StarChain => star_chain_pack(pg, target, &cfg)?,
        PackerChoice::OddRounds => odd_rounds_pack(pg, target, &cfg)?,
        PackerChoice::EvenGreedy => even_greedy_pack(pg.union(), ell, target, &cfg)?,
        PackerChoice::GreedyHighDegree => {
            let split = split_high_degree(pg.base(), &cfg);
            greedy_cover_high_degree(pg, &split.high, target, &cfg)
        }
    };
    check(pg.union(), &out.packing)?;
    Ok(out)
}

fn check(g: &Graph, packing: &CyclePacking) -> Result<(), LabError> {
    let report = verify_packing(g, packing);
    if report.is_valid() {
        Ok(())
    } else {
        Err(LabError::InvalidPacking(format!("{:?}", report.violations)))
    }
}

/// One trial at probability `p`. Errors are returned, not recorded.
pub fn run_trial(cfg: &SweepConfig, p: f64, trial: usize) -> Result<TrialOutcome, LabError> {
    let (inst_seed, edge_seed) = trial_seeds(cfg.seed, trial);
    let g = cfg.construction.build(inst_seed)?;
    let target = cfg.target.resolve(g.n(), cfg.ell);
    let pg = perturb(&g, p, edge_seed)?;
    let out = run_packer(cfg.packer, &pg, cfg.ell, target, &cfg.settings, &cfg.oracle, edge_seed)?;
    Ok(TrialOutcome {
        p,
        trial,
        success: out.achieved() >= target,
        target,
        achieved: out.achieved(),
        regime: out.regime,
        error: None,
    })
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    /// Trials that ended in an error; they count as failures.
    pub errors: usize,
    pub freq: f64,
    pub lo: f64,
    pub hi: f64,
    pub mean_achieved: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub n: usize,
    /// Minimum-degree ratio of the construction, exact where known.
    pub alpha: Fraction,
    pub target: usize,
    pub points: Vec<PointSummary>,
    /// Where the frequency first passes 1/2, by linear interpolation.
    pub crossing: Option<f64>,
    pub outcomes: Vec<TrialOutcome>,
}

/// First upward pass of `freq` through 1/2, interpolated linearly.
pub fn crossing(points: &[PointSummary]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.freq < 0.5 && b.freq >= 0.5 {
            Some(a.p + (0.5 - a.freq) / (b.freq - a.freq) * (b.p - a.p))
        } else {
            None
        }
    })
}

fn construction_alpha(spec: &ConstructionSpec, g: &Graph) -> Fraction {
    spec.alpha().unwrap_or_else(|| {
        if g.n() == 0 {
            Fraction::new(0, 1)
        } else {
            Fraction(Ratio::new(g.min_degree() as i64, g.n() as i64))
        }
    })
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport, LabError> {
    let points = cfg.validate()?;
    let g0 = cfg.construction.build(trial_seeds(cfg.seed, 0).0)?;
    let n = g0.n();
    let target = cfg.target.resolve(n, cfg.ell);
    let mut summaries = Vec::with_capacity(points.len());
    let mut outcomes = Vec::with_capacity(points.len() * cfg.trials);
    for &p in &points {
        let start = Instant::now();
        let row: Vec<TrialOutcome> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                run_trial(cfg, p, t).unwrap_or_else(|e| TrialOutcome {
                    p,
                    trial: t,
                    success: false,
                    target,
                    achieved: 0,
                    regime: None,
                    error: Some(e.to_string()),
                })
            })
            .collect();
        let successes = row.iter().filter(|o| o.success).count();
        let (lo, hi) = wilson_interval(successes, cfg.trials, Z95);
        summaries.push(PointSummary {
            p,
            trials: cfg.trials,
            successes,
            errors: row.iter().filter(|o| o.error.is_some()).count(),
            freq: successes as f64 / cfg.trials as f64,
            lo,
            hi,
            mean_achieved: row.iter().map(|o| o.achieved as f64).sum::<f64>() / cfg.trials as f64,
            elapsed_ms: cfg.record_timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        });
        outcomes.extend(row);
    }
    Ok(SweepReport {
        alpha: construction_alpha(&cfg.construction, &g0),
        config: cfg.clone(),
        n,
        target,
        crossing: crossing(&summaries),
        points: summaries,
        outcomes,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    ell: usize,
    alpha: String,
    p: String,
    trials: usize,
    successes: usize,
    freq: String,
    lo: String,
    hi: String,
    packer: &'a str,
    seed: u64,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for pt in &self.points {
            w.serialize(CsvRow {
                n: self.n,
                ell: self.config.ell,
                alpha: self.alpha.to_string(),
                p: pt.p.to_string(),
                trials: pt.trials,
                successes: pt.successes,
                freq: format!("{:.6}", pt.freq),
                lo: format!("{:.6}", pt.lo),
                hi: format!("{:.6}", pt.hi),
                packer: self.config.packer.name(),
                seed: self.config.seed,
            })
            .expect("in-memory CSV write");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessStat {
    pub mean: f64,
    /// Sample standard deviation over trials.
    pub sd: f64,
    pub expected: f64,
    /// `|mean - expected|` in units of `sd / sqrt(trials)`; zero when both agree exactly.
    pub z: f64,
}

impl WitnessStat {
    fn new(values: &[f64], expected: f64) -> Self {
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = if values.len() > 1 {
            values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        let sd = var.sqrt();
        let se = sd / k.sqrt();
        let gap = (mean - expected).abs();
        let z = if se > 0.0 {
            gap / se
        } else if gap < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { mean, sd, expected, z }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.z <= sigmas
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub ell: usize,
    pub c: f64,
    pub p: f64,
    pub a_size: usize,
    pub b_size: usize,
    pub trials: usize,
    pub seed: u64,
    /// Vertices of `B` without random neighbours in `B`.
    pub isolated_in_b: WitnessStat,
    /// Copies of `C_ell` made of random edges inside `B`.
    pub cycles_in_b: WitnessStat,
}

/// Trials on `K_{n/ell, n - n/ell} ∪ G(n, p)` with `p = c ln n / n`.
pub fn bipartite_witnesses(n: usize, ell: usize, c: f64, trials: usize, seed: u64) -> Result<WitnessReport, LabError> {
    if ell < 3 || n == 0 || n % ell != 0 {
        return Err(LabError::Config(format!("ell = {ell} must be at least 3 and divide n = {n}")));
    }
    if trials == 0 {
        return Err(LabError::Config("trials must be at least 1".into()));
    }
    let a_size = n / ell;
    let b_size = n - a_size;
    let p = (c * (n as f64).ln() / n as f64).clamp(0.0, 1.0);
    let g = complete_multipartite(&[a_size, b_size])?;
    let b: Vec<usize> = (a_size..n).collect();
    let per_trial: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let pg = perturb(&g, p, derive_seed(seed, &[streams::TRIAL, t as u64])).expect("p is a probability");
            let inside = pg.random_part().induced(&b);
            let isolated = (0..b_size).filter(|&v| inside.degree(v) == 0).count() as f64;
            let cycles = enumerate_cycles(&inside, ell, None).cycles.len() as f64;
            (isolated, cycles)
        })
        .collect();
    let iso: Vec<f64> = per_trial.iter().map(|x| x.0).collect();
    let cyc: Vec<f64> = per_trial.iter().map(|x| x.1).collect();
    Ok(WitnessReport {
        n,
        ell,
        c,
        p,
        a_size,
        b_size,
        trials,
        seed,
        isolated_in_b: WitnessStat::new(&iso, b_size as f64 * (1.0 - p).powi(b_size as i32 - 1)),
        cycles_in_b: WitnessStat::new(&cyc, expected_cycle_count(b_size, ell, p)),
    })
}

/// Regions of the minimum-degree ratio with a common threshold order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdColumn {
    /// `alpha = 0`: `n^{-(ell-1)/ell} (log n)^{1/ell}`.
    Zero,
    /// `0 < alpha < 1/ell`: `n^{-(ell-1)/ell}`.
    Sparse,
    /// `alpha = 1/ell`: `log n / n`.
    AtInverse,
    /// `1/ell < alpha < upper`: `1/n`.
    Middle,
    /// `alpha >= upper`: no random edges needed.
    Deterministic,
}

impl ThresholdColumn {
    pub fn threshold(self) -> &'static str {
        match self {
            Self::Zero => "n^{-(ell-1)/ell} (log n)^{1/ell}",
            Self::Sparse => "n^{-(ell-1)/ell}",
            Self::AtInverse => "log n / n",
            Self::Middle => "1/n",
            Self::Deterministic => "0",
        }
    }
}

/// `1/2` for even `ell`, `(ell + 1) / (2 ell)` for odd `ell`.
pub fn upper_boundary(ell: usize) -> Fraction {
    if ell % 2 == 0 {
        Fraction::new(1, 2)
    } else {
        Fraction::new(ell as i64 + 1, 2 * ell as i64)
    }
}

pub fn classify(alpha: Fraction, ell: usize) -> ThresholdColumn {
    let a = alpha.0;
    let inv = Ratio::new(1, ell as i64);
    if a <= Ratio::from_integer(0) {
        ThresholdColumn::Zero
    } else if a < inv {
        ThresholdColumn::Sparse
    } else if a == inv {
        ThresholdColumn::AtInverse
    } else if a < upper_boundary(ell).0 {
        ThresholdColumn::Middle
    } else {
        ThresholdColumn::Deterministic
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityNote {
    pub n: usize,
    pub ell: usize,
    pub min_degree: usize,
    pub alpha: Fraction,
    /// `(n / ell) ceil(ell / 2)`.
    pub degree_bound: Fraction,
    /// Minimum degree alone forces a `C_ell`-factor (needs `ell | n`).
    pub factor_guaranteed: bool,
    pub column: ThresholdColumn,
    pub threshold: String,
    pub inverse_boundary: Fraction,
    pub upper_boundary: Fraction,
}

/// Minimum degree against the deterministic bound and the threshold columns.
/// Random constructions are built from `seed`.
pub fn degree_bound_feasibility(spec: &ConstructionSpec, ell: usize, seed: u64) -> Result<FeasibilityNote, LabError> {
    if ell < 3 {
        return Err(LabError::Config(format!("cycle length {ell} is below 3")));
    }
    let g = spec.build(seed)?;
    let n = g.n();
    let alpha = construction_alpha(spec, &g);
    let degree_bound = Fraction(Ratio::new((n * ell.div_ceil(2)) as i64, ell as i64));
    let column = classify(alpha, ell);
    Ok(FeasibilityNote {
        n,
        ell,
        min_degree: g.min_degree(),
        alpha,
        factor_guaranteed: n % ell == 0 && Ratio::from_integer(g.min_degree() as i64) >= degree_bound.0,
        degree_bound,
        column,
        threshold: column.threshold().to_string(),
        inverse_boundary: Fraction::new(1, ell as i64),
        upper_boundary: upper_boundary(ell),
    })
}
