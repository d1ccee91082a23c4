//! Regime dispatcher for packing `m` cycles.
//!
//! Vertices of large host degree are set aside as `V'`. If there are at least
//! `m` of them they are covered directly. Otherwise `m' = m - |V'|` cycles are
//! packed in the rest, with the procedure chosen by the size of `m'`:
//! below `(ln n)^k` they come from the random part alone, up to `M sqrt n`
//! from star chains, and above from greedy even cycles or odd rounds. The
//! set-aside vertices then top the packing up.

use serde::{Deserialize, Serialize};

use crate::cycles::{find_cycle, Cycle, CycleSearch};
use crate::generators::{seeded_permutation, PerturbedGraph};
use crate::graph::{full_set, vertex_set};
use crate::rng::derive_seed;

use super::even::even_greedy_pack;
use super::high_degree::{cover_with, split_high_degree};
use super::odd::odd_rounds_pack;
use super::stars::star_chain_pack;
use super::{ln_n, PackError, PackOutcome, PackerConfig, StageClock, StageRecord};

const HARVEST_STREAM: u64 = 0x6861_7276;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Empty,
    HighDegree,
    Harvest,
    StarChain,
    EvenGreedy,
    OddRounds,
}

pub fn sublinear_pack(pg: &PerturbedGraph, m: usize, cfg: &PackerConfig) -> Result<PackOutcome, PackError> {
    cfg.validate()?;
    let ell = cfg.ell;
    let n = pg.n();
    let mut out = PackOutcome::new(ell, m);
    if m == 0 {
        out.regime = Some(Regime::Empty);
        return Ok(out);
    }
    let base = pg.base();
    if !cfg.waive_hypotheses && base.min_degree() < m {
        return Err(PackError::MinDegree { have: base.min_degree(), need: m });
    }

    let clock = StageClock::start(cfg);
    let split = split_high_degree(base, cfg);
    out.stages.push(clock.record(
        "split_high_degree",
        m,
        split.high.len(),
        Some(format!(
            "threshold {:.2}; remaining graph has min degree {} and max degree {}",
            split.threshold, split.reduced_min_degree, split.reduced_max_degree
        )),
    ));
    let mut used = vec![false; n];

    if split.high.len() >= m {
        out.regime = Some(Regime::HighDegree);
        let clock = StageClock::start(cfg);
        let cycles = cover_with(pg, &split.high, m, &mut used, cfg);
        out.stages.push(clock.record("greedy_high_degree", m, cycles.len(), None));
        out.packing.cycles = cycles;
    } else {
        let m_rest = m - split.high.len();
        let sub = pg.induced(&split.rest);
        let n_rest = split.rest.len();
        let lower = ln_n(n).powi(cfg.lower_range_exponent as i32);
        let upper = cfg.sqrt_range_constant * (n_rest as f64).sqrt();
        let (regime, result) = if (m_rest as f64) < lower {
            (Regime::Harvest, Ok(harvest(&sub, m_rest, cfg)))
        } else if (m_rest as f64) <= upper {
            (Regime::StarChain, star_chain_pack(&sub, m_rest, cfg))
        } else if ell % 2 == 0 {
            (Regime::EvenGreedy, even_greedy_pack(sub.union(), ell, m_rest, cfg))
        } else {
            (Regime::OddRounds, odd_rounds_pack(&sub, m_rest, cfg))
        };
        out.regime = Some(regime);
        match result {
            Ok(inner) => {
                out.stages.extend(inner.stages);
                for c in inner.packing.cycles {
                    let c = c.map_vertices(|v| split.rest[v]);
                    for &v in c.vertices() {
                        used[v] = true;
                    }
                    out.packing.cycles.push(c);
                }
            }
            Err(e) => out.stages.push(StageRecord {
                stage: format!("{regime:?}").to_lowercase(),
                target: m_rest,
                achieved: 0,
                elapsed_ms: None,
                note: Some(e.to_string()),
            }),
        }
        if out.packing.len() < m && !split.high.is_empty() {
            let clock = StageClock::start(cfg);
            let need = m - out.packing.len();
            let extra = cover_with(pg, &split.high, need, &mut used, cfg);
            out.stages.push(clock.record("top_up_high_degree", need, extra.len(), None));
            out.packing.cycles.extend(extra);
        }
    }

    if cfg.union_fallback && out.packing.len() < m {
        let clock = StageClock::start(cfg);
        let need = m - out.packing.len();
        let mut alive = full_set(n);
        for v in (0..n).filter(|&v| used[v]) {
            alive.set(v, false);
        }
        let mut found = 0;
        while found < need {
            match find_cycle(pg.union(), ell, &alive, cfg.search_budget) {
                CycleSearch::Found(c) => {
                    for &v in c.vertices() {
                        alive.set(v, false);
                    }
                    out.packing.cycles.push(c);
                    found += 1;
                }
                _ => break,
            }
        }
        out.stages.push(clock.record("union_fallback", need, found, None));
    }
    out.packing.truncate(m);
    Ok(out)
}

/// Disjoint cycles of the random part inside a seeded region holding a
/// `harvest_fraction` share of the vertices.
fn harvest(pg: &PerturbedGraph, m: usize, cfg: &PackerConfig) -> PackOutcome {
    let clock = StageClock::start(cfg);
    let n = pg.n();
    let size = ((cfg.harvest_fraction * n as f64).ceil() as usize).min(n);
    let order = seeded_permutation(n, derive_seed(cfg.seed, &[pg.seed()]), HARVEST_STREAM);
    let mut alive = vertex_set(n, order.into_iter().take(size));
    let mut out = PackOutcome::new(cfg.ell, m);
    while out.packing.len() < m {
        match find_cycle(pg.random_part(), cfg.ell, &alive, cfg.search_budget) {
            CycleSearch::Found(c) => {
                for &v in c.vertices() {
                    alive.set(v, false);
                }
                out.packing.cycles.push(Cycle::from_raw(c.vertices().to_vec()));
            }
            _ => break,
        }
    }
    let achieved = out.packing.len();
    out.stages.push(clock.record("harvest", m, achieved, Some(format!("region of {size} vertices"))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::verify_packing;
    use crate::generators::{min_degree_random, perturb, MinDegreeOptions};
    use crate::graph::Graph;

    #[test]
    fn zero_target_is_empty() {
        let pg = perturb(&Graph::complete(12), 0.2, 1).unwrap();
        let out = sublinear_pack(&pg, 0, &PackerConfig::calibrated(3)).unwrap();
        assert!(out.packing.is_empty());
        assert_eq!(out.regime, Some(Regime::Empty));
    }

    #[test]
    fn complete_host_succeeds_at_any_p() {
        for p in [0.0, 0.3, 1.0] {
            let pg = perturb(&Graph::complete(12), p, 5).unwrap();
            let out = sublinear_pack(&pg, 4, &PackerConfig::calibrated(3)).unwrap();
            assert_eq!(out.achieved(), 4, "p = {p}");
            assert!(verify_packing(pg.union(), &out.packing).is_valid());
        }
    }

    #[test]
    fn sparse_host_uses_the_random_part() {
        let g = min_degree_random(600, 8, 3, &MinDegreeOptions::default()).unwrap();
        let pg = perturb(&g, 6.0 * 600f64.ln() / 600.0, 4).unwrap();
        let out = sublinear_pack(&pg, 8, &PackerConfig::calibrated(3)).unwrap();
        assert!(verify_packing(pg.union(), &out.packing).is_valid());
        assert_eq!(out.achieved(), 8);
    }
}
