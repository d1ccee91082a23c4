//! Stars in the host, extended by chains of random neighbours and closed by
//! one random edge per star.
//!
//! Each star `K` with `g_K` leaves (`g_K` even) has its leaves split into
//! `A_2` and `A_ell`. Sets `A_3, ..., A_{ell-1}` of size `g_K / 2` are taken
//! from vertices outside all stars so that every vertex of `A_i` has a random
//! neighbour in `A_{i-1}`. A random edge between `A_{ell-1}` and `A_ell`,
//! followed back through the chain and closed by two star edges at the
//! centre, gives a `C_ell`.

use serde::{Deserialize, Serialize};

use crate::cycles::Cycle;
use crate::generators::{PerturbedGraph, RoundSlice};
use crate::graph::{Graph, VertexId};
use crate::rng::{derive_seed, CounterRng};

use super::{PackError, PackOutcome, PackerConfig, StageClock};

const STAR_STREAM: u64 = 0x7374_6172;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub centre: VertexId,
    pub leaves: Vec<VertexId>,
}

impl Star {
    /// `g_K`, the number of leaves.
    pub fn size(&self) -> usize {
        self.leaves.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarFamily {
    pub stars: Vec<Star>,
    /// Leaf counts allowed: `[max(2, ceil(eps m)), floor(eps sqrt n)]`.
    pub min_leaves: usize,
    pub max_leaves: usize,
    /// `sum g_K^2` over the family.
    pub achieved_sum: usize,
    /// `s eps^2 n m`, reported for comparison only.
    pub target_sum: f64,
}

fn check_degrees(g: &Graph, m: usize, cfg: &PackerConfig) -> Result<(), PackError> {
    if g.min_degree() < m {
        return Err(PackError::MinDegree { have: g.min_degree(), need: m });
    }
    let limit = cfg.gamma * g.n() as f64;
    if !cfg.waive_hypotheses && g.max_degree() as f64 > limit {
        return Err(PackError::MaxDegree { have: g.max_degree(), limit });
    }
    Ok(())
}

/// Greedy disjoint stars: the vertex of largest residual degree becomes a
/// centre and claims up to `floor(eps sqrt n)` unused neighbours, preferring
/// those of small residual degree. Stops once no vertex can reach
/// `ceil(eps m)` leaves.
pub fn star_family(g: &Graph, m: usize, cfg: &PackerConfig) -> Result<StarFamily, PackError> {
    check_degrees(g, m, cfg)?;
    Ok(greedy_stars(g, m, cfg, 0))
}

fn greedy_stars(g: &Graph, m: usize, cfg: &PackerConfig, salt: u64) -> StarFamily {
    let n = g.n();
    let eps = cfg.leaf_eps;
    let min_leaves = ((eps * m as f64).ceil() as usize).max(2);
    let max_leaves = (eps * (n as f64).sqrt()).floor() as usize;
    let prio = CounterRng::new(derive_seed(cfg.seed, &[STAR_STREAM, salt]));
    let mut used = vec![false; n];
    let mut residual: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut stars = Vec::new();
    if max_leaves >= min_leaves {
        loop {
            let centre = (0..n)
                .filter(|&v| !used[v])
                .max_by_key(|&v| (residual[v], std::cmp::Reverse(prio.u64_at(1, v as u64))));
            let Some(c) = centre else { break };
            if residual[c] < min_leaves {
                break;
            }
            let mut cand: Vec<VertexId> = g.neighbors(c).iter().copied().filter(|&w| !used[w]).collect();
            cand.sort_by_key(|&w| (residual[w], prio.u64_at(2, w as u64)));
            cand.truncate(residual[c].min(max_leaves));
            cand.sort_unstable();
            let mut claimed = cand.clone();
            claimed.push(c);
            for &v in &claimed {
                used[v] = true;
                for &w in g.neighbors(v) {
                    residual[w] -= 1;
                }
            }
            stars.push(Star { centre: c, leaves: cand });
        }
    }
    let achieved_sum = stars.iter().map(|s| s.size() * s.size()).sum();
    StarFamily {
        stars,
        min_leaves,
        max_leaves,
        achieved_sum,
        target_sum: cfg.star_s * eps * eps * n as f64 * m as f64,
    }
}

/// Vertices of `B` with a random neighbour in `A`, using only random edges
/// revealed in `slice`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub neighbours: Vec<VertexId>,
    /// Set when fewer than `|A|` neighbours were found.
    pub deficient: bool,
}

pub fn expander_extend(pg: &PerturbedGraph, a: &[VertexId], in_b: &[bool], slice: RoundSlice) -> Expansion {
    let mut hit = vec![false; pg.n()];
    for &v in a {
        for w in pg.round_neighbors(v, slice) {
            if in_b[w] {
                hit[w] = true;
            }
        }
    }
    let neighbours: Vec<VertexId> = (0..pg.n()).filter(|&w| hit[w]).collect();
    Expansion { deficient: neighbours.len() < a.len(), neighbours }
}

/// The sets built for one star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarChain {
    pub star: usize,
    /// `A_2, A_3, ..., A_ell` in order (empty when the chain failed).
    pub sets: Vec<Vec<VertexId>>,
    pub complete: bool,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketRecord {
    /// Bucket `i` holds stars with `2^(i-1) eps m <= g_K < 2^i eps m`.
    pub index: u32,
    pub stars: usize,
    pub closed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub family: StarFamily,
    pub chains: Vec<StarChain>,
    pub buckets: Vec<BucketRecord>,
}

pub fn star_chain_pack(pg: &PerturbedGraph, m: usize, cfg: &PackerConfig) -> Result<PackOutcome, PackError> {
    star_chain_pack_traced(pg, m, cfg).map(|(o, _)| o)
}

/// [`star_chain_pack`] together with every star, chain set and bucket.
pub fn star_chain_pack_traced(
    pg: &PerturbedGraph,
    m: usize,
    cfg: &PackerConfig,
) -> Result<(PackOutcome, ChainTrace), PackError> {
    let ell = cfg.ell;
    let n = pg.n();
    let mut out = PackOutcome::new(ell, m);

    let clock = StageClock::start(cfg);
    let family = star_family(pg.base(), m, cfg)?;
    out.stages.push(clock.record(
        "stars",
        m,
        family.stars.len(),
        Some(format!("sum g^2 = {} against s eps^2 n m = {:.1}", family.achieved_sum, family.target_sum)),
    ));

    let full = RoundSlice { lo: 0.0, hi: pg.p() };
    let prio = CounterRng::new(derive_seed(cfg.seed, &[pg.seed(), STAR_STREAM, 3]));
    let rnd = pg.random_part();
    // A vertex is free until a closed cycle claims it. Stars are taken in
    // order; a star whose chain fails or stays open returns every vertex.
    let mut free = vec![true; n];
    let mut chains = Vec::with_capacity(family.stars.len());
    let clock = StageClock::start(cfg);
    for (k, star) in family.stars.iter().enumerate() {
        if out.packing.len() >= m {
            break;
        }
        if !free[star.centre] {
            continue;
        }
        let mut leaves: Vec<VertexId> = star.leaves.iter().copied().filter(|&l| free[l]).collect();
        leaves.truncate(leaves.len() & !1);
        let half = leaves.len() / 2;
        let mut taken = vec![star.centre];
        taken.extend(&leaves);
        for &v in &taken {
            free[v] = false;
        }
        let a_ell = leaves.split_off(half);
        let mut sets = vec![leaves];
        let mut complete = half > 0;
        for _ in 3..ell {
            if !complete {
                break;
            }
            let prev = sets.last().expect("A_2 present");
            let exp = expander_extend(pg, prev, &free, full);
            if exp.neighbours.len() < half {
                complete = false;
                break;
            }
            let mut next = exp.neighbours;
            next.sort_by_key(|&w| (prio.u64_at(0, pg.host_id(w) as u64), w));
            next.truncate(half);
            next.sort_unstable();
            for &w in &next {
                free[w] = false;
            }
            taken.extend(&next);
            sets.push(next);
        }
        let mut closed = false;
        if complete {
            sets.push(a_ell);
            let cycle = if ell == 3 {
                let leaves: Vec<VertexId> = sets.concat();
                first_edge_within(rnd, &leaves).map(|(a, b)| vec![star.centre, a, b])
            } else {
                close_chain(rnd, &sets).map(|path| {
                    let mut v = Vec::with_capacity(ell);
                    v.push(star.centre);
                    v.extend(path);
                    v
                })
            };
            if let Some(vs) = cycle {
                closed = true;
                for &v in &taken {
                    free[v] = true;
                }
                for &v in &vs {
                    free[v] = false;
                }
                out.packing.cycles.push(Cycle::from_raw(vs));
            }
        } else {
            sets.clear();
        }
        if !closed {
            for &v in &taken {
                free[v] = true;
            }
        }
        chains.push(StarChain { star: k, sets, complete, closed });
    }
    let completed = chains.iter().filter(|c| c.complete).count();
    out.stages.push(clock.record("chains", chains.len(), completed, None));
    let closed = out.packing.len();
    out.stages.push(clock.record("closing", m, closed, None));

    let buckets = buckets(&family, &chains, m, cfg.leaf_eps);
    Ok((out, ChainTrace { family, chains, buckets }))
}

fn first_edge_within(rnd: &Graph, set: &[VertexId]) -> Option<(VertexId, VertexId)> {
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if rnd.has_edge(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Random edge `x y` with `x` in `A_{ell-1}` and `y` in `A_ell`, then one
/// random predecessor per level back to `A_2`. Returns `x_2, ..., x_{ell-1}, y`.
fn close_chain(rnd: &Graph, sets: &[Vec<VertexId>]) -> Option<Vec<VertexId>> {
    let last = sets.len() - 1;
    let (x, y) = sets[last - 1]
        .iter()
        .flat_map(|&x| sets[last].iter().map(move |&y| (x, y)))
        .find(|&(x, y)| rnd.has_edge(x, y))?;
    let mut rev = vec![y, x];
    let mut cur = x;
    for level in (0..last - 1).rev() {
        let pred = *sets[level].iter().find(|&&w| rnd.has_edge(w, cur))?;
        rev.push(pred);
        cur = pred;
    }
    rev.reverse();
    Some(rev)
}

fn buckets(family: &StarFamily, chains: &[StarChain], m: usize, eps: f64) -> Vec<BucketRecord> {
    let base = (eps * m as f64).max(f64::MIN_POSITIVE);
    let mut out: Vec<BucketRecord> = Vec::new();
    for c in chains {
        let g = family.stars[c.star].size() as f64;
        let index = ((g / base).log2().floor().max(0.0) as u32) + 1;
        match out.iter_mut().find(|b| b.index == index) {
            Some(b) => {
                b.stars += 1;
                b.closed += c.closed as usize;
            }
            None => out.push(BucketRecord { index, stars: 1, closed: c.closed as usize }),
        }
    }
    out.sort_by_key(|b| b.index);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::verify_packing;
    use crate::generators::{min_degree_random, perturb, MinDegreeOptions};
    use crate::graph::GraphBuilder;

    fn disjoint_stars(count: usize, k: usize) -> Graph {
        let mut b = GraphBuilder::new(count * (k + 1));
        for s in 0..count {
            let c = s * (k + 1);
            for j in 1..=k {
                b.add_edge(c, c + j).unwrap();
            }
        }
        b.build()
    }

    #[test]
    fn family_of_disjoint_stars_is_recovered() {
        // n = 10 * 7 = 70, eps = 1: leaves in [max(2, 1), floor(sqrt 70) = 8].
        let g = disjoint_stars(10, 6);
        let cfg = PackerConfig { leaf_eps: 1.0, ..PackerConfig::calibrated(3) };
        let f = star_family(&g, 1, &cfg).unwrap();
        assert_eq!(f.stars.len(), 10);
        assert!(f.stars.iter().all(|s| s.size() == 6 && s.centre % 7 == 0));
        assert_eq!(f.achieved_sum, 360);
    }

    #[test]
    fn no_star_reaches_the_minimum() {
        // Leaves must number at least ceil(1.5 * 2) = 3, above every degree.
        let g = Graph::cycle(50);
        let cfg = PackerConfig { leaf_eps: 1.5, ..PackerConfig::calibrated(3) };
        let f = star_family(&g, 2, &cfg).unwrap();
        assert!(f.stars.is_empty());
        assert_eq!(f.achieved_sum, 0);
        assert!(matches!(star_family(&g, 3, &cfg), Err(PackError::MinDegree { have: 2, need: 3 })));
    }

    #[test]
    fn family_is_disjoint_and_within_bounds() {
        let g = min_degree_random(400, 12, 5, &MinDegreeOptions::default()).unwrap();
        let cfg = PackerConfig::calibrated(4);
        let f = star_family(&g, 12, &cfg).unwrap();
        let mut seen = vec![false; 400];
        for s in &f.stars {
            assert!(s.size() >= f.min_leaves && s.size() <= f.max_leaves);
            for &v in s.leaves.iter().chain(std::iter::once(&s.centre)) {
                assert!(!seen[v]);
                seen[v] = true;
            }
            assert!(s.leaves.iter().all(|&l| g.has_edge(s.centre, l)));
        }
    }

    #[test]
    fn expansion_extremes() {
        let a = vec![0, 1];
        let mut in_b = vec![false; 10];
        for b in in_b.iter_mut().skip(2) {
            *b = true;
        }
        let full = perturb(&Graph::empty(10), 1.0, 0).unwrap();
        let e = expander_extend(&full, &a, &in_b, RoundSlice { lo: 0.0, hi: 1.0 });
        assert_eq!(e.neighbours, (2..10).collect::<Vec<_>>());
        assert!(!e.deficient);
        let none = perturb(&Graph::empty(10), 0.0, 0).unwrap();
        let e = expander_extend(&none, &a, &in_b, RoundSlice { lo: 0.0, hi: 0.0 });
        assert!(e.neighbours.is_empty() && e.deficient);
    }

    #[test]
    fn zero_probability_closes_nothing() {
        let g = min_degree_random(300, 10, 2, &MinDegreeOptions::default()).unwrap();
        let pg = perturb(&g, 0.0, 1).unwrap();
        for ell in [3, 5] {
            let (out, trace) = star_chain_pack_traced(&pg, 10, &PackerConfig::calibrated(ell)).unwrap();
            assert!(out.packing.is_empty());
            assert!(!trace.family.stars.is_empty());
            assert_eq!(out.stages.last().unwrap().achieved, 0);
        }
    }

    #[test]
    fn chains_close_into_valid_cycles() {
        let g = min_degree_random(600, 15, 4, &MinDegreeOptions::default()).unwrap();
        let p = 6.0 * 600f64.ln() / 600.0;
        let pg = perturb(&g, p, 8).unwrap();
        let cfg = PackerConfig::calibrated(4);
        let (out, trace) = star_chain_pack_traced(&pg, 15, &cfg).unwrap();
        assert!(verify_packing(pg.union(), &out.packing).is_valid());
        for c in trace.chains.iter().filter(|c| c.complete) {
            for i in 1..c.sets.len() - 1 {
                for &v in &c.sets[i] {
                    assert!(c.sets[i - 1].iter().any(|&w| pg.random_part().has_edge(v, w)));
                }
            }
        }
        assert!(out.achieved() >= 1);
    }
}
