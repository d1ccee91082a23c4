//! Odd cycles in rounds.
//!
//! The host is first made bipartite by a locally maximal cut `(A, B)`. Each
//! round builds up to `s` disjoint structures: a path `v_2 v_3 ... v_{ell-1}`
//! alternating between `A` and `B` plus two anchor sets of `B`-neighbours of
//! its end vertices. Then the random edges of one fresh slice of width `q`
//! are revealed and every structure with a random edge between its anchors
//! becomes a `C_ell`.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::Cycle;
use crate::generators::{PerturbedGraph, RoundSlice};
use crate::graph::{Graph, GraphBuilder, VertexId};
use crate::rng::{derive_seed, CounterRng};

use super::{ln_n, PackError, PackOutcome, PackerConfig, StageClock};

const CUT_STREAM: u64 = 0x6375_74;

#[derive(Clone, Debug)]
pub struct MaxCut {
    /// `true` for vertices of `A`.
    pub in_a: Vec<bool>,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    /// `G[A, B]`.
    pub bipartite: Graph,
    /// Cut size after the initial partition and after every move.
    pub cut_trace: Vec<usize>,
}

/// Local search for a large cut. Starts from a seeded random partition and
/// moves the vertex with the largest positive gain (more neighbours on its
/// own side than across) until none is left. At the end every vertex keeps
/// at least half of its neighbours across the cut. Sides are named so that
/// `|B| >= |A|`.
pub fn max_cut_bipartition(g: &Graph, seed: u64) -> MaxCut {
    let n = g.n();
    let rng = CounterRng::new(derive_seed(seed, &[CUT_STREAM]));
    let mut side: Vec<bool> = (0..n).map(|v| rng.u64_at(0, v as u64) & 1 == 1).collect();
    let prio: Vec<u64> = (0..n).map(|v| rng.u64_at(1, v as u64)).collect();
    let mut same = vec![0i64; n];
    let mut cross = vec![0i64; n];
    let mut cut = 0usize;
    for (u, v) in g.edges() {
        if side[u] == side[v] {
            same[u] += 1;
            same[v] += 1;
        } else {
            cross[u] += 1;
            cross[v] += 1;
            cut += 1;
        }
    }
    let mut cut_trace = vec![cut];
    loop {
        let best = (0..n)
            .filter(|&v| same[v] > cross[v])
            .max_by_key(|&v| (same[v] - cross[v], std::cmp::Reverse(prio[v])));
        let Some(v) = best else { break };
        cut += (same[v] - cross[v]) as usize;
        for &w in g.neighbors(v) {
            if side[w] == side[v] {
                same[w] -= 1;
                cross[w] += 1;
            } else {
                same[w] += 1;
                cross[w] -= 1;
            }
        }
        std::mem::swap(&mut same[v], &mut cross[v]);
        side[v] = !side[v];
        cut_trace.push(cut);
    }
    let count_true = side.iter().filter(|&&s| s).count();
    // `A` is the smaller side.
    let a_is_true = count_true * 2 <= n;
    let in_a: Vec<bool> = side.iter().map(|&s| s == a_is_true).collect();
    let mut b = GraphBuilder::new(n);
    for (u, v) in g.edges() {
        if in_a[u] != in_a[v] {
            b.add_edge_unchecked(u, v);
        }
    }
    MaxCut {
        a: (0..n).filter(|&v| in_a[v]).collect(),
        b: (0..n).filter(|&v| !in_a[v]).collect(),
        in_a,
        bipartite: b.build(),
        cut_trace,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrcError {
    #[error("only {found} available A-vertices have enough neighbours in B (need {needed})")]
    AStarTooSmall { found: usize, needed: usize },
    #[error("no B-vertex has a neighbourhood with X - Y >= ell/2 (best was {best})")]
    NoDenseNeighbourhood { best: i64 },
    #[error("consecutive path vertices share no available neighbour")]
    NoCommonNeighbour,
    #[error("anchor sets of size {needed} not available (got {start} and {end})")]
    AnchorShortfall { needed: usize, start: usize, end: usize },
}

/// A path `v_2 ... v_{ell-1}` with anchor sets at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrcPath {
    /// `v_2, v_3, ..., v_{ell-1}`; even positions in `A`, odd positions in `B`.
    pub path: Vec<VertexId>,
    /// Available `B`-neighbours of `v_2`.
    pub anchor_start: Vec<VertexId>,
    /// Available `B`-neighbours of `v_{ell-1}`, disjoint from `anchor_start`.
    pub anchor_end: Vec<VertexId>,
    pub astar_size: usize,
    /// The `B`-vertex whose neighbourhood supplied the `A`-vertices, if any.
    pub pivot: Option<VertexId>,
    pub x: usize,
    pub y: usize,
    /// For each consecutive pair of `A`-vertices, the number of unused
    /// common neighbours in `B` when its middle vertex was chosen.
    pub common_at_selection: Vec<usize>,
}

impl DrcPath {
    pub fn a_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.path.iter().step_by(2).copied()
    }

    pub fn b_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.path.iter().skip(1).step_by(2).copied()
    }
}

/// Builds one path with anchors inside the available vertices.
///
/// Dense vertices `A*` are available `A`-vertices with at least
/// `m / dense_degree_divisor` available `B`-neighbours. For `ell >= 5`, among
/// the `ceil(m / drc_subset_divisor)` densest of them, every available
/// `B`-vertex `v` is scored by `X - Y` where `X = |N(v) ∩ A*|` and `Y` counts
/// pairs in that neighbourhood with fewer than `ell/2` common available
/// neighbours; the best `v` is used, one endpoint of each bad pair is dropped
/// and the densest `floor(ell/2)` survivors are joined through distinct
/// common neighbours.
pub fn drc_path(
    g_bip: &Graph,
    a_avail: &[bool],
    b_avail: &[bool],
    ell: usize,
    m: usize,
    cfg: &PackerConfig,
) -> Result<DrcPath, DrcError> {
    let n = g_bip.n();
    let h = ell / 2;
    let anchor = ((m as f64 / cfg.anchor_size_divisor).ceil() as usize).max(1);
    let threshold = m as f64 / cfg.dense_degree_divisor;
    let b_set: FixedBitSet = {
        let mut s = FixedBitSet::with_capacity(n);
        for v in (0..n).filter(|&v| b_avail[v]) {
            s.insert(v);
        }
        s
    };
    let deg_b = |v: VertexId| g_bip.neighbors(v).iter().filter(|&&w| b_avail[w]).count();
    let mut astar: Vec<(usize, VertexId)> =
        (0..n).filter(|&v| a_avail[v]).map(|v| (deg_b(v), v)).filter(|&(d, _)| d as f64 >= threshold).collect();
    astar.sort_by_key(|&(d, v)| (std::cmp::Reverse(d), v));
    if astar.len() < h.max(1) {
        return Err(DrcError::AStarTooSmall { found: astar.len(), needed: h.max(1) });
    }
    let astar_size = astar.len();

    let pivot_choice = if h <= 1 {
        Ok((vec![astar[0].1], None, 1, 0))
    } else {
        pivot_ends(g_bip, &astar, &b_set, ell, m, cfg)
    };
    match pivot_choice {
        Ok((ends, pivot, x, y)) => {
            // v_2 = densest, v_{ell-1} = second densest, the rest in between.
            let mut a_seq = Vec::with_capacity(h);
            a_seq.push(ends[0]);
            if ends.len() >= 2 {
                a_seq.extend_from_slice(&ends[2..]);
                a_seq.push(ends[1]);
            }
            let (path, start, end, common) = assemble(g_bip, &a_seq, b_avail, anchor)?;
            Ok(DrcPath {
                path,
                anchor_start: start,
                anchor_end: end,
                astar_size,
                pivot,
                x,
                y,
                common_at_selection: common,
            })
        }
        Err(e) if !cfg.drc_direct_fallback => Err(e),
        Err(e) => {
            let mut last = e;
            for &(_, first) in astar.iter().take(DIRECT_STARTS) {
                let Some(a_seq) = greedy_chain(g_bip, &astar, first, h, b_avail) else { continue };
                match assemble(g_bip, &a_seq, b_avail, anchor) {
                    Ok((path, start, end, common)) => {
                        return Ok(DrcPath {
                            path,
                            anchor_start: start,
                            anchor_end: end,
                            astar_size,
                            pivot: None,
                            x: 0,
                            y: 0,
                            common_at_selection: common,
                        })
                    }
                    Err(e) => last = e,
                }
            }
            Err(last)
        }
    }
}

/// Start vertices tried by the direct search.
const DIRECT_STARTS: usize = 64;

type PivotEnds = (Vec<VertexId>, Option<VertexId>, usize, usize);

/// The `floor(ell/2)` dense vertices picked through the best-scoring pivot.
fn pivot_ends(
    g_bip: &Graph,
    astar: &[(usize, VertexId)],
    b_set: &FixedBitSet,
    ell: usize,
    m: usize,
    cfg: &PackerConfig,
) -> Result<PivotEnds, DrcError> {
    let h = ell / 2;
    let size = ((m as f64 / cfg.drc_subset_divisor).ceil() as usize).max(h).min(astar.len());
    let sub: Vec<VertexId> = astar[..size].iter().map(|&(_, v)| v).collect();
    let bad: Vec<Vec<bool>> = (0..size)
        .map(|i| (0..size).map(|j| i != j && 2 * g_bip.common_neighbors_in(sub[i], sub[j], b_set) < ell).collect())
        .collect();
    let mut best: Option<(i64, VertexId, Vec<usize>, usize)> = None;
    for v in b_set.ones() {
        let nbhd: Vec<usize> = (0..size).filter(|&i| g_bip.has_edge(v, sub[i])).collect();
        let xv = nbhd.len();
        let mut yv = 0;
        for (k, &i) in nbhd.iter().enumerate() {
            yv += nbhd[k + 1..].iter().filter(|&&j| bad[i][j]).count();
        }
        let score = xv as i64 - yv as i64;
        if best.as_ref().map_or(true, |b| score > b.0) {
            best = Some((score, v, nbhd, yv));
        }
    }
    let Some((score, v, nbhd, yv)) = best else {
        return Err(DrcError::NoDenseNeighbourhood { best: 0 });
    };
    if 2 * score < ell as i64 {
        return Err(DrcError::NoDenseNeighbourhood { best: score });
    }
    let xv = nbhd.len();
    // Drop the later endpoint of every bad pair; at most one vertex per pair goes.
    let mut keep: Vec<usize> = Vec::with_capacity(xv);
    for &j in &nbhd {
        if keep.iter().all(|&i| !bad[i][j]) {
            keep.push(j);
        }
    }
    // `keep` preserves the density order of `sub`.
    keep.truncate(h);
    Ok((keep.iter().map(|&i| sub[i]).collect(), Some(v), xv, yv))
}

/// Dense vertices `first, w_2, ..., w_h`, each the densest one sharing an
/// unused available `B`-neighbour with its predecessor.
fn greedy_chain(
    g_bip: &Graph,
    astar: &[(usize, VertexId)],
    first: VertexId,
    h: usize,
    b_avail: &[bool],
) -> Option<Vec<VertexId>> {
    let mut chain = vec![first];
    let mut used_b: Vec<VertexId> = Vec::new();
    while chain.len() < h {
        let end = *chain.last().expect("non-empty");
        let step = astar.iter().find_map(|&(_, w)| {
            if chain.contains(&w) {
                return None;
            }
            g_bip
                .neighbors(end)
                .iter()
                .copied()
                .find(|&c| b_avail[c] && !used_b.contains(&c) && g_bip.has_edge(c, w))
                .map(|c| (w, c))
        })?;
        chain.push(step.0);
        used_b.push(step.1);
    }
    Some(chain)
}

type Assembled = (Vec<VertexId>, Vec<VertexId>, Vec<VertexId>, Vec<usize>);

/// Joins consecutive `A`-vertices through distinct common neighbours and
/// picks disjoint anchor sets at both ends.
fn assemble(g_bip: &Graph, a_seq: &[VertexId], b_avail: &[bool], anchor: usize) -> Result<Assembled, DrcError> {
    let n = g_bip.n();
    let mut used_b = vec![false; n];
    let mut path = vec![a_seq[0]];
    let mut common_at_selection = Vec::new();
    for w in a_seq.windows(2) {
        let common: Vec<VertexId> = g_bip
            .neighbors(w[0])
            .iter()
            .copied()
            .filter(|&c| b_avail[c] && !used_b[c] && g_bip.has_edge(c, w[1]))
            .collect();
        common_at_selection.push(common.len());
        let Some(&c) = common.first() else {
            return Err(DrcError::NoCommonNeighbour);
        };
        used_b[c] = true;
        path.push(c);
        path.push(w[1]);
    }

    let v2 = a_seq[0];
    let v_end = *a_seq.last().expect("non-empty");
    let avail = |v: VertexId| -> Vec<VertexId> {
        g_bip.neighbors(v).iter().copied().filter(|&c| b_avail[c] && !used_b[c]).collect()
    };
    let s_all = avail(v2);
    let e_all = avail(v_end);
    let mut in_e = vec![false; n];
    for &c in &e_all {
        in_e[c] = true;
    }
    let mut in_s = vec![false; n];
    for &c in &s_all {
        in_s[c] = true;
    }
    let mut start: Vec<VertexId> = s_all.iter().copied().filter(|&c| !in_e[c]).take(anchor).collect();
    let mut end: Vec<VertexId> = e_all.iter().copied().filter(|&c| !in_s[c]).take(anchor).collect();
    let shared: Vec<VertexId> = s_all.iter().copied().filter(|&c| in_e[c]).collect();
    let mut shared = shared.into_iter();
    while start.len() < anchor {
        match shared.next() {
            Some(c) => start.push(c),
            None => break,
        }
    }
    while end.len() < anchor {
        match shared.next() {
            Some(c) => end.push(c),
            None => break,
        }
    }
    if start.len() < anchor || end.len() < anchor {
        return Err(DrcError::AnchorShortfall { needed: anchor, start: start.len(), end: end.len() });
    }
    start.sort_unstable();
    end.sort_unstable();
    Ok((path, start, end, common_at_selection))
}

/// `s` structures per round, `t` planned rounds, slice width `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundPlan {
    pub s: usize,
    pub t: usize,
    pub q: f64,
    /// The constant `C` in `q = C ln n / m^2`.
    pub c: f64,
    /// Rounds actually allowed: `t`, or more when the budget has room and extra rounds are enabled.
    pub rounds: usize,
}

impl RoundPlan {
    /// `s = ceil(2n/m)`, `t = ceil(m^2 / (2n))`, `q = C ln n / m^2`.
    /// Fails unless `q > 0` and `t q <= p`.
    pub fn new(n: usize, m: usize, p: f64, cfg: &PackerConfig) -> Result<Self, PackError> {
        let m = m.max(1);
        let s = (2 * n).div_ceil(m);
        let t = (m * m).div_ceil(2 * n.max(1));
        let ln = ln_n(n);
        let c = cfg.round_q_constant.unwrap_or(p * n as f64 / ln);
        let q = c * ln / (m * m) as f64;
        if !(q > 0.0) || t as f64 * q > p * (1.0 + 1e-12) {
            return Err(PackError::Budget { t, q, p });
        }
        let rounds = if cfg.extra_rounds { ((p / q) * (1.0 + 1e-12)).floor().max(t as f64) as usize } else { t };
        Ok(Self { s, t, q, c, rounds })
    }
}

fn check_hypotheses(pg: &PerturbedGraph, m: usize, cfg: &PackerConfig) -> Result<(), PackError> {
    if cfg.waive_hypotheses {
        return Ok(());
    }
    let n = pg.n() as f64;
    let g = pg.base();
    if g.min_degree() < m {
        return Err(PackError::MinDegree { have: g.min_degree(), need: m });
    }
    let lo = cfg.sqrt_range_constant * n.sqrt();
    let hi = n / (16.0 * cfg.ell.div_ceil(2) as f64);
    if (m as f64) < lo || (m as f64) > hi {
        return Err(PackError::Range { m, lo, hi });
    }
    let limit = n / (32.0 * (cfg.ell / 2) as f64);
    if g.max_degree() as f64 >= limit {
        return Err(PackError::MaxDegree { have: g.max_degree(), limit });
    }
    Ok(())
}

pub fn odd_rounds_pack(pg: &PerturbedGraph, m: usize, cfg: &PackerConfig) -> Result<PackOutcome, PackError> {
    let ell = cfg.ell;
    if ell < 3 || ell % 2 == 0 {
        return Err(PackError::CycleLength { ell, reason: "rounds need an odd cycle length" });
    }
    let mut out = PackOutcome::new(ell, m);
    if m == 0 {
        return Ok(out);
    }
    check_hypotheses(pg, m, cfg)?;
    let plan = RoundPlan::new(pg.n(), m, pg.p(), cfg)?;
    let n = pg.n();

    let clock = StageClock::start(cfg);
    let cut = max_cut_bipartition(pg.base(), derive_seed(cfg.seed, &[pg.seed()]));
    out.stages.push(clock.record(
        "max_cut",
        0,
        cut.bipartite.edge_count(),
        Some(format!("|A| = {}, |B| = {}, min degree {}", cut.a.len(), cut.b.len(), cut.bipartite.min_degree())),
    ));

    // Vertices of closed cycles.
    let mut excluded = vec![false; n];
    for round in 0..plan.rounds {
        if out.packing.len() >= m {
            break;
        }
        let clock = StageClock::start(cfg);
        // With side swapping, the side with more free vertices supplies anchors.
        let free_a = (0..n).filter(|&v| cut.in_a[v] && !excluded[v]).count();
        let flip = cfg.swap_sides && 2 * free_a > n - excluded.iter().filter(|&&x| x).count();
        let in_a: Vec<bool> = cut.in_a.iter().map(|&x| x != flip).collect();
        let mut taken = excluded.clone();
        let mut structures = Vec::new();
        let mut stop_reason = None;
        let wanted = plan.s.min(m - out.packing.len());
        while structures.len() < wanted {
            let a_avail: Vec<bool> = (0..n).map(|v| in_a[v] && !taken[v]).collect();
            let b_avail: Vec<bool> = (0..n).map(|v| !in_a[v] && !taken[v]).collect();
            match drc_path(&cut.bipartite, &a_avail, &b_avail, ell, m, cfg) {
                Ok(d) => {
                    let anchors = d.anchor_start.iter().chain(&d.anchor_end).filter(|_| !cfg.shared_anchors);
                    for &v in d.path.iter().chain(anchors) {
                        taken[v] = true;
                    }
                    structures.push(d);
                }
                Err(e) => {
                    stop_reason = Some(e.to_string());
                    break;
                }
            }
        }
        let slice = RoundSlice::nth(round, plan.q);
        let built = structures.len();
        let mut closed = 0;
        for d in structures {
            let (start, end) = if cfg.shared_anchors {
                // Every free neighbour of the path ends not on another path.
                let free = |v: VertexId| -> Vec<VertexId> {
                    cut.bipartite.neighbors(v).iter().copied().filter(|&c| !in_a[c] && !taken[c]).collect()
                };
                (free(d.path[0]), free(*d.path.last().expect("non-empty path")))
            } else {
                (d.anchor_start.clone(), d.anchor_end.clone())
            };
            let edge = start
                .iter()
                .flat_map(|&b| end.iter().map(move |&b2| (b, b2)))
                .find(|&(b, b2)| b != b2 && pg.round_edge(b, b2, slice));
            if let Some((b, b2)) = edge {
                taken[b] = true;
                taken[b2] = true;
                for &v in d.path.iter().chain([&b, &b2]) {
                    excluded[v] = true;
                }
                let mut vs = d.path.clone();
                vs.push(b2);
                vs.push(b);
                out.packing.cycles.push(Cycle::from_raw(vs));
                closed += 1;
            }
        }
        let note = match stop_reason {
            Some(r) => format!("built {built} of {wanted}: {r}"),
            None => format!("built {built}"),
        };
        out.stages.push(clock.record(&format!("round_{round}"), wanted, closed, Some(note)));
        if built == 0 {
            break;
        }
    }
    out.packing.truncate(m);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::verify_packing;
    use crate::generators::{complete_multipartite, min_degree_random, perturb, MinDegreeOptions};

    #[test]
    fn max_cut_keeps_half_of_each_degree() {
        for seed in 0..5 {
            let g = min_degree_random(200, 20, seed, &MinDegreeOptions::default()).unwrap();
            let mc = max_cut_bipartition(&g, seed);
            for v in 0..200 {
                assert!(2 * mc.bipartite.degree(v) >= g.degree(v));
            }
            assert!(mc.cut_trace.windows(2).all(|w| w[0] < w[1]));
            assert!(mc.b.len() >= mc.a.len());
        }
        let k4 = Graph::complete(4);
        let mc = max_cut_bipartition(&k4, 1);
        assert!((0..4).all(|v| mc.bipartite.degree(v) >= 2));
        let kb = complete_multipartite(&[3, 5]).unwrap();
        assert_eq!(max_cut_bipartition(&kb, 4).bipartite, kb);
    }

    #[test]
    fn round_plan_arithmetic() {
        let cfg = PackerConfig { round_q_constant: Some(1.0), extra_rounds: false, ..PackerConfig::asymptotic(5) };
        let p = RoundPlan::new(900, 120, 0.5, &cfg).unwrap();
        assert_eq!((p.s, p.t, p.rounds), (15, 8, 8));
        assert!((p.q - 900f64.ln() / 14400.0).abs() < 1e-15);
        let single = RoundPlan::new(100, 10, 0.5, &cfg).unwrap();
        assert_eq!((single.s, single.t), (20, 1));
        assert!(matches!(RoundPlan::new(900, 120, 0.0, &PackerConfig::asymptotic(5)), Err(PackError::Budget { .. })));
        assert!(matches!(RoundPlan::new(900, 120, 1e-4, &cfg), Err(PackError::Budget { .. })));
        let inferred = RoundPlan::new(900, 120, 0.5, &PackerConfig::calibrated(5)).unwrap();
        assert!(inferred.t as f64 * inferred.q <= 0.5);
        assert!(inferred.rounds >= inferred.t);
    }

    #[test]
    fn drc_on_complete_bipartite() {
        let g = complete_multipartite(&[10, 30]).unwrap();
        let a: Vec<bool> = (0..40).map(|v| v < 10).collect();
        let b: Vec<bool> = a.iter().map(|x| !x).collect();
        let cfg = PackerConfig::calibrated(5);
        let d = drc_path(&g, &a, &b, 5, 8, &cfg).unwrap();
        assert_eq!(d.path.len(), 3);
        assert!(d.a_vertices().all(|v| v < 10));
        assert!(d.b_vertices().all(|v| v >= 10));
        assert!(d.anchor_start.len() >= 1 && d.anchor_end.len() >= 1);
        let d3 = drc_path(&g, &a, &b, 3, 8, &cfg).unwrap();
        assert_eq!(d3.path.len(), 1);
        assert!(d3.anchor_start.iter().all(|x| !d3.anchor_end.contains(x)));
        let none = vec![false; 40];
        assert!(matches!(drc_path(&g, &none, &b, 5, 8, &cfg), Err(DrcError::AStarTooSmall { .. })));
        let big = drc_path(&g, &a, &b, 3, 400, &cfg);
        assert!(matches!(big, Err(DrcError::AStarTooSmall { .. }) | Err(DrcError::AnchorShortfall { .. })));
    }

    #[test]
    fn zero_probability_fails_the_budget() {
        let g = complete_multipartite(&[10, 30]).unwrap();
        let pg = perturb(&g, 0.0, 0).unwrap();
        assert!(matches!(odd_rounds_pack(&pg, 5, &PackerConfig::calibrated(3)), Err(PackError::Budget { .. })));
        assert!(matches!(
            odd_rounds_pack(&pg, 5, &PackerConfig::calibrated(4)),
            Err(PackError::CycleLength { .. })
        ));
    }

    #[test]
    fn rounds_produce_valid_cycles() {
        let g = min_degree_random(300, 40, 1, &MinDegreeOptions::default()).unwrap();
        let pg = perturb(&g, 0.4, 2).unwrap();
        let out = odd_rounds_pack(&pg, 40, &PackerConfig::calibrated(5)).unwrap();
        assert!(verify_packing(pg.union(), &out.packing).is_valid());
        assert!(out.achieved() > 0);
    }
}
