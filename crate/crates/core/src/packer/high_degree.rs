//! Vertices of large host degree, each covered by its own cycle whose other
//! `ell - 1` vertices form a random path inside its host neighbourhood.

use crate::cycles::Cycle;
use crate::generators::PerturbedGraph;
use crate::graph::{Graph, VertexId};
use crate::rng::{derive_seed, CounterRng};

use super::{PackOutcome, PackerConfig, StageClock};

const PATH_STREAM: u64 = 0x7061_7468;

#[derive(Clone, Debug)]
pub struct HighDegreeSplit {
    pub threshold: f64,
    /// `V'`: vertices of degree at least `threshold`, ascending.
    pub high: Vec<VertexId>,
    /// The remaining vertices, ascending; vertex `i` of `reduced` is `rest[i]`.
    pub rest: Vec<VertexId>,
    pub reduced: Graph,
    pub reduced_min_degree: usize,
    pub reduced_max_degree: usize,
}

pub fn split_high_degree(g: &Graph, cfg: &PackerConfig) -> HighDegreeSplit {
    let threshold = g.n() as f64 / cfg.high_degree_divisor;
    let (high, rest): (Vec<VertexId>, Vec<VertexId>) = (0..g.n()).partition(|&v| g.degree(v) as f64 >= threshold);
    let reduced = g.induced(&rest);
    HighDegreeSplit {
        threshold,
        reduced_min_degree: reduced.min_degree(),
        reduced_max_degree: reduced.max_degree(),
        high,
        rest,
        reduced,
    }
}

/// A path on `k` vertices of `U` using only edges of the random part.
///
/// Depth-first search that tries start vertices and extensions in order of
/// decreasing random degree inside `U`, ties broken by a seeded priority.
/// Gives up after `cfg.search_budget` extensions.
pub fn path_in_random_subgraph(
    pg: &PerturbedGraph,
    in_u: &[bool],
    k: usize,
    cfg: &PackerConfig,
) -> Option<Vec<VertexId>> {
    let members: Vec<VertexId> = (0..pg.n()).filter(|&v| in_u[v]).collect();
    if k == 0 || members.len() < k {
        return if k == 0 { Some(Vec::new()) } else { None };
    }
    let rnd = pg.random_part();
    let prio = CounterRng::new(derive_seed(cfg.seed, &[pg.seed(), PATH_STREAM]));
    let key = |v: VertexId, deg: usize| (std::cmp::Reverse(deg), prio.u64_at(0, pg.host_id(v) as u64), v);
    let mut deg_u = vec![0usize; pg.n()];
    for &v in &members {
        deg_u[v] = rnd.neighbors(v).iter().filter(|&&w| in_u[w]).count();
    }
    let mut starts: Vec<VertexId> = members.iter().copied().filter(|&v| k == 1 || deg_u[v] > 0).collect();
    starts.sort_by_key(|&v| key(v, deg_u[v]));

    let mut budget = cfg.search_budget;
    let mut on_path = vec![false; pg.n()];
    let mut path = Vec::with_capacity(k);
    for s in starts {
        path.push(s);
        on_path[s] = true;
        if extend(rnd, in_u, &deg_u, &key, k, &mut path, &mut on_path, &mut budget) {
            return Some(path);
        }
        on_path[s] = false;
        path.pop();
        if budget == 0 {
            return None;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn extend<K: Ord>(
    rnd: &Graph,
    in_u: &[bool],
    deg_u: &[usize],
    key: &impl Fn(VertexId, usize) -> K,
    k: usize,
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    budget: &mut u64,
) -> bool {
    if path.len() == k {
        return true;
    }
    let last = *path.last().expect("non-empty");
    let mut next: Vec<VertexId> = rnd.neighbors(last).iter().copied().filter(|&w| in_u[w] && !on_path[w]).collect();
    next.sort_by_key(|&w| key(w, deg_u[w]));
    for w in next {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        path.push(w);
        on_path[w] = true;
        if extend(rnd, in_u, deg_u, key, k, path, on_path, budget) {
            return true;
        }
        on_path[w] = false;
        path.pop();
    }
    false
}

/// Covers vertices of `high` one at a time with cycles `v, p_1, ..., p_{ell-1}`
/// where the `p_i` are uncovered host neighbours of `v` outside `high` joined
/// by a random path. Vertices whose step fails are skipped.
pub fn greedy_cover_high_degree(
    pg: &PerturbedGraph,
    high: &[VertexId],
    target: usize,
    cfg: &PackerConfig,
) -> PackOutcome {
    let mut used = vec![false; pg.n()];
    let clock = StageClock::start(cfg);
    let cycles = cover_with(pg, high, target, &mut used, cfg);
    let mut out = PackOutcome::new(cfg.ell, target);
    let achieved = cycles.len();
    out.packing.cycles = cycles;
    out.stages.push(clock.record("greedy_high_degree", target, achieved, None));
    out
}

/// Core of [`greedy_cover_high_degree`] that respects and updates `used`.
pub(crate) fn cover_with(
    pg: &PerturbedGraph,
    high: &[VertexId],
    target: usize,
    used: &mut [bool],
    cfg: &PackerConfig,
) -> Vec<Cycle> {
    let mut in_high = vec![false; pg.n()];
    for &v in high {
        in_high[v] = true;
    }
    let mut out = Vec::new();
    let mut in_u = vec![false; pg.n()];
    for &v in high {
        if out.len() >= target {
            break;
        }
        if used[v] {
            continue;
        }
        let nbrs = pg.base().neighbors(v);
        for &w in nbrs {
            in_u[w] = !used[w] && !in_high[w];
        }
        let path = path_in_random_subgraph(pg, &in_u, cfg.ell - 1, cfg);
        for &w in nbrs {
            in_u[w] = false;
        }
        if let Some(path) = path {
            used[v] = true;
            let mut verts = Vec::with_capacity(cfg.ell);
            verts.push(v);
            for w in path {
                used[w] = true;
                verts.push(w);
            }
            out.push(Cycle::from_raw(verts));
        }
    }
    out
}
