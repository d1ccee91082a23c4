//! Exact maximum packing of vertex-disjoint `C_ell` copies for small graphs.
//!
//! Cycles are enumerated up front, then a branch-and-bound set packing search
//! runs over them. The incumbent starts from a greedy packing; nodes are
//! pruned with a vertex-count bound and, near the root, the fractional
//! packing bound from [`crate::lp`]. The search either proves optimality,
//! reaches the caller's `limit`, or reports [`OracleUnavailable`]. It never
//! returns a heuristic answer as if it were exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{enumerate_cycles, Cycle, CyclePacking};
use crate::graph::Graph;
use crate::lp::packing_upper_bound;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    /// Search nodes allowed before giving up.
    pub node_budget: u64,
    /// Maximum number of enumerated cycles.
    pub cycle_cap: usize,
    /// Fractional bounds are computed at nodes of at most this depth.
    pub lp_depth: usize,
    /// Fractional bounds are skipped when more cycles than this remain.
    pub lp_cycle_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { node_budget: 2_000_000, cycle_cap: 250_000, lp_depth: 4, lp_cycle_limit: 6_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleUnavailable {
    #[error("instance has more than {cap} copies of C_ell")]
    TooManyCycles { cap: usize },
    #[error("search exceeded the node budget of {budget}")]
    NodeBudget { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub packing: CyclePacking,
    /// False only when the search stopped because `limit` was reached.
    pub proven_optimal: bool,
    /// Best upper bound known when the search ended.
    pub upper_bound: usize,
    pub nodes: u64,
    pub cycles_considered: usize,
}

/// Maximum-cardinality family of vertex-disjoint `C_ell` copies in `g`.
///
/// With `limit = Some(k)` the search stops as soon as a packing of size `k`
/// is found.
pub fn max_disjoint_cycles_exact(
    g: &Graph,
    ell: usize,
    limit: Option<usize>,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleUnavailable> {
    assert!(ell >= 3);
    let enumeration = enumerate_cycles(g, ell, Some(cfg.cycle_cap));
    if enumeration.truncated {
        return Err(OracleUnavailable::TooManyCycles { cap: cfg.cycle_cap });
    }
    let mut search = Search::new(g.n(), ell, enumeration.cycles, limit, cfg);
    search.run()?;
    Ok(search.into_result())
}

struct Search<'a> {
    n: usize,
    ell: usize,
    cycles: Vec<Cycle>,
    cycles_at: Vec<Vec<usize>>,
    vertex_alive: Vec<bool>,
    cycle_alive: Vec<bool>,
    alive_cycles_at: Vec<usize>,
    /// Undo log of cycles killed, grouped per node.
    trail: Vec<usize>,
    current: Vec<usize>,
    best: Vec<usize>,
    limit: usize,
    root_bound: usize,
    nodes: u64,
    cfg: &'a OracleConfig,
    stopped_at_limit: bool,
}

impl<'a> Search<'a> {
    fn new(n: usize, ell: usize, cycles: Vec<Cycle>, limit: Option<usize>, cfg: &'a OracleConfig) -> Self {
        let mut cycles_at = vec![Vec::new(); n];
        for (i, c) in cycles.iter().enumerate() {
            for &v in c.vertices() {
                cycles_at[v].push(i);
            }
        }
        let alive_cycles_at = cycles_at.iter().map(Vec::len).collect();
        let count = cycles.len();
        Self {
            n,
            ell,
            cycles,
            cycles_at,
            vertex_alive: vec![true; n],
            cycle_alive: vec![true; count],
            alive_cycles_at,
            trail: Vec::new(),
            current: Vec::new(),
            best: Vec::new(),
            limit: limit.unwrap_or(usize::MAX),
            root_bound: n / ell,
            nodes: 0,
            cfg,
            stopped_at_limit: false,
        }
    }

    fn run(&mut self) -> Result<(), OracleUnavailable> {
        self.best = self.greedy();
        let mut bound = self.count_bound();
        if let Some(lp) = self.lp_bound() {
            bound = bound.min(lp);
        }
        self.root_bound = bound;
        if self.best.len() >= bound.min(self.limit) {
            self.stopped_at_limit = self.best.len() < bound;
            return Ok(());
        }
        self.branch(0)
    }

    fn into_result(self) -> OracleResult {
        let cycles = self.best.iter().map(|&i| self.cycles[i].clone()).collect();
        let proven_optimal = !self.stopped_at_limit;
        let upper_bound = if proven_optimal { self.best.len() } else { self.root_bound };
        OracleResult {
            packing: CyclePacking::with_cycles(self.ell, cycles),
            proven_optimal,
            upper_bound,
            nodes: self.nodes,
            cycles_considered: self.cycles.len(),
        }
    }

    /// Disjoint cycles picked in order of increasing conflict.
    fn greedy(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cycles.len()).collect();
        let weight = |i: usize| -> usize {
            self.cycles[i].vertices().iter().map(|&v| self.cycles_at[v].len()).sum()
        };
        order.sort_by_key(|&i| (weight(i), i));
        let mut used = vec![false; self.n];
        let mut out = Vec::new();
        for i in order {
            if self.cycles[i].vertices().iter().all(|&v| !used[v]) {
                for &v in self.cycles[i].vertices() {
                    used[v] = true;
                }
                out.push(i);
            }
        }
        out
    }

    fn count_bound(&self) -> usize {
        let live = (0..self.n).filter(|&v| self.vertex_alive[v] && self.alive_cycles_at[v] > 0).count();
        live / self.ell
    }

    fn lp_bound(&self) -> Option<usize> {
        let alive: Vec<&[usize]> = self
            .cycle_alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| self.cycles[i].vertices())
            .collect();
        if alive.len() > self.cfg.lp_cycle_limit {
            return None;
        }
        let value = packing_upper_bound(&alive, self.n, 50 * (alive.len() + self.n) + 1000)?;
        Some((value + 1e-7).floor() as usize)
    }

    /// Marks `v` dead and kills every alive cycle through it.
    fn kill_vertex(&mut self, v: usize) {
        self.vertex_alive[v] = false;
        for idx in 0..self.cycles_at[v].len() {
            let c = self.cycles_at[v][idx];
            if self.cycle_alive[c] {
                self.cycle_alive[c] = false;
                self.trail.push(c);
                for &w in self.cycles[c].vertices() {
                    self.alive_cycles_at[w] -= 1;
                }
            }
        }
    }

    fn undo_to(&mut self, mark: usize, vertices: &[usize]) {
        while self.trail.len() > mark {
            let c = self.trail.pop().unwrap();
            self.cycle_alive[c] = true;
            for &w in self.cycles[c].vertices() {
                self.alive_cycles_at[w] += 1;
            }
        }
        for &v in vertices {
            self.vertex_alive[v] = true;
        }
    }

    fn branch(&mut self, depth: usize) -> Result<(), OracleUnavailable> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            return Err(OracleUnavailable::NodeBudget { budget: self.cfg.node_budget });
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() >= self.limit.min(self.root_bound) {
            if self.best.len() < self.root_bound {
                self.stopped_at_limit = true;
            }
            return Ok(());
        }
        let mut bound = self.current.len() + self.count_bound();
        if bound <= self.best.len() {
            return Ok(());
        }
        if depth <= self.cfg.lp_depth {
            if let Some(lp) = self.lp_bound() {
                bound = bound.min(self.current.len() + lp);
                if bound <= self.best.len() {
                    return Ok(());
                }
            }
        }

        // Branch on the live vertex with the fewest alive cycles.
        let pivot = (0..self.n)
            .filter(|&v| self.vertex_alive[v] && self.alive_cycles_at[v] > 0)
            .min_by_key(|&v| (self.alive_cycles_at[v], v));
        let Some(v) = pivot else { return Ok(()) };

        let mut options: Vec<usize> =
            self.cycles_at[v].iter().copied().filter(|&c| self.cycle_alive[c]).collect();
        let pressure = |s: &Self, c: usize| -> usize {
            s.cycles[c].vertices().iter().map(|&w| s.alive_cycles_at[w]).sum()
        };
        options.sort_by_key(|&c| (pressure(self, c), c));

        for c in options {
            let verts: Vec<usize> = self.cycles[c].vertices().to_vec();
            let mark = self.trail.len();
            for &w in &verts {
                self.kill_vertex(w);
            }
            self.current.push(c);
            let r = self.branch(depth + 1);
            self.current.pop();
            self.undo_to(mark, &verts);
            r?;
            if self.best.len() >= self.limit.min(self.root_bound) {
                return Ok(());
            }
        }

        // Leave v uncovered.
        let mark = self.trail.len();
        self.kill_vertex(v);
        let r = self.branch(depth + 1);
        self.undo_to(mark, &[v]);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::verify_packing;
    use crate::generators::complete_multipartite;

    fn size(g: &Graph, ell: usize) -> usize {
        let r = max_disjoint_cycles_exact(g, ell, None, &OracleConfig::default()).unwrap();
        assert!(r.proven_optimal);
        assert!(verify_packing(g, &r.packing).is_valid());
        r.packing.len()
    }

    #[test]
    fn named_instances() {
        assert_eq!(size(&Graph::complete(6), 3), 2);
        assert_eq!(size(&complete_multipartite(&[2, 4]).unwrap(), 3), 0);
        assert_eq!(size(&Graph::cycle(6), 3), 0);
        assert_eq!(size(&Graph::petersen(), 5), 2);
        assert_eq!(size(&Graph::complete(4), 3), 1);
        assert_eq!(size(&complete_multipartite(&[10, 10]).unwrap(), 4), 5);
    }

    #[test]
    fn limit_stops_early() {
        let g = Graph::complete(9);
        let r = max_disjoint_cycles_exact(&g, 3, Some(2), &OracleConfig::default()).unwrap();
        assert!(r.packing.len() >= 2);
    }

    #[test]
    fn reports_unavailable_instead_of_guessing() {
        let g = Graph::complete(10);
        let cfg = OracleConfig { cycle_cap: 10, ..OracleConfig::default() };
        assert_eq!(
            max_disjoint_cycles_exact(&g, 3, None, &cfg),
            Err(OracleUnavailable::TooManyCycles { cap: 10 })
        );
        // A 3-regular graph with no perfect triangle cover forces real search.
        let g = Graph::petersen().union(&Graph::cycle(10));
        let cfg = OracleConfig { node_budget: 0, lp_depth: 0, lp_cycle_limit: 0, ..OracleConfig::default() };
        match max_disjoint_cycles_exact(&g, 3, None, &cfg) {
            Err(OracleUnavailable::NodeBudget { .. }) => {}
            Ok(r) => assert!(r.proven_optimal),
            Err(e) => panic!("{e}"),
        }
    }
}
