//! Even cycles found greedily in the host graph.
//!
//! A graph on `v` vertices with more than `K v^(1 + 2/ell)` edges contains a
//! `C_ell` for even `ell`; removing the vertices of each cycle found keeps
//! enough edges while fewer than `m` cycles exist. Each failure records the
//! edge count against that bound.

use crate::cycles::{find_cycle, CycleSearch};
use crate::graph::{full_set, Graph};

use super::{PackError, PackOutcome, PackerConfig, StageClock};

pub fn even_greedy_pack(g: &Graph, ell: usize, m: usize, cfg: &PackerConfig) -> Result<PackOutcome, PackError> {
    if ell < 4 || ell % 2 == 1 {
        return Err(PackError::CycleLength { ell, reason: "greedy packing needs an even length of at least 4" });
    }
    let clock = StageClock::start(cfg);
    let mut out = PackOutcome::new(ell, m);
    let mut alive = full_set(g.n());
    let mut note = None;
    while out.packing.len() < m {
        match find_cycle(g, ell, &alive, cfg.search_budget) {
            CycleSearch::Found(c) => {
                for &v in c.vertices() {
                    alive.set(v, false);
                }
                out.packing.cycles.push(c);
            }
            res => {
                let v = alive.count_ones(..);
                let e = g.edges_within(&alive);
                let bound = cfg.even_turan_constant * (v as f64).powf(1.0 + 2.0 / ell as f64);
                let why = if res == CycleSearch::Exhausted { "search budget exhausted" } else { "no cycle left" };
                note = Some(format!("{why}: e = {e} on v = {v} vertices, K v^(1+2/ell) = {bound:.1}"));
                break;
            }
        }
    }
    let achieved = out.packing.len();
    out.stages.push(clock.record("even_greedy", m, achieved, note));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::verify_packing;
    use crate::generators::complete_multipartite;

    #[test]
    fn small_cases() {
        let cfg = PackerConfig::calibrated(4);
        let k22 = complete_multipartite(&[2, 2]).unwrap();
        assert_eq!(even_greedy_pack(&k22, 4, 3, &cfg).unwrap().achieved(), 1);
        let path = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let out = even_greedy_pack(&path, 4, 2, &cfg).unwrap();
        assert_eq!(out.achieved(), 0);
        assert!(out.stages[0].note.as_deref().unwrap().contains("no cycle left"));
        let k1010 = complete_multipartite(&[10, 10]).unwrap();
        let out = even_greedy_pack(&k1010, 4, 5, &cfg).unwrap();
        assert_eq!(out.achieved(), 5);
        assert!(verify_packing(&k1010, &out.packing).is_valid());
        assert!(even_greedy_pack(&k1010, 5, 5, &cfg).is_err());
        let k2040 = complete_multipartite(&[20, 40]).unwrap();
        assert_eq!(even_greedy_pack(&k2040, 4, 10, &cfg).unwrap().achieved(), 10);
    }
}
