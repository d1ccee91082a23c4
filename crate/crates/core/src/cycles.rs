//! Cycles, packings of vertex-disjoint cycles, and cycle enumeration.

use fixedbitset::FixedBitSet;
use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("a cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {0} repeats in the cycle")]
    RepeatedVertex(VertexId),
}

/// A cycle given by its vertices in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<VertexId>);

impl Cycle {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, CycleError> {
        if vertices.len() < 3 {
            return Err(CycleError::TooShort(vertices.len()));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CycleError::RepeatedVertex(w[0]));
        }
        Ok(Self(vertices))
    }

    /// Wraps a vertex list without checking it; `verify_packing` reports defects.
    pub fn from_raw(vertices: Vec<VertexId>) -> Self {
        Self(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive pairs including the closing pair.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    /// Rotation/reflection normal form: minimum vertex first, then the smaller
    /// of its two cycle neighbours.
    pub fn canonical(&self) -> Cycle {
        let k = self.0.len();
        if k == 0 {
            return self.clone();
        }
        let start = (0..k).min_by_key(|&i| self.0[i]).unwrap();
        let next = self.0[(start + 1) % k];
        let prev = self.0[(start + k - 1) % k];
        let out = if next <= prev {
            (0..k).map(|i| self.0[(start + i) % k]).collect()
        } else {
            (0..k).map(|i| self.0[(start + k - i) % k]).collect()
        };
        Cycle(out)
    }

    pub fn is_cycle_of(&self, g: &Graph) -> bool {
        self.edges().all(|(u, v)| g.has_edge(u, v))
    }

    pub fn map_vertices(&self, f: impl Fn(VertexId) -> VertexId) -> Cycle {
        Cycle(self.0.iter().map(|&v| f(v)).collect())
    }
}

/// A family of cycles of common length `ell`, intended to be vertex-disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePacking {
    pub ell: usize,
    pub cycles: Vec<Cycle>,
}

impl CyclePacking {
    pub fn new(ell: usize) -> Self {
        Self { ell, cycles: Vec::new() }
    }

    pub fn with_cycles(ell: usize, cycles: Vec<Cycle>) -> Self {
        Self { ell, cycles }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.cycles.iter().flat_map(|c| c.vertices().iter().copied())
    }

    /// Set of covered vertices over `0..n`.
    pub fn covered(&self, n: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for v in self.vertices() {
            if v < n {
                s.insert(v);
            }
        }
        s
    }

    pub fn extend(&mut self, other: CyclePacking) {
        debug_assert_eq!(self.ell, other.ell);
        self.cycles.extend(other.cycles);
    }

    pub fn truncate(&mut self, len: usize) {
        self.cycles.truncate(len);
    }
}

/// One defect found by [`verify_packing`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WrongLength { cycle: usize, len: usize, expected: usize },
    VertexOutOfRange { cycle: usize, vertex: VertexId },
    RepeatedVertex { cycle: usize, vertex: VertexId },
    NonEdge { cycle: usize, u: VertexId, v: VertexId },
    SharedVertex { vertex: VertexId, first: usize, second: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingReport {
    pub violations: Vec<Violation>,
}

impl PackingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks length, membership and disjointness of every cycle; reports all defects.
pub fn verify_packing(g: &Graph, packing: &CyclePacking) -> PackingReport {
    let n = g.n();
    let mut violations = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (ci, cycle) in packing.cycles.iter().enumerate() {
        if cycle.len() != packing.ell {
            violations.push(Violation::WrongLength { cycle: ci, len: cycle.len(), expected: packing.ell });
        }
        let mut in_range = true;
        for &v in cycle.vertices() {
            if v >= n {
                violations.push(Violation::VertexOutOfRange { cycle: ci, vertex: v });
                in_range = false;
                continue;
            }
            match owner[v] {
                Some(prev) if prev == ci => {
                    violations.push(Violation::RepeatedVertex { cycle: ci, vertex: v })
                }
                Some(prev) => violations.push(Violation::SharedVertex { vertex: v, first: prev, second: ci }),
                None => owner[v] = Some(ci),
            }
        }
        if in_range && cycle.len() >= 2 {
            for (u, v) in cycle.edges() {
                if !g.has_edge(u, v) {
                    violations.push(Violation::NonEdge { cycle: ci, u, v });
                }
            }
        }
    }
    PackingReport { violations }
}

/// Output of [`enumerate_cycles`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleEnumeration {
    pub cycles: Vec<Cycle>,
    /// Set when `cap` stopped the enumeration early.
    pub truncated: bool,
}

/// Lists every copy of `C_ell` in `g` once, in canonical form, ordered by
/// their canonical vertex sequences.
pub fn enumerate_cycles(g: &Graph, ell: usize, cap: Option<usize>) -> CycleEnumeration {
    assert!(ell >= 3, "cycle length must be at least 3");
    let n = g.n();
    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut on_path = FixedBitSet::with_capacity(n);
    let mut path = Vec::with_capacity(ell);
    let mut truncated = false;

    // Explicit DFS stack of (vertex, next neighbour index).
    'roots: for root in 0..n {
        if g.degree(root) < 2 {
            continue;
        }
        path.clear();
        path.push(root);
        on_path.insert(root);
        let mut stack: Vec<usize> = vec![0];
        while let Some(&idx) = stack.last() {
            let depth = path.len();
            let tip = *path.last().unwrap();
            let ns = g.neighbors(tip);
            if depth == ell {
                // Close back to the root; keep one of the two orientations.
                if g.has_edge(tip, root) && path[1] < tip {
                    if out.len() >= cap {
                        truncated = true;
                        on_path.clear();
                        break 'roots;
                    }
                    out.push(Cycle(path.clone()));
                }
                stack.pop();
                on_path.set(path.pop().unwrap(), false);
                continue;
            }
            if idx >= ns.len() {
                stack.pop();
                let v = path.pop().unwrap();
                if v != root {
                    on_path.set(v, false);
                }
                continue;
            }
            *stack.last_mut().unwrap() += 1;
            let w = ns[idx];
            if w <= root || on_path.contains(w) {
                continue;
            }
            path.push(w);
            on_path.insert(w);
            stack.push(0);
        }
        on_path.set(root, false);
    }
    out.sort();
    CycleEnumeration { cycles: out, truncated }
}

/// Outcome of [`find_cycle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleSearch {
    Found(Cycle),
    NotFound,
    /// The expansion budget ran out before the search completed.
    Exhausted,
}

/// Finds one copy of `C_ell` among `alive` vertices.
///
/// Depth-first path search rooted at each vertex (as the minimum vertex of the
/// cycle) with breadth-first layer distances to the root used for pruning.
/// Complete unless `budget` expansions are exceeded.
pub fn find_cycle(g: &Graph, ell: usize, alive: &FixedBitSet, budget: u64) -> CycleSearch {
    assert!(ell >= 3);
    let n = g.n();
    let mut spent = 0u64;
    let mut dist = vec![usize::MAX; n];
    let mut on_path = FixedBitSet::with_capacity(n);
    let mut queue = Vec::new();
    let max_back = ell / 2 + 1;
    for root in alive.ones() {
        if g.degree(root) < 2 {
            continue;
        }
        // Layer distances from the root inside alive vertices greater than it.
        let mut touched = vec![root];
        dist[root] = 0;
        queue.clear();
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            if dist[u] >= max_back {
                continue;
            }
            for &w in g.neighbors(u) {
                if w > root && alive.contains(w) && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    queue.push(w);
                }
            }
        }
        let mut path = vec![root];
        on_path.insert(root);
        let mut stack: Vec<usize> = vec![0];
        let mut found = None;
        while let Some(&idx) = stack.last() {
            let tip = *path.last().unwrap();
            if path.len() == ell {
                if g.has_edge(tip, root) {
                    found = Some(Cycle(path.clone()));
                    break;
                }
                stack.pop();
                on_path.set(path.pop().unwrap(), false);
                continue;
            }
            let ns = g.neighbors(tip);
            if idx >= ns.len() {
                stack.pop();
                let v = path.pop().unwrap();
                on_path.set(v, false);
                continue;
            }
            *stack.last_mut().unwrap() += 1;
            let w = ns[idx];
            if w <= root || !alive.contains(w) || on_path.contains(w) {
                continue;
            }
            // After stepping to w there are ell - len - 1 more edges including the closing one.
            let remaining = ell - path.len();
            if dist[w] > remaining {
                continue;
            }
            spent += 1;
            if spent > budget {
                for &t in &touched {
                    dist[t] = usize::MAX;
                }
                return CycleSearch::Exhausted;
            }
            path.push(w);
            on_path.insert(w);
            stack.push(0);
        }
        for &v in &path {
            on_path.set(v, false);
        }
        for &t in &touched {
            dist[t] = usize::MAX;
        }
        if let Some(c) = found {
            return CycleSearch::Found(c);
        }
    }
    CycleSearch::NotFound
}

/// Expected number of copies of `C_ell` in `G(n, p)`:
/// `C(n, ell) * (ell - 1)! / 2 * p^ell`.
pub fn expected_cycle_count<T: Float>(n: usize, ell: usize, p: T) -> T {
    assert!(ell >= 3, "cycle length must be at least 3");
    if ell > n {
        return T::zero();
    }
    // C(n, ell) (ell-1)!/2 = n (n-1) ... (n-ell+1) / (2 ell)
    let mut count = T::one();
    for i in 0..ell {
        count = count * T::from(n - i).unwrap();
    }
    count = count / T::from(2 * ell).unwrap();
    count * p.powi(ell as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::full_set;

    #[test]
    fn canonical_form_normalizes_rotation_and_reflection() {
        let c = Cycle::new(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(c.canonical().vertices(), &[1, 3, 2, 4]);
        let r = Cycle::new(vec![2, 4, 1, 3]).unwrap();
        assert_eq!(r.canonical(), c.canonical());
        assert_eq!(Cycle::new(vec![0, 1]), Err(CycleError::TooShort(2)));
        assert_eq!(Cycle::new(vec![0, 1, 0]), Err(CycleError::RepeatedVertex(0)));
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_cycles(&Graph::complete(4), 3, None).cycles.len(), 4);
        let k24 = crate::generators::complete_multipartite(&[2, 4]).unwrap();
        assert!(enumerate_cycles(&k24, 3, None).cycles.is_empty());
        assert_eq!(enumerate_cycles(&Graph::complete(5), 5, None).cycles.len(), 12);
        assert_eq!(enumerate_cycles(&Graph::petersen(), 5, None).cycles.len(), 12);
        for c in enumerate_cycles(&Graph::complete(6), 4, None).cycles {
            assert_eq!(c, c.canonical());
        }
    }

    #[test]
    fn enumeration_reports_truncation() {
        let e = enumerate_cycles(&Graph::complete(6), 3, Some(5));
        assert!(e.truncated);
        assert_eq!(e.cycles.len(), 5);
        let e = enumerate_cycles(&Graph::complete(6), 3, Some(20));
        assert!(!e.truncated);
        assert_eq!(e.cycles.len(), 20);
    }

    #[test]
    fn verify_reports_each_defect() {
        let k6 = Graph::complete(6);
        let ok = CyclePacking::with_cycles(3, vec![Cycle::from_raw(vec![0, 1, 2]), Cycle::from_raw(vec![3, 4, 5])]);
        assert!(verify_packing(&k6, &ok).is_valid());

        let shared = CyclePacking::with_cycles(3, vec![Cycle::from_raw(vec![0, 1, 2]), Cycle::from_raw(vec![2, 3, 4])]);
        assert_eq!(
            verify_packing(&k6, &shared).violations,
            vec![Violation::SharedVertex { vertex: 2, first: 0, second: 1 }]
        );

        let k24 = crate::generators::complete_multipartite(&[2, 4]).unwrap();
        let bad = CyclePacking::with_cycles(3, vec![Cycle::from_raw(vec![0, 2, 3])]);
        assert_eq!(
            verify_packing(&k24, &bad).violations,
            vec![Violation::NonEdge { cycle: 0, u: 2, v: 3 }]
        );

        let wrong_len = CyclePacking::with_cycles(4, vec![Cycle::from_raw(vec![0, 1, 2])]);
        assert_eq!(
            verify_packing(&k6, &wrong_len).violations,
            vec![Violation::WrongLength { cycle: 0, len: 3, expected: 4 }]
        );
        let out = CyclePacking::with_cycles(3, vec![Cycle::from_raw(vec![0, 1, 9])]);
        assert_eq!(
            verify_packing(&k6, &out).violations,
            vec![Violation::VertexOutOfRange { cycle: 0, vertex: 9 }]
        );
    }

    #[test]
    fn find_cycle_matches_enumeration_on_small_graphs() {
        let g = Graph::petersen();
        let alive = full_set(10);
        for ell in 3..=10 {
            let expected = !enumerate_cycles(&g, ell, None).cycles.is_empty();
            match find_cycle(&g, ell, &alive, u64::MAX) {
                CycleSearch::Found(c) => {
                    assert!(expected);
                    assert_eq!(c.len(), ell);
                    assert!(c.is_cycle_of(&g));
                }
                CycleSearch::NotFound => assert!(!expected, "ell={ell}"),
                CycleSearch::Exhausted => unreachable!(),
            }
        }
        assert_eq!(find_cycle(&Graph::complete(6), 4, &alive_of(6), 0), CycleSearch::Exhausted);
    }

    fn alive_of(n: usize) -> FixedBitSet {
        full_set(n)
    }

    #[test]
    fn first_moment_values() {
        assert!((expected_cycle_count(5, 5, 1.0f64) - 12.0).abs() < 1e-12);
        assert_eq!(expected_cycle_count(9, 4, 0.0f64), 0.0);
        assert!((expected_cycle_count(30, 4, 0.1f64) - 8.2215).abs() < 1e-9);
        assert!((expected_cycle_count(30, 4, 0.1f32) - 8.2215).abs() < 1e-3);
        assert_eq!(expected_cycle_count(3, 5, 1.0f64), 0.0);
    }
}
