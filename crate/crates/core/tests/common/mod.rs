//! Brute-force references, written without any of the crate's search code.

#![allow(dead_code)]

use std::collections::HashMap;

use cycle_factors::Graph;

/// Vertex sets (as bitmasks) of size `ell` that span at least one `C_ell`.
/// Each candidate set is checked by trying every ordering of its vertices.
pub fn cycle_sets(g: &Graph, ell: usize) -> Vec<u32> {
    let n = g.n();
    assert!(n <= 20 && ell >= 3);
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != ell {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if spans_cycle(g, &vs) {
            out.push(mask);
        }
    }
    out
}

fn spans_cycle(g: &Graph, vs: &[usize]) -> bool {
    let mut rest: Vec<usize> = vs[1..].to_vec();
    permute_any(&mut rest, 0, &mut |order| {
        let mut prev = vs[0];
        for &v in order {
            if !g.has_edge(prev, v) {
                return false;
            }
            prev = v;
        }
        g.has_edge(prev, vs[0])
    })
}

fn permute_any(items: &mut Vec<usize>, k: usize, test: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return test(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permute_any(items, k + 1, test) {
            items.swap(k, i);
            return true;
        }
        items.swap(k, i);
    }
    false
}

/// Copies of `C_ell`: closing orderings of every vertex set, divided by the
/// `2 ell` rotations and reflections.
pub fn count_cycles(g: &Graph, ell: usize) -> usize {
    let n = g.n();
    let mut total = 0;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != ell {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut order = vs.clone();
        let mut closing = 0;
        all_orders(&mut order, 0, &mut |o| {
            if (0..ell).all(|i| g.has_edge(o[i], o[(i + 1) % ell])) {
                closing += 1;
            }
        });
        total += closing;
    }
    total / (2 * ell)
}

fn all_orders(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        all_orders(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Largest number of pairwise disjoint sets, by deciding the lowest free
/// vertex at each step (left uncovered, or covered by one set through it).
pub fn max_disjoint(sets: &[u32], n: usize) -> usize {
    fn go(free: u32, sets: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
        if free == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&free) {
            return v;
        }
        let low = free & free.wrapping_neg();
        let mut best = go(free & !low, sets, memo);
        for &s in sets {
            if s & low != 0 && s & free == s {
                best = best.max(1 + go(free & !s, sets, memo));
            }
        }
        memo.insert(free, best);
        best
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    go(full, sets, &mut HashMap::new())
}

pub fn brute_max_packing(g: &Graph, ell: usize) -> usize {
    if ell > g.n() {
        return 0;
    }
    max_disjoint(&cycle_sets(g, ell), g.n())
}

/// `n! / ((n - ell)! 2 ell)`, the number of `C_ell` copies in `K_n`.
pub fn complete_graph_cycles(n: usize, ell: usize) -> usize {
    if ell > n {
        return 0;
    }
    let falling: usize = (n - ell + 1..=n).product();
    falling / (2 * ell)
}

/// Graph from a list of pair bits in the order (0,1), (0,2), ..., (n-2,n-1).
pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

/// A small layered instance drawn from `seed`: `ell` in 3..=6, at most 12
/// vertices, between 2 and `ell` layers of random sizes and random pair densities.
pub fn random_layered(seed: u64) -> cycle_factors::layered::LayeredInstance {
    use cycle_factors::layered::LayeredSpec;
    use cycle_factors::rng::CounterRng;
    let rng = CounterRng::new(seed);
    let draw = |i: u64, m: u64| (rng.u64_at(0, i) % m) as usize;
    let ell = 3 + draw(0, 4);
    let total = ell * (1 + draw(1, (12 / ell) as u64));
    let k = (2 + draw(2, (ell - 1) as u64)).min(total);
    // Cut points splitting `total` into `k` positive parts.
    let mut cuts: Vec<usize> = Vec::new();
    let mut i = 10;
    while cuts.len() < k - 1 {
        let c = 1 + draw(i, (total - 1) as u64);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
        i += 1;
    }
    cuts.sort_unstable();
    cuts.push(total);
    let mut sizes = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts {
        sizes.push(c - prev);
        prev = c;
    }
    let pairs = if k == 2 { 1 } else { k };
    let levels = [0.3, 0.5, 0.7, 0.9, 1.0];
    let pair_p = (0..pairs).map(|j| levels[draw(100 + j as u64, 5)]).collect();
    let internal_p = [0.0, 0.3, 0.6][draw(200, 3)];
    let spec = LayeredSpec { ell, sizes, pair_p, internal_p, constants: Default::default() };
    spec.build(seed).expect("valid layered spec")
}

/// Whether `g` has a `C_ell`-factor, by brute force.
pub fn brute_has_factor(g: &Graph, ell: usize) -> bool {
    g.n() % ell == 0 && brute_max_packing(g, ell) == g.n() / ell
}
