//! Extremal constructions, binomial random graphs and perturbed instances.
//!
//! All random generators are pure functions of their seed. Edge indicators
//! of `G(n, p)` come from a counter-based source keyed on `(seed, pair index)`,
//! so the pair `{u, v}` is present iff `U(seed, pair) < p`. Using one uniform
//! per pair couples all densities: the sample at `p` contains the sample at
//! any `p' < p`, and disjoint slices `[a, b)` of the unit interval give
//! disjoint edge sets with marginal density `b - a` (see [`RoundSlice`]).

use num_rational::Ratio;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, VertexId};
use crate::rng::{seq_rng, streams, CounterRng};
use crate::scalar::Fraction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("a multipartite graph needs at least one class")]
    NoClasses,
    #[error("class sizes must be at least 1")]
    EmptyClass,
    #[error("class size {what} = {value} is not a positive integer")]
    ClassSize { what: &'static str, value: String },
    #[error("alpha = {alpha} outside the allowed range {range}")]
    AlphaRange { alpha: String, range: String },
    #[error("cycle length {0} is invalid here")]
    CycleLength(usize),
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("min degree {m} must be below n = {n}")]
    MinDegree { m: usize, n: usize },
    #[error("degree cap {cap} is below the required minimum degree {m}")]
    InfeasibleCap { cap: usize, m: usize },
    #[error("could not reach minimum degree {m} under degree cap {cap}")]
    RepairFailed { m: usize, cap: usize },
    #[error("{0}")]
    Invalid(String),
}

fn check_probability(p: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GeneratorError::Probability(p))
    }
}

/// Index of the pair `{u, v}` among the `C(n, 2)` pairs in lexicographic order.
#[inline]
pub fn pair_index(u: VertexId, v: VertexId, n: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    let (a, b, n) = (a as u64, b as u64, n as u64);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Complete multipartite graph; class `i` occupies a contiguous block of ids.
pub fn complete_multipartite(class_sizes: &[usize]) -> Result<Graph, GeneratorError> {
    if class_sizes.is_empty() {
        return Err(GeneratorError::NoClasses);
    }
    if class_sizes.contains(&0) {
        return Err(GeneratorError::EmptyClass);
    }
    let n: usize = class_sizes.iter().sum();
    let mut class = Vec::with_capacity(n);
    for (i, &s) in class_sizes.iter().enumerate() {
        class.extend(std::iter::repeat(i).take(s));
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if class[u] != class[v] {
                b.add_edge_unchecked(u, v);
            }
        }
    }
    Ok(b.build())
}

fn integral_size(what: &'static str, value: Ratio<i64>) -> Result<usize, GeneratorError> {
    if value.is_integer() && value > Ratio::zero() {
        Ok(value.to_integer() as usize)
    } else {
        Err(GeneratorError::ClassSize { what, value: Fraction(value).to_string() })
    }
}

/// `K_{alpha n, (1 - alpha) n}` for `0 < alpha < 1/2`.
pub fn extremal_even(alpha: Fraction, n: usize) -> Result<Graph, GeneratorError> {
    let a = alpha.0;
    let nr = Ratio::from_integer(n as i64);
    let small = integral_size("alpha n", a * nr)?;
    if !(a > Ratio::zero() && a < Ratio::new(1, 2)) {
        return Err(GeneratorError::AlphaRange { alpha: alpha.to_string(), range: "(0, 1/2)".into() });
    }
    complete_multipartite(&[small, n - small])
}

/// Class sizes of the odd-cycle extremal tripartite graph:
/// `(alpha - (ell-1)/(2 ell)) n` and twice `(1/2 - alpha/2 + (ell-1)/(4 ell)) n`.
pub fn extremal_odd_classes(alpha: Fraction, ell: usize, n: usize) -> Result<[usize; 3], GeneratorError> {
    if ell < 3 || ell % 2 == 0 {
        return Err(GeneratorError::CycleLength(ell));
    }
    let a = alpha.0;
    let l = ell as i64;
    let nr = Ratio::from_integer(n as i64);
    let first = (a - Ratio::new(l - 1, 2 * l)) * nr;
    let other = (Ratio::new(1, 2) - a / 2 + Ratio::new(l - 1, 4 * l)) * nr;
    let first = integral_size("(alpha - (ell-1)/(2 ell)) n", first)?;
    let other = integral_size("(1/2 - alpha/2 + (ell-1)/(4 ell)) n", other)?;
    if !(a >= Ratio::new(1, 2) && a < Ratio::new(l + 1, 2 * l)) {
        return Err(GeneratorError::AlphaRange {
            alpha: alpha.to_string(),
            range: format!("[1/2, {}/{})", l + 1, 2 * l),
        });
    }
    Ok([first, other, other])
}

/// Complete tripartite extremal graph for odd `ell` and `1/2 <= alpha < (ell+1)/(2 ell)`.
pub fn extremal_odd(alpha: Fraction, ell: usize, n: usize) -> Result<Graph, GeneratorError> {
    complete_multipartite(&extremal_odd_classes(alpha, ell, n)?)
}

/// Binomial random graph `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GeneratorError> {
    check_probability(p)?;
    let rng = CounterRng::new(seed);
    let mut b = GraphBuilder::new(n);
    if p > 0.0 {
        for u in 0..n {
            for v in u + 1..n {
                if rng.unit_at(streams::EDGES, pair_index(u, v, n)) < p {
                    b.add_edge_unchecked(u, v);
                }
            }
        }
    }
    Ok(b.build())
}

/// Random bipartite graph on `0..u_size` and `u_size..u_size + v_size`.
pub fn bipartite_gnp(u_size: usize, v_size: usize, p: f64, seed: u64) -> Result<Graph, GeneratorError> {
    check_probability(p)?;
    let rng = CounterRng::new(seed);
    let mut b = GraphBuilder::new(u_size + v_size);
    if p > 0.0 {
        for i in 0..u_size {
            for j in 0..v_size {
                if rng.unit_at(streams::BIPARTITE_EDGES, (i * v_size + j) as u64) < p {
                    b.add_edge_unchecked(i, u_size + j);
                }
            }
        }
    }
    Ok(b.build())
}

/// Where an edge of the union comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeOrigin {
    Deterministic,
    Random,
    Both,
}

/// Sub-interval `[lo, hi)` of the per-pair uniform, used to reveal fresh
/// edge sets in rounds. A slice lies inside the random part iff `hi <= p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundSlice {
    pub lo: f64,
    pub hi: f64,
}

impl RoundSlice {
    /// The `index`-th of consecutive slices of width `width`.
    pub fn nth(index: usize, width: f64) -> Self {
        Self { lo: index as f64 * width, hi: (index + 1) as f64 * width }
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.lo && u < self.hi
    }
}

/// `G ∪ G(n, p)` on a shared vertex set, with origin labels.
#[derive(Clone, Debug)]
pub struct PerturbedGraph {
    base: Graph,
    random: Graph,
    union: Graph,
    p: f64,
    seed: u64,
    /// Label of each local vertex in the host instance (identity unless induced).
    ids: Vec<VertexId>,
    host_n: usize,
}

impl PerturbedGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn random_part(&self) -> &Graph {
        &self.random
    }

    pub fn union(&self) -> &Graph {
        &self.union
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Host-instance label of local vertex `v`.
    pub fn host_id(&self, v: VertexId) -> VertexId {
        self.ids[v]
    }

    pub fn host_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn origin(&self, u: VertexId, v: VertexId) -> Option<EdgeOrigin> {
        match (self.base.has_edge(u, v), self.random.has_edge(u, v)) {
            (true, true) => Some(EdgeOrigin::Both),
            (true, false) => Some(EdgeOrigin::Deterministic),
            (false, true) => Some(EdgeOrigin::Random),
            (false, false) => None,
        }
    }

    /// The uniform attached to the pair `{u, v}`.
    pub fn pair_uniform(&self, u: VertexId, v: VertexId) -> f64 {
        let idx = pair_index(self.ids[u], self.ids[v], self.host_n);
        CounterRng::new(self.seed).unit_at(streams::EDGES, idx)
    }

    /// Whether `{u, v}` is revealed in the given round slice.
    pub fn round_edge(&self, u: VertexId, v: VertexId, slice: RoundSlice) -> bool {
        u != v && slice.contains(self.pair_uniform(u, v))
    }

    /// Random neighbours of `v` that belong to `slice`; for slices with
    /// `hi <= p` these are a subset of the random part.
    pub fn round_neighbors(&self, v: VertexId, slice: RoundSlice) -> impl Iterator<Item = VertexId> + '_ {
        let full = slice.lo <= 0.0 && slice.hi >= self.p;
        self.random
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| full || self.round_edge(v, w, slice))
    }

    /// Restriction to `keep`; local vertex `i` of the result is `keep[i]` here.
    pub fn induced(&self, keep: &[VertexId]) -> PerturbedGraph {
        PerturbedGraph {
            base: self.base.induced(keep),
            random: self.random.induced(keep),
            union: self.union.induced(keep),
            p: self.p,
            seed: self.seed,
            ids: keep.iter().map(|&v| self.ids[v]).collect(),
            host_n: self.host_n,
        }
    }
}

/// Adds a fresh sample of `G(n, p)` keyed by `seed` to `g`.
pub fn perturb(g: &Graph, p: f64, seed: u64) -> Result<PerturbedGraph, GeneratorError> {
    let random = gnp(g.n(), p, seed)?;
    let union = g.union(&random);
    Ok(PerturbedGraph {
        base: g.clone(),
        random,
        union,
        p,
        seed,
        ids: (0..g.n()).collect(),
        host_n: g.n(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinDegreeOptions {
    /// The initial sample is `G(n, density_factor * m / n)`.
    pub density_factor: f64,
    /// Maximum degree allowed; `None` means `n - 1`.
    pub max_degree: Option<usize>,
}

impl Default for MinDegreeOptions {
    fn default() -> Self {
        Self { density_factor: 1.0, max_degree: None }
    }
}

/// Random graph with `δ >= m`: sparse `G(n, c m / n)` followed by a repair
/// pass joining each deficient vertex (lowest degree first) to its
/// lowest-degree non-neighbours, ties broken by a seeded priority.
pub fn min_degree_random(n: usize, m: usize, seed: u64, opts: &MinDegreeOptions) -> Result<Graph, GeneratorError> {
    if n > 0 && m >= n {
        return Err(GeneratorError::MinDegree { m, n });
    }
    let cap = opts.max_degree.unwrap_or(n.saturating_sub(1));
    if cap < m {
        return Err(GeneratorError::InfeasibleCap { cap, m });
    }
    let p = if n == 0 { 0.0 } else { (opts.density_factor * m as f64 / n as f64).clamp(0.0, 1.0) };
    let rng = CounterRng::new(seed);
    let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit_at(streams::EDGES, pair_index(u, v, n)) < p && deg[u] < cap && deg[v] < cap {
                adj[u][v] = true;
                adj[v][u] = true;
                deg[u] += 1;
                deg[v] += 1;
            }
        }
    }
    let mut prio: Vec<u64> = (0..n).map(|v| rng.u64_at(streams::PRIORITY, v as u64)).collect();
    let mut shuffle = seq_rng(seed, &[streams::PRIORITY]);
    loop {
        let Some(v) = (0..n).filter(|&v| deg[v] < m).min_by_key(|&v| (deg[v], prio[v])) else {
            break;
        };
        let partner = (0..n)
            .filter(|&w| w != v && !adj[v][w] && deg[w] < cap)
            .min_by_key(|&w| (deg[w], prio[w]));
        let Some(w) = partner else {
            return Err(GeneratorError::RepairFailed { m, cap });
        };
        adj[v][w] = true;
        adj[w][v] = true;
        deg[v] += 1;
        deg[w] += 1;
        // Refresh priorities of the pair so repeated ties rotate between vertices.
        prio[w] = shuffle.gen();
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] {
                b.add_edge_unchecked(u, v);
            }
        }
    }
    Ok(b.build())
}

/// Named instance families, as they appear in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionSpec {
    Complete { n: usize },
    Multipartite { sizes: Vec<usize> },
    CompleteBipartite { a: usize, b: usize },
    CompleteTripartite { a: usize, b: usize, c: usize },
    ExtremalEven { alpha: Fraction, n: usize },
    ExtremalOdd { alpha: Fraction, ell: usize, n: usize },
    /// `K_{n/ell, n - n/ell}`, the witness that `log n / n` is needed at `alpha = 1/ell`.
    BipartiteExtremalLog { n: usize, ell: usize },
    Gnp { n: usize, p: f64 },
    MinDegreeRandom {
        n: usize,
        m: usize,
        #[serde(default)]
        options: MinDegreeOptions,
    },
}

impl ConstructionSpec {
    pub fn n(&self) -> usize {
        match self {
            Self::Complete { n }
            | Self::ExtremalEven { n, .. }
            | Self::ExtremalOdd { n, .. }
            | Self::BipartiteExtremalLog { n, .. }
            | Self::Gnp { n, .. }
            | Self::MinDegreeRandom { n, .. } => *n,
            Self::Multipartite { sizes } => sizes.iter().sum(),
            Self::CompleteBipartite { a, b } => a + b,
            Self::CompleteTripartite { a, b, c } => a + b + c,
        }
    }

    /// Minimum-degree ratio the construction is designed for, if it has one.
    pub fn alpha(&self) -> Option<Fraction> {
        match self {
            Self::ExtremalEven { alpha, .. } | Self::ExtremalOdd { alpha, .. } => Some(*alpha),
            Self::BipartiteExtremalLog { ell, .. } => Some(Fraction::new(1, *ell as i64)),
            _ => None,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Self::Gnp { .. } | Self::MinDegreeRandom { .. })
    }

    /// Builds the graph; deterministic kinds ignore `seed`.
    pub fn build(&self, seed: u64) -> Result<Graph, GeneratorError> {
        match self {
            Self::Complete { n } => Ok(Graph::complete(*n)),
            Self::Multipartite { sizes } => complete_multipartite(sizes),
            Self::CompleteBipartite { a, b } => complete_multipartite(&[*a, *b]),
            Self::CompleteTripartite { a, b, c } => complete_multipartite(&[*a, *b, *c]),
            Self::ExtremalEven { alpha, n } => extremal_even(*alpha, *n),
            Self::ExtremalOdd { alpha, ell, n } => extremal_odd(*alpha, *ell, *n),
            Self::BipartiteExtremalLog { n, ell } => {
                if *ell < 3 {
                    return Err(GeneratorError::CycleLength(*ell));
                }
                if n % ell != 0 || *n == 0 {
                    return Err(GeneratorError::Invalid(format!("ell = {ell} must divide n = {n}")));
                }
                complete_multipartite(&[n / ell, n - n / ell])
            }
            Self::Gnp { n, p } => gnp(*n, *p, seed),
            Self::MinDegreeRandom { n, m, options } => min_degree_random(*n, *m, seed, options),
        }
    }
}

/// Random permutation of `0..n`, reproducible from `seed`.
pub fn seeded_permutation(n: usize, seed: u64, label: u64) -> Vec<VertexId> {
    let mut v: Vec<VertexId> = (0..n).collect();
    v.shuffle(&mut seq_rng(seed, &[label]));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multipartite_degrees() {
        let g = complete_multipartite(&[2, 4]).unwrap();
        assert_eq!((g.n(), g.min_degree()), (6, 2));
        let g = complete_multipartite(&[4, 10, 10]).unwrap();
        assert_eq!(g.min_degree(), 14);
        assert_eq!(complete_multipartite(&[1, 1, 1]).unwrap(), Graph::complete(3));
        assert_eq!(complete_multipartite(&[]), Err(GeneratorError::NoClasses));
        assert_eq!(complete_multipartite(&[3, 0]), Err(GeneratorError::EmptyClass));
    }

    #[test]
    fn extremal_even_classes() {
        let g = extremal_even(Fraction::new(1, 4), 16).unwrap();
        assert_eq!(g, complete_multipartite(&[4, 12]).unwrap());
        assert_eq!(extremal_even(Fraction::new(1, 3), 6).unwrap(), complete_multipartite(&[2, 4]).unwrap());
        let g = extremal_even(Fraction::new(1, 3), 60).unwrap();
        assert_eq!(g.min_degree(), 20);
        assert_eq!(g.max_degree(), 40);
        assert!(matches!(extremal_even(Fraction::new(1, 4), 10), Err(GeneratorError::ClassSize { .. })));
        assert!(matches!(extremal_even(Fraction::new(1, 2), 10), Err(GeneratorError::AlphaRange { .. })));
    }

    #[test]
    fn extremal_odd_classes_match_formulas() {
        assert_eq!(extremal_odd_classes(Fraction::new(1, 2), 3, 24).unwrap(), [4, 10, 10]);
        assert_eq!(extremal_odd(Fraction::new(1, 2), 3, 24).unwrap().min_degree(), 14);
        assert_eq!(extremal_odd_classes(Fraction::new(7, 12), 3, 24).unwrap(), [6, 9, 9]);
        assert_eq!(extremal_odd(Fraction::new(7, 12), 3, 24).unwrap().min_degree(), 15);
        // alpha = (ell-1)/(2 ell) forces an empty first class.
        assert!(matches!(
            extremal_odd_classes(Fraction::new(1, 3), 3, 24),
            Err(GeneratorError::ClassSize { .. })
        ));
        assert!(matches!(extremal_odd_classes(Fraction::new(1, 2), 4, 24), Err(GeneratorError::CycleLength(4))));
    }

    #[test]
    fn gnp_extremes_and_reproducibility() {
        assert_eq!(gnp(20, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gnp(20, 1.0, 1).unwrap(), Graph::complete(20));
        assert_eq!(gnp(50, 0.3, 9).unwrap(), gnp(50, 0.3, 9).unwrap());
        assert_ne!(gnp(50, 0.3, 9).unwrap(), gnp(50, 0.3, 10).unwrap());
        assert!(gnp(5, 1.5, 0).is_err());
        let g = bipartite_gnp(3, 4, 1.0, 0).unwrap();
        assert_eq!(g, complete_multipartite(&[3, 4]).unwrap());
        assert_eq!(bipartite_gnp(3, 4, 0.0, 0).unwrap().edge_count(), 0);
    }

    #[test]
    fn pair_index_is_a_bijection() {
        let n = 9;
        let mut seen: Vec<u64> = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                seen.push(pair_index(u, v, n));
                assert_eq!(pair_index(u, v, n), pair_index(v, u, n));
            }
        }
        let expected: Vec<u64> = (0..(n * (n - 1) / 2) as u64).collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn perturbation_labels() {
        let g = complete_multipartite(&[2, 4]).unwrap();
        let pg = perturb(&g, 0.0, 3).unwrap();
        assert_eq!(pg.union(), &g);
        let pg = perturb(&Graph::empty(7), 1.0, 3).unwrap();
        assert_eq!(pg.union(), &Graph::complete(7));
        assert!(pg.union().edges().all(|(u, v)| pg.origin(u, v) == Some(EdgeOrigin::Random)));
        let pg = perturb(&g, 0.5, 3).unwrap();
        for (u, v) in g.edges() {
            assert!(matches!(pg.origin(u, v), Some(EdgeOrigin::Deterministic | EdgeOrigin::Both)));
        }
        for (u, v) in pg.union().edges() {
            let o = pg.origin(u, v).unwrap();
            assert_eq!(matches!(o, EdgeOrigin::Random | EdgeOrigin::Both), pg.random_part().has_edge(u, v));
        }
    }

    #[test]
    fn round_slices_partition_the_random_part() {
        let pg = perturb(&Graph::empty(40), 0.3, 11).unwrap();
        let slices: Vec<RoundSlice> = (0..3).map(|i| RoundSlice::nth(i, 0.1)).collect();
        for (u, v) in pg.random_part().edges() {
            assert_eq!(slices.iter().filter(|s| pg.round_edge(u, v, **s)).count(), 1);
        }
        for u in 0..40 {
            for &s in &slices {
                for w in pg.round_neighbors(u, s) {
                    assert!(pg.random_part().has_edge(u, w));
                }
            }
        }
        let sub = pg.induced(&[5, 7, 9]);
        assert_eq!(sub.pair_uniform(0, 2), pg.pair_uniform(5, 9));
        assert_eq!(sub.host_id(1), 7);
    }

    #[test]
    fn min_degree_repair() {
        let opts = MinDegreeOptions::default();
        assert!(min_degree_random(30, 0, 1, &opts).is_ok());
        assert_eq!(min_degree_random(12, 11, 5, &opts).unwrap(), Graph::complete(12));
        for seed in 0..20 {
            assert!(min_degree_random(50, 5, seed, &opts).unwrap().min_degree() >= 5);
        }
        let capped = MinDegreeOptions { max_degree: Some(3), ..opts.clone() };
        assert_eq!(min_degree_random(20, 4, 1, &capped), Err(GeneratorError::InfeasibleCap { cap: 3, m: 4 }));
        let capped = MinDegreeOptions { max_degree: Some(8), ..opts };
        let g = min_degree_random(60, 6, 2, &capped).unwrap();
        assert!(g.min_degree() >= 6 && g.max_degree() <= 8);
    }

    #[test]
    fn construction_specs_round_trip() {
        let spec: ConstructionSpec =
            serde_json::from_str(r#"{"kind":"extremal_even","alpha":"1/3","n":60}"#).unwrap();
        assert_eq!(spec.n(), 60);
        assert_eq!(spec.alpha(), Some(Fraction::new(1, 3)));
        assert_eq!(spec.build(0).unwrap().min_degree(), 20);
        let back: ConstructionSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let log = ConstructionSpec::BipartiteExtremalLog { n: 60, ell: 3 };
        assert_eq!(log.build(0).unwrap(), complete_multipartite(&[20, 40]).unwrap());
        assert!(ConstructionSpec::BipartiteExtremalLog { n: 61, ell: 3 }.build(0).is_err());
    }
}
