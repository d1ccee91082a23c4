//! Cycle factors of layered instances: a layer `V`, layers `U_1, ..., U_{k-1}`
//! joined in a cyclic chain `V - U_1 - ... - U_{k-1} - V` by cross graphs,
//! and optional internal edges inside `V`.
//!
//! Vertices are numbered layer by layer, `V` first.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{Cycle, CyclePacking};
use crate::graph::{Graph, GraphBuilder, VertexId};
use crate::oracle::{max_disjoint_cycles_exact, OracleConfig, OracleUnavailable};
use crate::rng::{derive_seed, seq_rng, streams, CounterRng};

#[derive(Debug, Error, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayeredError {
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("parameters out of range: {0}")]
    Params(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("exact mode allows at most {bound} vertices, instance has {total}")]
    TooLarge { total: usize, bound: usize },
    #[error("no factor: the largest packing has {maximum} cycles, {needed} are needed")]
    Infeasible { maximum: usize, needed: usize },
    #[error("no factor found after {restarts} restarts; best attempt left {unclosed} cycles unclosed")]
    BudgetExhausted { restarts: usize, unclosed: usize },
    #[error(transparent)]
    Oracle(#[from] OracleUnavailable),
}

/// Which size pattern an instance follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerShape {
    /// `ell` layers of one common size.
    Equal,
    /// `ell` layers, the `U_i` of one common size below `|V|`.
    Deficient,
    /// Two layers with `3|V|/4 <= |U| <= |V|`.
    Pair,
    Other,
}

/// Constants attached to an instance for reporting; none of them is used by
/// the solvers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayerConstants {
    pub eps: Option<f64>,
    pub d: Option<f64>,
    pub delta0: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayeredInstance {
    ell: usize,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    graph: Graph,
    layer_of: Vec<usize>,
    pub constants: LayerConstants,
}

fn offsets_of(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(sizes.len() + 1);
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    out.push(acc);
    out
}

impl LayeredInstance {
    /// Checks sizes and that every edge joins cyclically consecutive layers,
    /// or lies inside `V` (inside either layer when there are two).
    pub fn new(ell: usize, sizes: Vec<usize>, graph: Graph) -> Result<Self, LayeredError> {
        if ell < 3 {
            return Err(LayeredError::Instance(format!("cycle length {ell} is below 3")));
        }
        let k = sizes.len();
        if k < 2 || k > ell {
            return Err(LayeredError::Instance(format!("{k} layers given, expected between 2 and {ell}")));
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(LayeredError::Instance("empty layer".into()));
        }
        let offsets = offsets_of(&sizes);
        let total = offsets[k];
        if graph.n() != total {
            return Err(LayeredError::Instance(format!("graph has {} vertices, layers hold {total}", graph.n())));
        }
        if total % ell != 0 {
            return Err(LayeredError::Instance(format!("{total} vertices is not a multiple of {ell}")));
        }
        let mut layer_of = vec![0; total];
        for i in 0..k {
            layer_of[offsets[i]..offsets[i + 1]].fill(i);
        }
        let inst = Self { ell, sizes, offsets, graph, layer_of, constants: LayerConstants::default() };
        if let Some((u, v)) = inst.graph.edges().find(|&(u, v)| !inst.allowed(inst.layer_of[u], inst.layer_of[v])) {
            return Err(LayeredError::Instance(format!(
                "edge {u}-{v} joins layers {} and {}, which are not adjacent",
                inst.layer_of[u], inst.layer_of[v]
            )));
        }
        Ok(inst)
    }

    fn allowed(&self, a: usize, b: usize) -> bool {
        let k = self.sizes.len();
        let (a, b) = (a.min(b), a.max(b));
        if a == b {
            return a == 0 || k == 2;
        }
        b == a + 1 || (a == 0 && b == k - 1)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.graph.n()
    }

    /// The union of all cross and internal graphs.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn layer(&self, i: usize) -> std::ops::Range<VertexId> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn layer_of(&self, v: VertexId) -> usize {
        self.layer_of[v]
    }

    pub fn shape(&self) -> LayerShape {
        let s = &self.sizes;
        let v = s[0];
        if s.len() == 2 {
            if 4 * s[1] >= 3 * v && s[1] <= v {
                return LayerShape::Pair;
            }
            return LayerShape::Other;
        }
        if s.len() != self.ell || s[1..].iter().any(|&x| x != s[1]) {
            return LayerShape::Other;
        }
        match s[1].cmp(&v) {
            std::cmp::Ordering::Equal => LayerShape::Equal,
            std::cmp::Ordering::Less => LayerShape::Deficient,
            std::cmp::Ordering::Greater => LayerShape::Other,
        }
    }

    /// Layer pairs that carry cross edges, `(a, b)` with `a < b`.
    pub fn cross_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.sizes.len();
        if k == 2 {
            return vec![(0, 1)];
        }
        let mut pairs: Vec<(usize, usize)> = (0..k - 1).map(|i| (i, i + 1)).collect();
        pairs.push((0, k - 1));
        pairs
    }

    /// Text form: `ell`, `sizes`, then one `block a b count` header per layer
    /// pair followed by `count` lines of local indices.
    pub fn to_text(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "ell {}", self.ell);
        let sizes: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "sizes {}", sizes.join(" "));
        let k = self.sizes.len();
        let mut blocks: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
        blocks.extend(self.cross_pairs());
        blocks.sort_unstable();
        for (a, b) in blocks {
            let edges: Vec<(usize, usize)> = self
                .graph
                .edges()
                .filter(|&(u, v)| {
                    let (la, lb) = (self.layer_of[u], self.layer_of[v]);
                    (la, lb) == (a, b) || (la, lb) == (b, a)
                })
                .map(|(u, v)| if self.layer_of[u] == a { (u, v) } else { (v, u) })
                .collect();
            if edges.is_empty() {
                continue;
            }
            let _ = writeln!(out, "block {a} {b} {}", edges.len());
            for (u, v) in edges {
                let _ = writeln!(out, "{} {}", u - self.offsets[a], v - self.offsets[b]);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LayeredError> {
        let err = |line: usize, message: &str| LayeredError::Format { line, message: message.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let nums = |line: usize, toks: &[&str]| -> Result<Vec<usize>, LayeredError> {
            toks.iter().map(|t| t.parse::<usize>().map_err(|_| err(line, &format!("bad number {t:?}")))).collect()
        };
        let (l1, first) = lines.next().ok_or_else(|| err(0, "missing `ell` line"))?;
        let toks: Vec<&str> = first.split_whitespace().collect();
        if toks.len() != 2 || toks[0] != "ell" {
            return Err(err(l1, "expected `ell <length>`"));
        }
        let ell = nums(l1, &toks[1..])?[0];
        let (l2, second) = lines.next().ok_or_else(|| err(l1, "missing `sizes` line"))?;
        let toks: Vec<&str> = second.split_whitespace().collect();
        if toks.first() != Some(&"sizes") {
            return Err(err(l2, "expected `sizes <s_0> <s_1> ...`"));
        }
        let sizes = nums(l2, &toks[1..])?;
        let offsets = offsets_of(&sizes);
        let mut b = GraphBuilder::new(*offsets.last().expect("non-empty offsets"));
        while let Some((line, header)) = lines.next() {
            let toks: Vec<&str> = header.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "block" {
                return Err(err(line, "expected `block <a> <b> <count>`"));
            }
            let h = nums(line, &toks[1..])?;
            let (la, lb, count) = (h[0], h[1], h[2]);
            if la >= sizes.len() || lb >= sizes.len() {
                return Err(err(line, "layer index out of range"));
            }
            for _ in 0..count {
                let (line, pair) = lines.next().ok_or_else(|| err(line, "block ends early"))?;
                let p = nums(line, &pair.split_whitespace().collect::<Vec<_>>())?;
                if p.len() != 2 || p[0] >= sizes[la] || p[1] >= sizes[lb] {
                    return Err(err(line, "pair out of range for its block"));
                }
                b.add_edge(offsets[la] + p[0], offsets[lb] + p[1])
                    .map_err(|e| err(line, &e.to_string()))?;
            }
        }
        Self::new(ell, sizes, b.build())
    }
}

/// Random layered instances: each cross pair is complete (`1.0`), empty
/// (`0.0`) or random at the given probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayeredSpec {
    pub ell: usize,
    pub sizes: Vec<usize>,
    /// One probability per pair of [`LayeredInstance::cross_pairs`], in order.
    pub pair_p: Vec<f64>,
    /// Edge probability inside `V` (inside both layers when there are two).
    #[serde(default)]
    pub internal_p: f64,
    #[serde(default)]
    pub constants: LayerConstants,
}

impl LayeredSpec {
    /// Layers of size `s`, `(V, U_1)` and `(V, U_{ell-1})` complete, the
    /// chain `U_1 - ... - U_{ell-1}` random at `p`.
    pub fn dense_pairs(ell: usize, s: usize, p: f64) -> Self {
        let mut pair_p = vec![p; ell];
        pair_p[0] = 1.0;
        pair_p[ell - 1] = 1.0;
        Self { ell, sizes: vec![s; ell], pair_p, internal_p: 0.0, constants: LayerConstants::default() }
    }

    pub fn build(&self, seed: u64) -> Result<LayeredInstance, LayeredError> {
        let offsets = offsets_of(&self.sizes);
        let total = *offsets.last().expect("non-empty offsets");
        let probe = LayeredInstance::new(self.ell, self.sizes.clone(), Graph::empty(total))?;
        let pairs = probe.cross_pairs();
        if pairs.len() != self.pair_p.len() {
            return Err(LayeredError::Params(format!(
                "{} pair probabilities given, {} layer pairs exist",
                self.pair_p.len(),
                pairs.len()
            )));
        }
        let probs = self.pair_p.iter().chain(std::iter::once(&self.internal_p));
        if let Some(p) = probs.clone().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(LayeredError::Params(format!("probability {p} outside [0, 1]")));
        }
        let rng = CounterRng::new(derive_seed(seed, &[streams::LAYERED]));
        let n = total as u64;
        let coin = |u: VertexId, v: VertexId, p: f64| rng.unit_at(0, u as u64 * n + v as u64) < p;
        let mut b = GraphBuilder::new(total);
        for (&(la, lb), &p) in pairs.iter().zip(&self.pair_p) {
            for u in probe.layer(la) {
                for v in probe.layer(lb) {
                    if coin(u, v, p) {
                        b.add_edge_unchecked(u, v);
                    }
                }
            }
        }
        let internal: Vec<usize> = if self.sizes.len() == 2 { vec![0, 1] } else { vec![0] };
        for l in internal {
            let r = probe.layer(l);
            for u in r.clone() {
                for v in u + 1..r.end {
                    if coin(u, v, self.internal_p) {
                        b.add_edge_unchecked(u, v);
                    }
                }
            }
        }
        let mut inst = LayeredInstance::new(self.ell, self.sizes.clone(), b.build())?;
        inst.constants = self.constants.clone();
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperRegularityReport {
    pub eps: f64,
    pub d: f64,
    pub density: f64,
    /// `min deg(v) / |R|` over `v` in `L`.
    pub left_min_degree_ratio: f64,
    pub right_min_degree_ratio: f64,
    pub degree_ok: bool,
    /// Sampled estimate, not a proof of regularity.
    pub max_deviation: f64,
    pub samples: usize,
    pub subset_sizes: (usize, usize),
    pub passes: bool,
}

/// Exact minimum-degree test plus sampled density deviations over random
/// subset pairs of sizes `ceil(eps |L|)` and `ceil(eps |R|)`.
pub fn superregular_check(
    g: &Graph,
    left: &[VertexId],
    right: &[VertexId],
    eps: f64,
    d: f64,
    samples: usize,
    seed: u64,
) -> Result<SuperRegularityReport, LayeredError> {
    if !(eps > 0.0 && eps < 1.0 && d > 0.0 && d < 1.0) {
        return Err(LayeredError::Params(format!("eps = {eps} and d = {d} must lie in (0, 1)")));
    }
    if left.is_empty() || right.is_empty() {
        return Err(LayeredError::Params("both sides must be non-empty".into()));
    }
    let in_right = crate::graph::vertex_set(g.n(), right.iter().copied());
    let in_left = crate::graph::vertex_set(g.n(), left.iter().copied());
    let left_deg: Vec<usize> = left.iter().map(|&v| g.degree_into(v, &in_right)).collect();
    let right_min = right.iter().map(|&v| g.degree_into(v, &in_left)).min().unwrap_or(0);
    let edges: usize = left_deg.iter().sum();
    let density = edges as f64 / (left.len() * right.len()) as f64;
    let left_min_degree_ratio = *left_deg.iter().min().unwrap_or(&0) as f64 / right.len() as f64;
    let right_min_degree_ratio = right_min as f64 / left.len() as f64;
    let degree_ok = left_min_degree_ratio >= d && right_min_degree_ratio >= d;

    let sx = ((eps * left.len() as f64).ceil() as usize).clamp(1, left.len());
    let sy = ((eps * right.len() as f64).ceil() as usize).clamp(1, right.len());
    let mut rng = seq_rng(seed, &[streams::LAYERED, 1]);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let xs = sample(&mut rng, left.len(), sx);
        let ys: Vec<VertexId> = sample(&mut rng, right.len(), sy).into_iter().map(|j| right[j]).collect();
        let mut e = 0usize;
        for i in xs {
            let u = left[i];
            e += ys.iter().filter(|&&w| g.has_edge(u, w)).count();
        }
        let dens = e as f64 / (sx * sy) as f64;
        max_deviation = max_deviation.max((dens - density).abs());
    }
    Ok(SuperRegularityReport {
        eps,
        d,
        density,
        left_min_degree_ratio,
        right_min_degree_ratio,
        degree_ok,
        max_deviation,
        samples,
        subset_sizes: (sx, sy),
        passes: degree_ok && max_deviation <= eps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMethod {
    Oracle,
    /// Matchings between consecutive layers closed by `V`-reassignment.
    Aligned,
    /// Randomized backtracking over cycles through the most constrained vertex.
    Backtracking,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayeredOptions {
    pub exact_bound: usize,
    pub restarts: usize,
    /// Search steps per restart of the backtracking stage.
    pub backtrack_budget: u64,
    /// Run the exact solver when every heuristic restart failed and the
    /// instance is within `exact_bound`.
    pub exact_fallback: bool,
    pub seed: u64,
    pub oracle: OracleConfig,
}

impl Default for LayeredOptions {
    fn default() -> Self {
        Self {
            exact_bound: 24,
            restarts: 50,
            backtrack_budget: 20_000,
            exact_fallback: false,
            seed: 0,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayeredFactor {
    pub packing: CyclePacking,
    pub method: FactorMethod,
    /// Restart on which the factor was found, counting from 0.
    pub restart: usize,
    /// Closed-cycle counts of the aligned stage after each repair step.
    pub repair_trace: Vec<usize>,
}

pub fn layered_factor(
    inst: &LayeredInstance,
    mode: FactorMode,
    opts: &LayeredOptions,
) -> Result<LayeredFactor, LayeredError> {
    match mode {
        FactorMode::Exact => exact_factor(inst, opts),
        FactorMode::Heuristic => heuristic_factor(inst, opts),
    }
}

fn exact_factor(inst: &LayeredInstance, opts: &LayeredOptions) -> Result<LayeredFactor, LayeredError> {
    let total = inst.total();
    if total > opts.exact_bound {
        return Err(LayeredError::TooLarge { total, bound: opts.exact_bound });
    }
    let needed = total / inst.ell;
    let res = max_disjoint_cycles_exact(&inst.graph, inst.ell, Some(needed), &opts.oracle)?;
    if res.packing.len() < needed {
        return Err(LayeredError::Infeasible { maximum: res.packing.len(), needed });
    }
    Ok(LayeredFactor { packing: res.packing, method: FactorMethod::Oracle, restart: 0, repair_trace: Vec::new() })
}

fn heuristic_factor(inst: &LayeredInstance, opts: &LayeredOptions) -> Result<LayeredFactor, LayeredError> {
    let mut best_unclosed = usize::MAX;
    let equal = inst.shape() == LayerShape::Equal;
    for restart in 0..opts.restarts.max(1) {
        let seed = derive_seed(opts.seed, &[streams::LAYERED, restart as u64]);
        if equal {
            match aligned_attempt(inst, seed) {
                Ok((cycles, trace)) => {
                    return Ok(LayeredFactor {
                        packing: CyclePacking::with_cycles(inst.ell, cycles),
                        method: FactorMethod::Aligned,
                        restart,
                        repair_trace: trace,
                    })
                }
                Err(unclosed) => best_unclosed = best_unclosed.min(unclosed),
            }
        }
        match backtracking_attempt(inst, seed, opts.backtrack_budget) {
            Ok(cycles) => {
                return Ok(LayeredFactor {
                    packing: CyclePacking::with_cycles(inst.ell, cycles),
                    method: FactorMethod::Backtracking,
                    restart,
                    repair_trace: Vec::new(),
                })
            }
            Err(left) => best_unclosed = best_unclosed.min(left),
        }
    }
    if opts.exact_fallback && inst.total() <= opts.exact_bound {
        return exact_factor(inst, opts);
    }
    Err(LayeredError::BudgetExhausted { restarts: opts.restarts.max(1), unclosed: best_unclosed })
}

/// Maximum bipartite matching by augmenting paths. `adj[l]` lists right
/// vertices; `mate_l` may hold a partial matching to start from. Returns the
/// matching and the size after each successful augmentation.
fn augment_matching(adj: &[Vec<usize>], n_right: usize, mut mate_l: Vec<Option<usize>>) -> (Vec<Option<usize>>, Vec<usize>) {
    let mut mate_r = vec![None; n_right];
    for (l, m) in mate_l.iter().enumerate() {
        if let Some(r) = *m {
            mate_r[r] = Some(l);
        }
    }
    fn try_augment(
        l: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        mate_l: &mut [Option<usize>],
        mate_r: &mut [Option<usize>],
    ) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if mate_r[r].map_or(true, |l2| try_augment(l2, adj, seen, mate_l, mate_r)) {
                mate_l[l] = Some(r);
                mate_r[r] = Some(l);
                return true;
            }
        }
        false
    }
    let mut size = mate_l.iter().filter(|m| m.is_some()).count();
    let mut trace = vec![size];
    for l in 0..adj.len() {
        if mate_l[l].is_some() {
            continue;
        }
        let mut seen = vec![false; n_right];
        if try_augment(l, adj, &mut seen, &mut mate_l, &mut mate_r) {
            size += 1;
            trace.push(size);
        }
    }
    (mate_l, trace)
}

/// Perfect matchings `U_i -> U_{i+1}` chain `U_1` into paths through every
/// `U` layer; `V` is first paired with path starts by a matching on
/// `(V, U_1)`, then reassigned along alternating paths so that more paths
/// close at both ends. Each reassignment rotates the `V`-endpoints of the
/// cycles it touches and adds one closed cycle.
fn aligned_attempt(inst: &LayeredInstance, seed: u64) -> Result<(Vec<Cycle>, Vec<usize>), usize> {
    let ell = inst.ell;
    let s = inst.sizes[0];
    let g = &inst.graph;
    let mut rng = seq_rng(seed, &[1]);
    let local_adj = |a: usize, b: usize, rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<usize>> {
        let ob = inst.offsets[b];
        inst.layer(a)
            .map(|u| {
                let mut row: Vec<usize> = g.neighbors(u).iter().filter(|&&w| inst.layer_of[w] == b).map(|&w| w - ob).collect();
                row.shuffle(rng);
                row
            })
            .collect()
    };
    // paths[j] lists the U-vertices of the path starting at the j-th vertex of U_1.
    let mut paths: Vec<Vec<VertexId>> = inst.layer(1).map(|u| vec![u]).collect();
    for i in 1..ell - 1 {
        let adj = local_adj(i, i + 1, &mut rng);
        let (mate, _) = augment_matching(&adj, s, vec![None; s]);
        if mate.iter().any(|m| m.is_none()) {
            return Err(s);
        }
        for p in paths.iter_mut() {
            let last = *p.last().expect("non-empty path") - inst.offsets[i];
            p.push(inst.offsets[i + 1] + mate[last].expect("perfect"));
        }
    }
    let v0 = inst.offsets[0];
    let closes = |v: VertexId, p: &[VertexId]| g.has_edge(v, p[0]) && g.has_edge(v, *p.last().expect("non-empty"));
    let first = local_adj(0, 1, &mut rng);
    let (start, _) = augment_matching(&first, s, vec![None; s]);
    let initial: Vec<Option<usize>> =
        (0..s).map(|v| start[v].filter(|&j| closes(v0 + v, &paths[j]))).collect();
    let mut compat: Vec<Vec<usize>> = (0..s).map(|v| (0..s).filter(|&j| closes(v0 + v, &paths[j])).collect()).collect();
    for row in compat.iter_mut() {
        row.shuffle(&mut rng);
    }
    let (assign, trace) = augment_matching(&compat, s, initial);
    let closed = assign.iter().filter(|a| a.is_some()).count();
    if closed < s {
        return Err(s - closed);
    }
    let cycles = (0..s)
        .map(|v| {
            let mut c = vec![v0 + v];
            c.extend_from_slice(&paths[assign[v].expect("perfect")]);
            Cycle::from_raw(c)
        })
        .collect();
    Ok((cycles, trace))
}

struct Backtrack<'a> {
    g: &'a Graph,
    ell: usize,
    alive: Vec<bool>,
    prio: Vec<u64>,
    layer0: Vec<bool>,
    budget: u64,
    chosen: Vec<Cycle>,
    best_left: usize,
}

/// Randomized depth-first cover: take the alive vertex with fewest alive
/// neighbours, try the cycles through it in random order, recurse. While `V`
/// holds more alive vertices than a `1/ell` share, extensions inside `V` are
/// tried first so that cycles absorb several `V`-vertices.
fn backtracking_attempt(inst: &LayeredInstance, seed: u64, budget: u64) -> Result<Vec<Cycle>, usize> {
    let n = inst.total();
    let mut rng = seq_rng(seed, &[2]);
    let mut bt = Backtrack {
        g: &inst.graph,
        ell: inst.ell,
        alive: vec![true; n],
        prio: (0..n).map(|_| rng.gen()).collect(),
        layer0: (0..n).map(|v| inst.layer_of[v] == 0).collect(),
        budget,
        chosen: Vec::new(),
        best_left: n / inst.ell,
    };
    if bt.solve(n) {
        Ok(bt.chosen)
    } else {
        Err(bt.best_left)
    }
}

impl Backtrack<'_> {
    fn alive_degree(&self, v: VertexId) -> usize {
        self.g.neighbors(v).iter().filter(|&&w| self.alive[w]).count()
    }

    fn solve(&mut self, left: usize) -> bool {
        self.best_left = self.best_left.min(left / self.ell);
        if left == 0 {
            return true;
        }
        let Some(x) = (0..self.alive.len())
            .filter(|&v| self.alive[v])
            .min_by_key(|&v| (self.alive_degree(v), self.prio[v]))
        else {
            return true;
        };
        let v_alive = (0..self.alive.len()).filter(|&v| self.alive[v] && self.layer0[v]).count();
        let surplus = v_alive * self.ell > left;
        let cycles = self.cycles_through(x, surplus, 32);
        for c in cycles {
            if self.budget == 0 {
                return false;
            }
            self.budget -= 1;
            for &v in c.vertices() {
                self.alive[v] = false;
            }
            self.chosen.push(c);
            if self.solve(left - self.ell) {
                return true;
            }
            let c = self.chosen.pop().expect("just pushed");
            for &v in c.vertices() {
                self.alive[v] = true;
            }
        }
        false
    }

    fn order(&self, from: VertexId, prefer_v: bool) -> Vec<VertexId> {
        let mut next: Vec<VertexId> = self.g.neighbors(from).iter().copied().filter(|&w| self.alive[w]).collect();
        next.sort_by_key(|&w| (!(prefer_v && self.layer0[w]), self.prio[w]));
        next
    }

    /// Up to `cap` cycles through `x`, each listed once up to direction.
    fn cycles_through(&mut self, x: VertexId, prefer_v: bool, cap: usize) -> Vec<Cycle> {
        let mut out = Vec::new();
        let mut path = vec![x];
        self.alive[x] = false;
        self.extend_path(&mut path, prefer_v, cap, &mut out);
        self.alive[x] = true;
        out
    }

    fn extend_path(&mut self, path: &mut Vec<VertexId>, prefer_v: bool, cap: usize, out: &mut Vec<Cycle>) {
        if out.len() >= cap || self.budget == 0 {
            return;
        }
        let last = *path.last().expect("non-empty");
        if path.len() == self.ell {
            if path[1] < last && self.g.has_edge(last, path[0]) {
                out.push(Cycle::from_raw(path.clone()));
            }
            return;
        }
        for w in self.order(last, prefer_v) {
            self.budget = self.budget.saturating_sub(1);
            self.alive[w] = false;
            path.push(w);
            self.extend_path(path, prefer_v, cap, out);
            path.pop();
            self.alive[w] = true;
            if out.len() >= cap || self.budget == 0 {
                return;
            }
        }
    }
}
