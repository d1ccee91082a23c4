//! `(alpha, beta)`-stability: a partition `V = A ∪ B` where `A` has about
//! `alpha n` vertices, `G[A, B]` is nearly complete with minimum degree at
//! least `alpha n / 4`, and `B` spans at most `beta n^2` edges.
//!
//! Clause arithmetic is generic over [`Scalar`]; with rational parameters the
//! thresholds are compared exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("parameters must satisfy 0 < beta < alpha < 1/2 (got alpha = {alpha}, beta = {beta})")]
    Params { alpha: String, beta: String },
    #[error("exhaustive search is limited to {bound} vertices, graph has {n}")]
    TooLarge { n: usize, bound: usize },
    #[error("vertex {0} is not in the graph")]
    VertexOutOfRange(VertexId),
}

/// How the size window `(alpha ± beta) n` is turned into integer bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeRounding {
    /// `floor((alpha - beta) n) <= |A| <= floor((alpha + beta) n)`.
    #[default]
    Floor,
    /// `(alpha - beta) n <= |A| <= (alpha + beta) n` over the reals.
    Exact,
    /// `(alpha - beta) n < |A| < (alpha + beta) n`.
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityParams<T> {
    pub alpha: T,
    pub beta: T,
    #[serde(default)]
    pub rounding: SizeRounding,
}

impl<T: Scalar> StabilityParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self, StabilityError> {
        Self::with_rounding(alpha, beta, SizeRounding::default())
    }

    pub fn with_rounding(alpha: T, beta: T, rounding: SizeRounding) -> Result<Self, StabilityError> {
        if !(T::zero() < beta && beta < alpha && alpha < T::half()) {
            return Err(StabilityError::Params { alpha: alpha.to_string(), beta: beta.to_string() });
        }
        Ok(Self { alpha, beta, rounding })
    }

    /// Whether `size` lies in the window `(centre ± beta) n`.
    fn size_margin(&self, size: usize, centre: T, n: T) -> (bool, T) {
        let s = T::from_usize(size);
        let (mut lo, mut hi) = ((centre - self.beta) * n, (centre + self.beta) * n);
        if self.rounding == SizeRounding::Floor {
            lo = lo.floor();
            hi = hi.floor();
        }
        let margin = (s - lo).min_of(hi - s);
        let pass = match self.rounding {
            SizeRounding::Open => margin > T::zero(),
            _ => margin >= T::zero(),
        };
        (pass, margin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    SizeA,
    SizeB,
    CrossMinDegree,
    ADegrees,
    BDegrees,
    BEdges,
}

impl Clause {
    pub const ALL: [Clause; 6] =
        [Clause::SizeA, Clause::SizeB, Clause::CrossMinDegree, Clause::ADegrees, Clause::BDegrees, Clause::BEdges];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseOutcome {
    pub clause: Clause,
    pub passed: bool,
    /// Slack of the clause; non-negative when it holds.
    pub margin: f64,
    /// The same slack printed in the parameter's own number type.
    pub margin_exact: String,
}

/// A partition with the measured quantities behind each clause.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub n: usize,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub min_cross_degree: usize,
    /// Vertices of `A` with fewer than `|B| - beta n` neighbours in `B`.
    pub a_deficient: usize,
    /// Vertices of `B` with fewer than `|A| - beta n` neighbours in `A`.
    pub b_deficient: usize,
    pub b_edges: usize,
    pub rounding: SizeRounding,
    pub clauses: Vec<ClauseOutcome>,
}

impl StabilityCertificate {
    pub fn passes(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<Clause> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.clause).collect()
    }
}

/// Raw integer measurements of a partition.
struct Measure {
    a_size: usize,
    b_size: usize,
    cross_deg: Vec<usize>,
    min_cross: usize,
    b_edges: usize,
}

fn measure(g: &Graph, in_a: &[bool]) -> Measure {
    let n = g.n();
    let a_size = in_a.iter().filter(|&&x| x).count();
    let b_size = n - a_size;
    let mut cross_deg = vec![0usize; n];
    let mut b_edges = 0;
    for (u, v) in g.edges() {
        if in_a[u] != in_a[v] {
            cross_deg[u] += 1;
            cross_deg[v] += 1;
        } else if !in_a[u] {
            b_edges += 1;
        }
    }
    let min_cross = if a_size == 0 || b_size == 0 { 0 } else { cross_deg.iter().copied().min().unwrap_or(0) };
    Measure { a_size, b_size, cross_deg, min_cross, b_edges }
}

struct Evaluation<T> {
    a_deficient: usize,
    b_deficient: usize,
    outcomes: [(bool, T); 6],
}

fn evaluate<T: Scalar>(params: &StabilityParams<T>, n: usize, in_a: &[bool], m: &Measure) -> Evaluation<T> {
    let nt = T::from_usize(n);
    let beta_n = params.beta * nt;
    let size_a = params.size_margin(m.a_size, params.alpha, nt);
    let size_b = params.size_margin(m.b_size, T::one() - params.alpha, nt);
    let cross = T::from_usize(m.min_cross) - params.alpha * nt / T::from_usize(4);
    let a_need = T::from_usize(m.b_size) - beta_n;
    let b_need = T::from_usize(m.a_size) - beta_n;
    let mut a_deficient = 0;
    let mut b_deficient = 0;
    for v in 0..n {
        let d = T::from_usize(m.cross_deg[v]);
        if in_a[v] {
            if d < a_need {
                a_deficient += 1;
            }
        } else if d < b_need {
            b_deficient += 1;
        }
    }
    let a_deg = beta_n - T::from_usize(a_deficient);
    let b_deg = beta_n - T::from_usize(b_deficient);
    let edges = params.beta * nt * nt - T::from_usize(m.b_edges);
    let zero = T::zero();
    Evaluation {
        a_deficient,
        b_deficient,
        outcomes: [
            size_a,
            size_b,
            (cross >= zero, cross),
            (a_deg >= zero, a_deg),
            (b_deg >= zero, b_deg),
            (edges >= zero, edges),
        ],
    }
}

fn membership(n: usize, a: &[VertexId]) -> Result<Vec<bool>, StabilityError> {
    let mut in_a = vec![false; n];
    for &v in a {
        if v >= n {
            return Err(StabilityError::VertexOutOfRange(v));
        }
        in_a[v] = true;
    }
    Ok(in_a)
}

fn certificate<T: Scalar>(g: &Graph, in_a: &[bool], params: &StabilityParams<T>) -> StabilityCertificate {
    let n = g.n();
    let m = measure(g, in_a);
    let e = evaluate(params, n, in_a, &m);
    let clauses = Clause::ALL
        .iter()
        .zip(e.outcomes.iter())
        .map(|(&clause, &(passed, margin))| ClauseOutcome {
            clause,
            passed,
            margin: margin.to_f64_lossy(),
            margin_exact: margin.to_string(),
        })
        .collect();
    StabilityCertificate {
        n,
        a: (0..n).filter(|&v| in_a[v]).collect(),
        b: (0..n).filter(|&v| !in_a[v]).collect(),
        min_cross_degree: m.min_cross,
        a_deficient: e.a_deficient,
        b_deficient: e.b_deficient,
        b_edges: m.b_edges,
        rounding: params.rounding,
        clauses,
    }
}

/// Evaluates every clause for `A` and `B = V \ A`.
pub fn check_partition<T: Scalar>(
    g: &Graph,
    a: &[VertexId],
    params: &StabilityParams<T>,
) -> Result<StabilityCertificate, StabilityError> {
    Ok(certificate(g, &membership(g.n(), a)?, params))
}

fn passes<T: Scalar>(g: &Graph, in_a: &[bool], params: &StabilityParams<T>) -> bool {
    let m = measure(g, in_a);
    evaluate(params, g.n(), in_a, &m).outcomes.iter().all(|o| o.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchOptions {
    /// Largest graph accepted by exhaustive search.
    pub exhaustive_bound: usize,
    /// Improving moves allowed in the heuristic.
    pub max_moves: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { exhaustive_bound: 20, max_moves: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilitySearch {
    pub mode: SearchMode,
    pub certificate: Option<StabilityCertificate>,
    /// True when a missing certificate proves the graph is not stable.
    /// A heuristic miss is only advisory.
    pub conclusive: bool,
    pub partitions_checked: u64,
}

/// Looks for a partition passing every clause.
///
/// Exhaustive mode is sound and complete and returns the lexicographically
/// smallest passing `A`. Heuristic mode starts from the `ceil(alpha n)`
/// highest-degree vertices and applies improving single-vertex moves and
/// exchanges; it only reports certificates that pass.
pub fn find_stable_partition<T: Scalar>(
    g: &Graph,
    params: &StabilityParams<T>,
    mode: SearchMode,
    opts: &SearchOptions,
) -> Result<StabilitySearch, StabilityError> {
    match mode {
        SearchMode::Exhaustive => exhaustive(g, params, opts),
        SearchMode::Heuristic => Ok(heuristic(g, params, opts)),
    }
}

fn exhaustive<T: Scalar>(
    g: &Graph,
    params: &StabilityParams<T>,
    opts: &SearchOptions,
) -> Result<StabilitySearch, StabilityError> {
    let n = g.n();
    let bound = opts.exhaustive_bound.min(63);
    if n > bound {
        return Err(StabilityError::TooLarge { n, bound });
    }
    let nt = T::from_usize(n);
    let mut best: Option<Vec<VertexId>> = None;
    let mut checked = 0u64;
    let mut in_a = vec![false; n];
    for k in 0..=n {
        if !params.size_margin(k, params.alpha, nt).0 || !params.size_margin(n - k, T::one() - params.alpha, nt).0 {
            continue;
        }
        // k-combinations in lexicographic order; the first hit is the smallest of this size.
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            if best.as_ref().is_some_and(|b| comb.as_slice() >= b.as_slice()) {
                break;
            }
            in_a.iter_mut().for_each(|x| *x = false);
            for &v in &comb {
                in_a[v] = true;
            }
            checked += 1;
            if passes(g, &in_a, params) {
                best = Some(comb.clone());
                break;
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    let certificate = best.map(|a| certificate(g, &membership(n, &a).expect("in range"), params));
    Ok(StabilitySearch { mode: SearchMode::Exhaustive, certificate, conclusive: true, partitions_checked: checked })
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Clause-violation score: failing size clauses count 1 each, degree clauses
/// count deficient vertices beyond the allowance, plus `e(G[B]) / n^2`.
fn score<T: Scalar>(g: &Graph, in_a: &[bool], params: &StabilityParams<T>) -> (f64, bool) {
    let n = g.n();
    let m = measure(g, in_a);
    let e = evaluate(params, n, in_a, &m);
    let pass = e.outcomes.iter().all(|o| o.0);
    let nt = T::from_usize(n);
    let quarter = params.alpha * nt / T::from_usize(4);
    let allowance = (params.beta * nt).to_f64_lossy();
    let mut s = 0.0;
    if !e.outcomes[0].0 {
        s += 1.0;
    }
    if !e.outcomes[1].0 {
        s += 1.0;
    }
    if m.a_size > 0 && m.b_size > 0 {
        s += m.cross_deg.iter().filter(|&&d| T::from_usize(d) < quarter).count() as f64;
    } else {
        s += n as f64;
    }
    s += (e.a_deficient as f64 - allowance).max(0.0);
    s += (e.b_deficient as f64 - allowance).max(0.0);
    if n > 0 {
        s += m.b_edges as f64 / (n * n) as f64;
    }
    (s, pass)
}

fn heuristic<T: Scalar>(g: &Graph, params: &StabilityParams<T>, opts: &SearchOptions) -> StabilitySearch {
    let n = g.n();
    let k = (params.alpha * T::from_usize(n)).ceil().to_usize().unwrap_or(0).min(n);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut in_a = vec![false; n];
    for &v in &order[..k] {
        in_a[v] = true;
    }
    let mut checked = 1u64;
    let (mut current, mut pass) = score(g, &in_a, params);
    let mut moves = 0;
    while !pass && moves < opts.max_moves {
        let mut best: Option<(f64, Vec<VertexId>)> = None;
        let mut consider = |flip: Vec<VertexId>, in_a: &mut Vec<bool>, checked: &mut u64| {
            for &v in &flip {
                in_a[v] = !in_a[v];
            }
            *checked += 1;
            let (s, _) = score(g, in_a, params);
            for &v in &flip {
                in_a[v] = !in_a[v];
            }
            if s < current - 1e-12 && best.as_ref().map_or(true, |(b, _)| s < *b - 1e-12) {
                best = Some((s, flip));
            }
        };
        for v in 0..n {
            consider(vec![v], &mut in_a, &mut checked);
        }
        for a in 0..n {
            for b in 0..n {
                if in_a[a] && !in_a[b] {
                    consider(vec![a, b], &mut in_a, &mut checked);
                }
            }
        }
        let Some((_, flip)) = best else { break };
        for v in flip {
            in_a[v] = !in_a[v];
        }
        let (s, p) = score(g, &in_a, params);
        current = s;
        pass = p;
        moves += 1;
    }
    let certificate = if pass { Some(certificate(g, &in_a, params)) } else { None };
    StabilitySearch { mode: SearchMode::Heuristic, certificate, conclusive: pass, partitions_checked: checked }
}
