//! Undirected simple graphs.

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// Graphs up to this order keep one adjacency bitset row per vertex.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: VertexId, n: usize },
}

/// Immutable undirected simple graph.
///
/// Neighbour lists are sorted. For `n <= DENSE_LIMIT` a bitset row per vertex
/// answers adjacency and common-neighbour queries.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    rows: Option<Vec<FixedBitSet>>,
    edge_count: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge_unchecked(u, v);
            }
        }
        b.build()
    }

    /// The cycle graph `C_n` on vertices `0..n` in order.
    pub fn cycle(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for v in 0..n {
            let w = (v + 1) % n;
            if v != w {
                b.add_edge_unchecked(v, w);
            }
        }
        b.build()
    }

    /// The Petersen graph: outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram.
    pub fn petersen() -> Self {
        let mut b = GraphBuilder::new(10);
        for i in 0..5 {
            b.add_edge_unchecked(i, (i + 1) % 5);
            b.add_edge_unchecked(i, i + 5);
            b.add_edge_unchecked(5 + i, 5 + (i + 2) % 5);
        }
        b.build()
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if u >= self.n() || v >= self.n() || u == v {
            return false;
        }
        match &self.rows {
            Some(rows) => rows[u].contains(v),
            None => {
                let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
                self.adj[a].binary_search(&b).is_ok()
            }
        }
    }

    /// Adjacency row of `v`, present for dense graphs only.
    pub fn row(&self, v: VertexId) -> Option<&FixedBitSet> {
        self.rows.as_ref().map(|r| &r[v])
    }

    /// Neighbourhood of `v` as a bitset (allocated for sparse graphs).
    pub fn neighbor_set(&self, v: VertexId) -> FixedBitSet {
        match self.row(v) {
            Some(r) => r.clone(),
            None => {
                let mut s = FixedBitSet::with_capacity(self.n());
                for &w in &self.adj[v] {
                    s.insert(w);
                }
                s
            }
        }
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: VertexId, set: &FixedBitSet) -> usize {
        match self.row(v) {
            Some(r) => r.intersection(set).count(),
            None => self.adj[v].iter().filter(|&&w| set.contains(w)).count(),
        }
    }

    /// Number of common neighbours of `u` and `v` inside `set`.
    pub fn common_neighbors_in(&self, u: VertexId, v: VertexId, set: &FixedBitSet) -> usize {
        match (self.row(u), self.row(v)) {
            (Some(ru), Some(rv)) => ru
                .as_slice()
                .iter()
                .zip(rv.as_slice())
                .zip(set.as_slice())
                .map(|((a, b), c)| (a & b & c).count_ones() as usize)
                .sum(),
            _ => self.adj[u]
                .iter()
                .filter(|&&w| set.contains(w) && self.has_edge(v, w))
                .count(),
        }
    }

    /// Subgraph induced on `keep`; vertex `i` of the result is `keep[i]`.
    pub fn induced(&self, keep: &[VertexId]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut b = GraphBuilder::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    b.add_edge_unchecked(i, j);
                }
            }
        }
        b.build()
    }

    /// Edge union of two graphs on the same vertex set.
    pub fn union(&self, other: &Graph) -> Graph {
        assert_eq!(self.n(), other.n(), "union of graphs on different vertex sets");
        let mut b = GraphBuilder::new(self.n());
        for (u, v) in self.edges().chain(other.edges()) {
            b.add_edge_unchecked(u, v);
        }
        b.build()
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &FixedBitSet) -> usize {
        set.ones().map(|v| self.degree_into(v, set)).sum::<usize>() / 2
    }
}

/// Incremental builder; duplicate edges are ignored.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    adj: Vec<Vec<VertexId>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let n = self.adj.len();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::OutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    #[inline]
    pub(crate) fn add_edge_unchecked(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(u != v);
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    pub fn build(mut self) -> Graph {
        for ns in &mut self.adj {
            ns.sort_unstable();
            ns.dedup();
        }
        let n = self.adj.len();
        let edge_count = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        let rows = (n <= DENSE_LIMIT).then(|| {
            self.adj
                .iter()
                .map(|ns| {
                    let mut row = FixedBitSet::with_capacity(n);
                    for &w in ns {
                        row.insert(w);
                    }
                    row
                })
                .collect()
        });
        Graph { adj: self.adj, rows, edge_count }
    }
}

/// Bitset over `0..n` containing exactly `members`.
pub fn vertex_set(n: usize, members: impl IntoIterator<Item = VertexId>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for v in members {
        s.insert(v);
    }
    s
}

/// Bitset over `0..n` with every vertex present.
pub fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_counts() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.min_degree(), 3);
        assert_eq!(k4.max_degree(), 3);
        assert!(k4.has_edge(0, 3));
        assert!(!k4.has_edge(2, 2));

        let c6 = Graph::cycle(6);
        assert_eq!(c6.edge_count(), 6);
        assert_eq!(c6.neighbors(0), &[1, 5]);

        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert_eq!((p.min_degree(), p.max_degree()), (3, 3));
    }

    #[test]
    fn builder_rejects_loops_and_out_of_range() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::OutOfRange { vertex: 3, n: 3 })
        );
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::cycle(5);
        let h = g.induced(&[4, 0, 1]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(0, 1));
        assert!(h.has_edge(1, 2));
        assert!(!h.has_edge(0, 2));
    }

    #[test]
    fn common_neighbour_queries() {
        let g = Graph::complete(5);
        let all = full_set(5);
        assert_eq!(g.common_neighbors_in(0, 1, &all), 3);
        assert_eq!(g.degree_into(0, &vertex_set(5, [1, 2])), 2);
        assert_eq!(g.edges_within(&vertex_set(5, [0, 1, 2])), 3);
    }
}
