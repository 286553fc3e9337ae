//! Immutable simple undirected graphs and the structural queries the rest of
//! the crate is built on.

mod connectivity;
mod text;
mod vertex_set;

pub use connectivity::{
    ball, component_labels, connected_components, giant_component, is_connected, is_k_connected, k_core,
    local_vertex_connectivity,
};
pub use text::{parse_graph, read_graph, write_graph};
pub use vertex_set::VertexSet;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An unordered pair, always stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

#[inline]
pub fn normalize(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, collapsing duplicate pairs.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { edge: (u, v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push(normalize(u, v));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_edges(n, &list))
    }

    /// `edges` must be normalized, sorted, deduplicated and in range.
    pub(crate) fn from_sorted_edges(n: usize, edges: &[Edge]) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut adj: Vec<Vec<Vertex>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        // Lexicographic edge order pushes each list in increasing order.
        for &(u, v) in edges {
            adj[u].push(v);
        }
        for &(u, v) in edges {
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self {
            adj,
            edge_count: edges.len(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Self {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
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
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: Vertex, set: &VertexSet) -> usize {
        self.adj[v].iter().filter(|&&u| set.contains(u)).count()
    }

    /// `e(X)`: edges with both endpoints in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.degree_into(v, set)).sum::<usize>() / 2
    }

    /// Induced subgraph; local vertex `i` is the `i`-th smallest member of `set`.
    pub fn induced(&self, set: &VertexSet) -> Subgraph {
        let original = set.to_vec();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in original.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in original.iter().enumerate() {
            for &u in &self.adj[v] {
                let j = local[u];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        edges.sort_unstable();
        Subgraph {
            graph: Self::from_sorted_edges(original.len(), &edges),
            original,
        }
    }

    /// `G - H` on the same vertex set.
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let mut drop: Vec<Edge> = removed.iter().map(|&(u, v)| normalize(u, v)).collect();
        drop.sort_unstable();
        let kept: Vec<Edge> = self.edges().filter(|e| drop.binary_search(e).is_err()).collect();
        Self::from_sorted_edges(self.n(), &kept)
    }

    /// Edge-wise union of two graphs on the same vertex set.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n() != other.n() {
            return Err(Error::UniverseMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let mut edges: Vec<Edge> = self.edges().chain(other.edges()).collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(self.n(), &edges))
    }

    /// Order-sensitive hash of `(n, edges)` used to tie derived data to the
    /// graph it was computed from.
    pub fn fingerprint(&self) -> u64 {
        let mut path = Vec::with_capacity(2 * self.edge_count + 1);
        path.push(self.n() as u64);
        for (u, v) in self.edges() {
            path.push(u as u64);
            path.push(v as u64);
        }
        crate::rng::derive_seed(0x6772_6170_6866_7072, &path)
    }

    /// Whether every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }
}

/// An induced subgraph together with the map back to the parent's labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    /// `original[i]` is the parent vertex of local vertex `i`; increasing.
    pub original: Vec<Vertex>,
}

impl Subgraph {
    pub fn identity(graph: Graph) -> Self {
        let original = (0..graph.n()).collect();
        Self { graph, original }
    }

    pub fn to_original(&self, local: Vertex) -> Vertex {
        self.original[local]
    }

    /// Local label of a parent vertex, if it survived.
    pub fn to_local(&self, parent: Vertex) -> Option<Vertex> {
        self.original.binary_search(&parent).ok()
    }

    /// Member set expressed in the parent's universe.
    pub fn parent_vertex_set(&self, parent_n: usize) -> VertexSet {
        VertexSet::from_vertices(parent_n, self.original.iter().copied())
            .expect("subgraph labels lie in the parent universe")
    }

    /// Restricts a parent-universe set to this subgraph, in local labels.
    pub fn localize(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.original.len());
        for (i, &v) in self.original.iter().enumerate() {
            if set.contains(v) {
                out.insert(i);
            }
        }
        out
    }

    /// Maps a local-universe set back to parent labels.
    pub fn lift(&self, set: &VertexSet, parent_n: usize) -> VertexSet {
        let mut out = VertexSet::new(parent_n);
        for v in set.iter() {
            out.insert(self.original[v]);
        }
        out
    }
}
