//! Simple directed graphs, hop distances and neighbourhood decompositions.

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense 0-based vertex index.
pub type VertexId = usize;

/// How the total degree `d_x` is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeConvention {
    /// `d_x = |Γ^in(x) ∪ Γ^out(x)|`, anti-parallel pairs rejected so that
    /// `d_x = d_x^in + d_x^out` always holds.
    #[default]
    Strict,
    /// Anti-parallel pairs allowed; `d_x := d_x^in + d_x^out`.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeTriple {
    pub total: usize,
    pub in_degree: usize,
    pub out_degree: usize,
}

/// Immutable simple digraph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    degrees: Vec<DegreeTriple>,
    convention: DegreeConvention,
}

impl DirectedGraph {
    /// Builds a graph under the strict degree convention.
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        Self::with_convention(n, edges, DegreeConvention::Strict)
    }

    pub fn with_convention(
        n: usize,
        edges: &[(VertexId, VertexId)],
        convention: DegreeConvention,
    ) -> Result<Self, GraphError> {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u, w[0]));
            }
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        if convention == DegreeConvention::Strict {
            for (u, list) in out_adj.iter().enumerate() {
                for &v in list {
                    if u < v && out_adj[v].binary_search(&u).is_ok() {
                        return Err(GraphError::AntiParallelPair(u, v));
                    }
                }
            }
        }
        let degrees = (0..n)
            .map(|x| {
                let in_degree = in_adj[x].len();
                let out_degree = out_adj[x].len();
                let total = match convention {
                    DegreeConvention::Split => in_degree + out_degree,
                    DegreeConvention::Strict => union_size(&in_adj[x], &out_adj[x]),
                };
                DegreeTriple { total, in_degree, out_degree }
            })
            .collect();
        Ok(Self { out_adj, in_adj, degrees, convention })
    }

    pub fn num_vertices(&self) -> usize {
        self.out_adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn convention(&self) -> DegreeConvention {
        self.convention
    }

    pub fn out_neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.out_adj[x]
    }

    pub fn in_neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.in_adj[x]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out_adj.get(u).is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Edges in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn degree(&self, x: VertexId) -> DegreeTriple {
        self.degrees[x]
    }

    pub fn check_vertex(&self, vertex: VertexId) -> Result<(), GraphError> {
        if vertex < self.num_vertices() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex, n: self.num_vertices() })
        }
    }

    /// Common total degree if every vertex has the same `d_x`.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.degrees.first()?.total;
        self.degrees.iter().all(|d| d.total == first).then_some(first)
    }

    /// Common out-degree if every vertex has the same `d_x^out`.
    pub fn regular_out_degree(&self) -> Option<usize> {
        let first = self.degrees.first()?.out_degree;
        self.degrees.iter().all(|d| d.out_degree == first).then_some(first)
    }

    /// BFS hop counts from `source` along edge directions; `None` is
    /// unreachable.
    pub fn shortest_distances(&self, source: VertexId) -> Vec<Option<u32>> {
        bfs(&self.out_adj, source)
    }

    /// Single strongly connected component test: everything reachable from
    /// vertex 0 forwards and backwards.
    pub fn is_strongly_connected(&self) -> bool {
        if self.num_vertices() <= 1 {
            return true;
        }
        bfs(&self.out_adj, 0).iter().all(Option::is_some)
            && bfs(&self.in_adj, 0).iter().all(Option::is_some)
    }
}

fn union_size(a: &[VertexId], b: &[VertexId]) -> usize {
    a.len() + b.iter().filter(|v| a.binary_search(v).is_err()).count()
}

fn bfs(adj: &[Vec<VertexId>], source: VertexId) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].map(|d| d + 1);
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Source of (possibly asymmetric, possibly infinite) hop distances.
pub trait DistanceOracle {
    fn distance(&self, from: VertexId, to: VertexId) -> Option<u32>;
}

/// All-pairs hop distances, computed one BFS row at a time on demand.
///
/// Rows are memoised behind [`OnceLock`], so a matrix can be shared across
/// threads.
#[derive(Debug)]
pub struct DistanceMatrix<'g> {
    graph: &'g DirectedGraph,
    rows: Vec<OnceLock<Vec<Option<u32>>>>,
}

impl<'g> DistanceMatrix<'g> {
    pub fn new(graph: &'g DirectedGraph) -> Self {
        let rows = (0..graph.num_vertices()).map(|_| OnceLock::new()).collect();
        Self { graph, rows }
    }

    /// Eagerly fills every row.
    pub fn complete(graph: &'g DirectedGraph) -> Self {
        let matrix = Self::new(graph);
        for source in 0..graph.num_vertices() {
            matrix.row(source);
        }
        matrix
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn row(&self, source: VertexId) -> &[Option<u32>] {
        self.rows[source].get_or_init(|| self.graph.shortest_distances(source))
    }

    pub fn get(&self, from: VertexId, to: VertexId) -> Option<u32> {
        self.row(from)[to]
    }

    pub fn all_finite(&self) -> bool {
        (0..self.rows.len()).all(|u| self.row(u).iter().all(Option::is_some))
    }
}

impl DistanceOracle for DistanceMatrix<'_> {
    fn distance(&self, from: VertexId, to: VertexId) -> Option<u32> {
        self.get(from, to)
    }
}

/// Partition of `Γ^out(y)` by distance from `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaDecomposition {
    /// `d(x, y)`.
    pub distance: u32,
    /// `buckets[k]` holds the out-neighbours `v` of `y` with
    /// `d(x, v) = d(x, y) − k`, for `k = 0..=d(x, y)`.
    pub buckets: Vec<Vec<VertexId>>,
    /// Out-neighbours `v` of `y` with `d(x, v) = d(x, y) + 1`.
    pub plus: Vec<VertexId>,
}

impl GammaDecomposition {
    /// `Σ_k k·|Γ_x^k(y)|` over every bucket.
    pub fn weighted_bucket_sum(&self) -> usize {
        self.buckets.iter().enumerate().map(|(k, b)| k * b.len()).sum()
    }
}

pub fn gamma_decomposition(
    graph: &DirectedGraph,
    distances: &impl DistanceOracle,
    x: VertexId,
    y: VertexId,
) -> Result<GammaDecomposition, GraphError> {
    graph.check_vertex(x)?;
    graph.check_vertex(y)?;
    if x == y {
        return Err(GraphError::SameVertex(x));
    }
    let dxy = distances.distance(x, y).ok_or(GraphError::InfiniteDistance(x, y))?;
    let mut buckets = vec![Vec::new(); dxy as usize + 1];
    let mut plus = Vec::new();
    for &v in graph.out_neighbors(y) {
        // d(x, v) <= d(x, y) + 1 through the edge (y, v).
        let dxv = distances.distance(x, v).expect("reachable through y");
        if dxv == dxy + 1 {
            plus.push(v);
        } else {
            buckets[(dxy - dxv) as usize].push(v);
        }
    }
    Ok(GammaDecomposition { distance: dxy, buckets, plus })
}
