//! Graph generators.
//!
//! Vertices are 0-based: vertex `i` corresponds to `v_{i+1}` in the usual
//! 1-based matrix notation.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::FamilyError;
use crate::graph::{DirectedGraph, VertexId};

fn at_least(min: usize, got: usize) -> Result<(), FamilyError> {
    if got < min {
        Err(FamilyError::NTooSmall { min, got })
    } else {
        Ok(())
    }
}

/// Tournament on `n ≥ 3` vertices. For odd `n = 2m + 1` the edge `(i, j)`
/// is present iff `j − i mod n ∈ {1, …, m}`; even `n = 2m` drops the last
/// vertex of the odd tournament on `2m + 1` vertices.
pub fn oriented_complete(n: usize) -> Result<DirectedGraph, FamilyError> {
    at_least(3, n)?;
    let odd = if n % 2 == 1 { n } else { n + 1 };
    let m = odd / 2;
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (1..=m).map(move |s| (i, (i + s) % odd)))
        .filter(|&(_, j)| j < n)
        .collect();
    Ok(DirectedGraph::new(n, &edges)?)
}

pub fn directed_cycle(n: usize) -> Result<DirectedGraph, FamilyError> {
    at_least(3, n)?;
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(DirectedGraph::new(n, &edges)?)
}

/// Cartesian product of the directed cycles `C_g` and `C_h`; vertex
/// `(i, j)` is numbered `i·h + j`.
pub fn cycle_product(g: usize, h: usize) -> Result<DirectedGraph, FamilyError> {
    at_least(3, g)?;
    at_least(3, h)?;
    let id = |i: usize, j: usize| i * h + j;
    let edges: Vec<_> = (0..g)
        .flat_map(|i| {
            (0..h).flat_map(move |j| [(id(i, j), id((i + 1) % g, j)), (id(i, j), id(i, (j + 1) % h))])
        })
        .collect();
    Ok(DirectedGraph::new(g * h, &edges)?)
}

/// Circulant digraph with edges `(i, i + s mod n)` for each offset `s`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<DirectedGraph, FamilyError> {
    let offsets = validate_offsets(n, offsets)?;
    let edges: Vec<_> =
        (0..n).flat_map(|i| offsets.iter().map(move |s| (i, (i + s) % n))).collect();
    Ok(DirectedGraph::new(n, &edges)?)
}

/// A circulant is strongly connected iff `gcd(n, s_1, …, s_r) = 1`.
pub fn circulant_is_strongly_connected(n: usize, offsets: &[usize]) -> bool {
    offsets.iter().fold(n, |g, &s| g.gcd(&s)) == 1
}

fn validate_offsets(n: usize, offsets: &[usize]) -> Result<Vec<usize>, FamilyError> {
    let mut offsets = offsets.to_vec();
    offsets.sort_unstable();
    offsets.dedup();
    if offsets.is_empty() {
        return Err(FamilyError::EmptyOffsets);
    }
    for &s in &offsets {
        if s == 0 || s >= n {
            return Err(FamilyError::OffsetOutOfRange { offset: s, n });
        }
        if offsets.binary_search(&(n - s)).is_ok() {
            return Err(FamilyError::AntiParallelOffsets(s, n - s));
        }
    }
    Ok(offsets)
}

/// Rooted tree given by parent pointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSpec {
    pub root: VertexId,
    pub parent: BTreeMap<VertexId, VertexId>,
}

impl TreeSpec {
    pub fn new(root: VertexId, parent: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        Self { root, parent: parent.into_iter().collect() }
    }

    pub fn num_vertices(&self) -> usize {
        self.parent
            .iter()
            .flat_map(|(&c, &p)| [c, p])
            .chain([self.root])
            .max()
            .map_or(0, |v| v + 1)
    }

    /// Star with `leaves` leaves, rooted at leaf 0; the centre is vertex 1.
    pub fn star(leaves: usize) -> Self {
        Self::new(0, std::iter::once((1, 0)).chain((2..=leaves).map(|leaf| (leaf, 1))))
    }

    /// Path `0 ← 1 ← … ← spine−1` with `legs` leaves hanging off every
    /// spine vertex. Rooted at spine vertex 0.
    pub fn caterpillar(spine: usize, legs: usize) -> Self {
        let path = (1..spine).map(|i| (i, i - 1));
        let hanging = (0..spine).flat_map(|i| (0..legs).map(move |l| (spine + i * legs + l, i)));
        Self::new(0, path.chain(hanging))
    }

    /// Complete binary tree of the given depth in heap order.
    pub fn full_binary(depth: u32) -> Self {
        let n = (1usize << (depth + 1)) - 1;
        Self::new(0, (1..n).map(|v| (v, (v - 1) / 2)))
    }
}

/// Orients every tree edge towards the root: each non-root vertex gets the
/// single out-edge to its parent. The result is never strongly connected.
pub fn rooted_in_tree(spec: &TreeSpec) -> Result<DirectedGraph, FamilyError> {
    let n = spec.num_vertices();
    if spec.parent.contains_key(&spec.root) {
        return Err(FamilyError::CyclicParentMap(spec.root));
    }
    for v in (0..n).filter(|&v| v != spec.root) {
        let mut current = v;
        for _ in 0..n {
            if current == spec.root {
                break;
            }
            current = *spec.parent.get(&current).ok_or(FamilyError::MissingParent(current))?;
        }
        if current != spec.root {
            return Err(FamilyError::CyclicParentMap(v));
        }
    }
    let edges: Vec<_> = spec.parent.iter().map(|(&c, &p)| (c, p)).collect();
    Ok(DirectedGraph::new(n, &edges)?)
}
