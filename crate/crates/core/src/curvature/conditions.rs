//! Structural conditions that control Ricci-flatness of regular digraphs.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::CurvatureError;
use crate::graph::{DirectedGraph, DistanceMatrix, VertexId};
use crate::matching::maximum_matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Adjacent vertices share no out-neighbour: for every edge `(x, y)`,
    /// `Γ^out(x) ∩ Γ^out(y) = ∅`.
    A,
    /// Every vertex has the same out-degree.
    EqualOutDegree,
    /// For every edge `(u, v)` there is a bijection `φ: Γ^out(u) → Γ^out(v)`
    /// with `d(w, φ(w)) = 1`.
    MatchingPhi,
    /// For adjacent edges `(x, y), (y, z)`: `Γ^out(x) ∩ Γ^in(z) = {y}`.
    B,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::A, Condition::EqualOutDegree, Condition::MatchingPhi, Condition::B];

    fn needs_strong_connectivity(self) -> bool {
        matches!(self, Condition::MatchingPhi | Condition::B)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "a",
            Condition::EqualOutDegree => "outdeg",
            Condition::MatchingPhi => "phi",
            Condition::B => "b",
        })
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(Condition::A),
            "outdeg" => Ok(Condition::EqualOutDegree),
            "phi" => Ok(Condition::MatchingPhi),
            "b" => Ok(Condition::B),
            other => Err(format!("unknown condition {other:?} (expected a, outdeg, phi or b)")),
        }
    }
}

/// A tuple showing where a condition fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    SharedOutNeighbors { x: VertexId, y: VertexId, shared: Vec<VertexId> },
    OutDegree { vertex: VertexId, out_degree: usize, expected: usize },
    NoBijection { u: VertexId, v: VertexId, matched: usize, needed: usize },
    Bypass { x: VertexId, y: VertexId, z: VertexId, common: Vec<VertexId> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl ConditionVerdict {
    fn from_witnesses(condition: Condition, witnesses: Vec<Witness>) -> Self {
        Self { condition, holds: witnesses.is_empty(), witnesses }
    }
}

fn intersection(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

pub fn check_condition(
    graph: &DirectedGraph,
    condition: Condition,
) -> Result<ConditionVerdict, CurvatureError> {
    if condition.needs_strong_connectivity() && !graph.is_strongly_connected() {
        return Err(CurvatureError::NotStronglyConnected);
    }
    let witnesses = match condition {
        Condition::A => graph
            .edges()
            .filter_map(|(x, y)| {
                let shared = intersection(graph.out_neighbors(x), graph.out_neighbors(y));
                (!shared.is_empty()).then_some(Witness::SharedOutNeighbors { x, y, shared })
            })
            .collect(),
        Condition::EqualOutDegree => {
            let expected = (0..graph.num_vertices()).next().map_or(0, |v| graph.degree(v).out_degree);
            (0..graph.num_vertices())
                .filter_map(|vertex| {
                    let out_degree = graph.degree(vertex).out_degree;
                    (out_degree != expected).then_some(Witness::OutDegree {
                        vertex,
                        out_degree,
                        expected,
                    })
                })
                .collect()
        }
        Condition::MatchingPhi => {
            let distances = DistanceMatrix::new(graph);
            graph
                .edges()
                .filter_map(|(u, v)| {
                    let left = graph.out_neighbors(u);
                    let right = graph.out_neighbors(v);
                    let adj: Vec<Vec<usize>> = left
                        .iter()
                        .map(|&a| {
                            (0..right.len())
                                .filter(|&j| distances.get(a, right[j]) == Some(1))
                                .collect()
                        })
                        .collect();
                    let matched = maximum_matching(&adj, right.len()).iter().flatten().count();
                    let needed = left.len().max(right.len());
                    (matched < needed).then_some(Witness::NoBijection { u, v, matched, needed })
                })
                .collect()
        }
        Condition::B => graph
            .edges()
            .flat_map(|(x, y)| {
                graph
                    .out_neighbors(y)
                    .iter()
                    .filter(move |&&z| z != x)
                    .filter_map(move |&z| {
                        let common = intersection(graph.out_neighbors(x), graph.in_neighbors(z));
                        (common != [y]).then_some(Witness::Bypass { x, y, z, common })
                    })
            })
            .collect(),
    };
    Ok(ConditionVerdict::from_witnesses(condition, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> DirectedGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        DirectedGraph::new(n, &edges).unwrap()
    }

    fn k5() -> DirectedGraph {
        let edges: Vec<_> = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, (i + 2) % 5)]).collect();
        DirectedGraph::new(5, &edges).unwrap()
    }

    fn product(g: usize, h: usize) -> DirectedGraph {
        let id = |i: usize, j: usize| i * h + j;
        let edges: Vec<_> = (0..g)
            .flat_map(|i| (0..h).flat_map(move |j| [(id(i, j), id((i + 1) % g, j)), (id(i, j), id(i, (j + 1) % h))]))
            .collect();
        DirectedGraph::new(g * h, &edges).unwrap()
    }

    #[test]
    fn complete_five_fails_a() {
        let verdict = check_condition(&k5(), Condition::A).unwrap();
        assert!(!verdict.holds);
        // (v_1, v_2) in 1-based labels share v_3
        assert_eq!(
            verdict.witnesses[0],
            Witness::SharedOutNeighbors { x: 0, y: 1, shared: vec![2] }
        );
    }

    #[test]
    fn cycles_satisfy_everything() {
        for g in [cycle(3), cycle(6)] {
            for condition in Condition::ALL {
                let verdict = check_condition(&g, condition).unwrap();
                assert!(verdict.holds, "{condition} failed: {:?}", verdict.witnesses);
            }
        }
    }

    #[test]
    fn products_fail_only_b() {
        let g = product(3, 4);
        for condition in [Condition::A, Condition::EqualOutDegree, Condition::MatchingPhi] {
            assert!(check_condition(&g, condition).unwrap().holds, "{condition}");
        }
        // (0,0) -> (0,1) -> (1,1) is bypassed by (0,0) -> (1,0) -> (1,1)
        let b = check_condition(&g, Condition::B).unwrap();
        assert!(b.witnesses.contains(&Witness::Bypass { x: 0, y: 1, z: 5, common: vec![1, 4] }));
        // straight pairs along one factor are fine
        assert!(!b.witnesses.iter().any(|w| matches!(w, Witness::Bypass { x: 0, y: 1, z: 2, .. })));
        assert_eq!(b.witnesses.len(), 24);
    }

    #[test]
    fn unequal_out_degrees() {
        // 0 -> 1 -> 2 -> 0 plus 0 -> 3 -> 2
        let g = DirectedGraph::new(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 2)]).unwrap();
        let verdict = check_condition(&g, Condition::EqualOutDegree).unwrap();
        let offenders: Vec<_> = verdict
            .witnesses
            .iter()
            .map(|w| match w {
                Witness::OutDegree { vertex, out_degree: 1, expected: 2 } => *vertex,
                other => panic!("unexpected witness {other:?}"),
            })
            .collect();
        assert_eq!(offenders, vec![1, 2, 3]);
        let phi = check_condition(&g, Condition::MatchingPhi).unwrap();
        assert!(!phi.holds);
        // (0,1),(1,2): Γ^out(0) ∩ Γ^in(2) = {1, 3}
        let b = check_condition(&g, Condition::B).unwrap();
        assert!(b.witnesses.contains(&Witness::Bypass { x: 0, y: 1, z: 2, common: vec![1, 3] }));
    }

    #[test]
    fn needs_strong_connectivity() {
        let tree = DirectedGraph::new(3, &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(
            check_condition(&tree, Condition::MatchingPhi),
            Err(CurvatureError::NotStronglyConnected)
        );
        assert_eq!(check_condition(&tree, Condition::B), Err(CurvatureError::NotStronglyConnected));
        assert!(check_condition(&tree, Condition::A).unwrap().holds);
    }

    #[test]
    fn verdict_serializes() {
        let verdict = check_condition(&k5(), Condition::A).unwrap();
        let json = serde_json::to_value(&verdict).unwrap();
        assert_eq!(json["condition"], "a");
        assert_eq!(json["holds"], false);
        assert_eq!(json["witnesses"][0]["kind"], "shared_out_neighbors");
    }

    #[test]
    fn parse_condition() {
        for c in Condition::ALL {
            assert_eq!(c.to_string().parse::<Condition>().unwrap(), c);
        }
        assert!("flat".parse::<Condition>().is_err());
    }
}
