use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::json;

use super::RicciCurvature;
use crate::error::CurvatureError;
use crate::graph::{DirectedGraph, VertexId};
use crate::scalar::{int, Rational};

/// Limit curvature of every edge with summary verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureReport {
    pub per_edge: BTreeMap<(VertexId, VertexId), Rational>,
    pub min: Rational,
    pub max: Rational,
    pub is_constant: bool,
    pub constant_value: Option<Rational>,
    pub is_ricci_flat: bool,
}

impl CurvatureReport {
    pub fn from_edges(per_edge: BTreeMap<(VertexId, VertexId), Rational>) -> Option<Self> {
        let min = per_edge.values().min()?.clone();
        let max = per_edge.values().max()?.clone();
        let is_constant = min == max;
        let zero = int(0);
        Some(Self {
            is_ricci_flat: per_edge.values().all(|k| *k == zero),
            constant_value: is_constant.then(|| min.clone()),
            per_edge,
            min,
            max,
            is_constant,
        })
    }

    /// Distinct edge curvatures in ascending order.
    pub fn attained_values(&self) -> Vec<Rational> {
        let mut values: Vec<_> = self.per_edge.values().cloned().collect();
        values.sort();
        values.dedup();
        values
    }

    /// `u,v,kappa_num,kappa_den,kappa_approx` rows. The last column is a
    /// rounded decimal for reading only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,kappa_num,kappa_den,kappa_approx\n");
        for (&(u, v), k) in &self.per_edge {
            let approx = k.to_f64().unwrap_or(f64::NAN);
            writeln!(out, "{u},{v},{},{},{approx:.6}", k.numer(), k.denom()).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<_> = self
            .per_edge
            .iter()
            .map(|(&(u, v), k)| json!({ "u": u, "v": v, "kappa": k.to_string() }))
            .collect();
        json!({
            "per_edge": edges,
            "min": self.min.to_string(),
            "max": self.max.to_string(),
            "is_constant": self.is_constant,
            "constant_value": self.constant_value.as_ref().map(ToString::to_string),
            "is_ricci_flat": self.is_ricci_flat,
        })
    }
}

/// Limit curvature on every edge of a strongly connected graph, computed in
/// parallel and merged in edge order.
pub fn curvature_report(graph: &DirectedGraph) -> Result<CurvatureReport, CurvatureError> {
    edge_report(graph, |c, u, v| c.ricci(u, v))
}

/// Same as [`curvature_report`] with `κ_α` in place of the limit.
pub fn alpha_curvature_report(
    graph: &DirectedGraph,
    alpha: &Rational,
) -> Result<CurvatureReport, CurvatureError> {
    edge_report(graph, |c, u, v| c.alpha_ricci(u, v, alpha))
}

fn edge_report(
    graph: &DirectedGraph,
    value: impl Fn(&RicciCurvature<'_>, VertexId, VertexId) -> Result<Rational, CurvatureError> + Sync,
) -> Result<CurvatureReport, CurvatureError> {
    if !graph.is_strongly_connected() {
        return Err(CurvatureError::NotStronglyConnected);
    }
    let curvature = RicciCurvature::new(graph);
    // Fill every row before fanning out so workers only read.
    for source in 0..graph.num_vertices() {
        curvature.distances().row(source);
    }
    let edges: Vec<_> = graph.edges().collect();
    let values = edges
        .par_iter()
        .map(|&(u, v)| value(&curvature, u, v))
        .collect::<Result<Vec<_>, _>>()?;
    CurvatureReport::from_edges(edges.into_iter().zip(values).collect())
        .ok_or(CurvatureError::NoEdges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn circulant(n: usize, offsets: &[usize]) -> DirectedGraph {
        let edges: Vec<_> =
            (0..n).flat_map(|i| offsets.iter().map(move |s| (i, (i + s) % n))).collect();
        DirectedGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn cycle_is_flat() {
        let report = curvature_report(&circulant(7, &[1])).unwrap();
        assert!(report.is_ricci_flat);
        assert!(report.is_constant);
        assert_eq!(report.constant_value, Some(int(0)));
        assert_eq!(report.per_edge.len(), 7);
    }

    #[test]
    fn complete_five_is_not_constant() {
        let report = curvature_report(&circulant(5, &[1, 2])).unwrap();
        assert_eq!(report.attained_values(), vec![int(0), ratio(1, 4)]);
        assert!(!report.is_constant);
        assert!(!report.is_ricci_flat);
        assert_eq!(report.per_edge[&(0, 1)], ratio(1, 4));
        assert_eq!(report.per_edge[&(0, 2)], int(0));
    }

    #[test]
    fn serializations() {
        let report = curvature_report(&circulant(5, &[1, 2])).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("u,v,kappa_num,kappa_den,kappa_approx"));
        assert_eq!(lines.next(), Some("0,1,1,4,0.250000"));
        assert_eq!(lines.next(), Some("0,2,0,1,0.000000"));
        let json = report.to_json();
        assert_eq!(json["per_edge"][0]["kappa"], "1/4");
        assert_eq!(json["max"], "1/4");
        assert_eq!(json["is_ricci_flat"], false);
        assert!(json["constant_value"].is_null());
    }

    #[test]
    fn alpha_report() {
        let g = circulant(5, &[1, 2]);
        let half = alpha_curvature_report(&g, &ratio(1, 2)).unwrap();
        assert_eq!(half.per_edge[&(0, 1)], ratio(1, 8));
        let one = alpha_curvature_report(&g, &int(1)).unwrap();
        assert!(one.is_ricci_flat);
    }

    #[test]
    fn requires_strong_connectivity() {
        let tree = DirectedGraph::new(3, &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(curvature_report(&tree), Err(CurvatureError::NotStronglyConnected));
        let single = DirectedGraph::new(1, &[]).unwrap();
        assert_eq!(curvature_report(&single), Err(CurvatureError::NoEdges));
    }
}
