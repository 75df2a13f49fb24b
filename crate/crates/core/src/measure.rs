//! Finitely supported measures and the lazy random-walk measure.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::MeasureError;
use crate::graph::{DegreeConvention, DirectedGraph, VertexId};
use crate::scalar::{int, Rational, Scalar};

/// Finitely supported measure with strictly positive stored masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMeasure<S> {
    entries: BTreeMap<VertexId, S>,
}

impl<S: Scalar> SparseMeasure<S> {
    /// Collects `(vertex, mass)` pairs, summing repeats and dropping zeros.
    ///
    /// Returns `None` if any resulting mass is negative.
    pub fn from_masses(masses: impl IntoIterator<Item = (VertexId, S)>) -> Option<Self> {
        let mut entries: BTreeMap<VertexId, S> = BTreeMap::new();
        for (v, m) in masses {
            let slot = entries.entry(v).or_insert_with(S::zero);
            *slot = slot.clone() + m;
        }
        entries.retain(|_, m| !m.is_zero());
        entries.values().all(Scalar::is_positive).then_some(Self { entries })
    }

    pub fn dirac(vertex: VertexId) -> Self {
        Self { entries: BTreeMap::from([(vertex, S::one())]) }
    }

    /// Mass at `vertex`, zero off the support.
    pub fn mass(&self, vertex: VertexId) -> S {
        self.entries.get(&vertex).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &S)> + '_ {
        self.entries.iter().map(|(&v, m)| (v, m))
    }

    pub fn total(&self) -> S {
        self.entries.values().fold(S::zero(), |acc, m| acc + m)
    }
}

impl<S: Scalar> fmt::Display for SparseMeasure<S> {
    /// One `vertex: mass` line per support vertex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, m) in &self.entries {
            writeln!(f, "{v}: {m}")?;
        }
        Ok(())
    }
}

/// The `α`-lazy walk measure at `x`: mass `α + (1 − α)·d_x^in/d_x` stays at
/// `x` and each out-neighbour receives `(1 − α)/d_x`.
pub fn build_walk_measure<S: Scalar>(
    graph: &DirectedGraph,
    x: VertexId,
    alpha: &S,
) -> Result<SparseMeasure<S>, MeasureError> {
    if x >= graph.num_vertices() {
        return Err(MeasureError::VertexOutOfRange { vertex: x, n: graph.num_vertices() });
    }
    if alpha.is_negative() || *alpha > S::one() {
        return Err(MeasureError::AlphaOutOfRange(alpha.to_string()));
    }
    let degree = graph.degree(x);
    if degree.total == 0 {
        return Err(MeasureError::IsolatedVertex(x));
    }
    if graph.convention() == DegreeConvention::Strict
        && degree.total != degree.in_degree + degree.out_degree
    {
        return Err(MeasureError::DegreeConventionViolated(x));
    }
    let d = degree.total as i64;
    let lazy = S::one() - alpha;
    let step = lazy.scale(&Rational::new(1.into(), d.into()));
    let stay = alpha.clone() + step.scale(&int(degree.in_degree as i64));

    let mut entries = BTreeMap::new();
    if !stay.is_zero() {
        entries.insert(x, stay);
    }
    if !step.is_zero() {
        for &v in graph.out_neighbors(x) {
            entries.insert(v, step.clone());
        }
    }
    let measure = SparseMeasure { entries };
    debug_assert_eq!(measure.total(), S::one());
    Ok(measure)
}
