//! α-Ricci curvature, the exact `α → 1` limit and related bounds.
//!
//! For a pair `(x, y)` with finite `d(x, y)`,
//!
//! ```text
//! κ_α(x, y) = 1 − W(m_x^α, m_y^α) / d(x, y)
//! κ(x, y)   = lim_{α→1} κ_α(x, y) / (1 − α)
//! ```
//!
//! The transport value is piecewise linear in `α`, so a single solve at
//! `α = 1 − ε` gives `W = d(x, y) + B·ε` and `κ = −B / d(x, y)` exactly.

mod conditions;
mod report;

pub use conditions::{check_condition, Condition, ConditionVerdict, Witness};
pub use report::{alpha_curvature_report, curvature_report, CurvatureReport};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{CurvatureError, GraphError};
use crate::graph::{gamma_decomposition, DirectedGraph, DistanceMatrix, VertexId};
use crate::measure::build_walk_measure;
use crate::scalar::{int, Infinitesimal, Rational, Scalar};
use crate::transport::{oracle_wasserstein, wasserstein, TransportResult};

/// First and last exponents of the ladder `α_k = 1 − 2^{−k}`.
pub const LADDER_FIRST_K: u32 = 3;
pub const LADDER_MAX_K: u32 = 24;

/// Curvature computations on one graph, sharing a lazily filled distance
/// matrix.
#[derive(Debug)]
pub struct RicciCurvature<'g> {
    graph: &'g DirectedGraph,
    distances: DistanceMatrix<'g>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderRung {
    pub k: u32,
    pub alpha: Rational,
    /// `κ_α / (1 − α)`.
    pub h: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderTrace {
    pub rungs: Vec<LadderRung>,
    pub value: Rational,
}

impl<'g> RicciCurvature<'g> {
    pub fn new(graph: &'g DirectedGraph) -> Self {
        Self { graph, distances: DistanceMatrix::new(graph) }
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn distances(&self) -> &DistanceMatrix<'g> {
        &self.distances
    }

    /// `d(x, y)` for a valid pair of distinct vertices.
    fn pair_distance(&self, x: VertexId, y: VertexId) -> Result<u32, CurvatureError> {
        self.graph.check_vertex(x)?;
        self.graph.check_vertex(y)?;
        if x == y {
            return Err(GraphError::SameVertex(x).into());
        }
        Ok(self.distances.get(x, y).ok_or(GraphError::InfiniteDistance(x, y))?)
    }

    /// Optimal transport between the two walk measures at idleness `alpha`.
    pub fn transport<S: Scalar>(
        &self,
        x: VertexId,
        y: VertexId,
        alpha: &S,
    ) -> Result<TransportResult<S>, CurvatureError> {
        let mu = build_walk_measure(self.graph, x, alpha)?;
        let nu = build_walk_measure(self.graph, y, alpha)?;
        Ok(wasserstein(&mu, &nu, &self.distances)?)
    }

    pub fn alpha_ricci(
        &self,
        x: VertexId,
        y: VertexId,
        alpha: &Rational,
    ) -> Result<Rational, CurvatureError> {
        let d = int(i64::from(self.pair_distance(x, y)?));
        let w = self.transport(x, y, alpha)?.value;
        Ok(int(1) - w / d)
    }

    /// Exact limit curvature from one solve at `α = 1 − ε`.
    pub fn ricci(&self, x: VertexId, y: VertexId) -> Result<Rational, CurvatureError> {
        let d = int(i64::from(self.pair_distance(x, y)?));
        let w = self.transport(x, y, &Infinitesimal::one_minus_epsilon())?.value;
        debug_assert_eq!(w.real, d, "both measures collapse to point masses at ε = 0");
        Ok(-w.eps / d)
    }

    /// Same limit as [`RicciCurvature::ricci`], with the transport value taken
    /// from the exhaustive oracle instead of the flow solver.
    pub fn oracle_ricci(&self, x: VertexId, y: VertexId) -> Result<Rational, CurvatureError> {
        let d = int(i64::from(self.pair_distance(x, y)?));
        let alpha = Infinitesimal::one_minus_epsilon();
        let mu = build_walk_measure(self.graph, x, &alpha)?;
        let nu = build_walk_measure(self.graph, y, &alpha)?;
        let w = oracle_wasserstein(&mu, &nu, &self.distances)?;
        Ok(-w.eps / d)
    }

    /// Evaluates `h(α_k) = κ_{α_k} / (1 − α_k)` at `α_k = 1 − 2^{−k}` until
    /// two consecutive rungs agree, checking that `h` never decreases and
    /// that the settled value matches [`RicciCurvature::ricci`].
    pub fn ricci_ladder(&self, x: VertexId, y: VertexId) -> Result<LadderTrace, CurvatureError> {
        let exact = self.ricci(x, y)?;
        let mut rungs: Vec<LadderRung> = Vec::new();
        for k in LADDER_FIRST_K..=LADDER_MAX_K {
            let gap = Rational::new(BigInt::one(), BigInt::one() << k);
            let alpha = int(1) - &gap;
            let h = self.alpha_ricci(x, y, &alpha)? / gap;
            let previous = rungs.last().map(|r| r.h.clone());
            rungs.push(LadderRung { k, alpha, h: h.clone() });
            match previous {
                Some(p) if p > h => return Err(CurvatureError::LadderNotMonotone { k }),
                Some(p) if p == h => {
                    if h != exact {
                        return Err(CurvatureError::LadderMismatch {
                            ladder: h.to_string(),
                            exact: exact.to_string(),
                        });
                    }
                    return Ok(LadderTrace { rungs, value: h });
                }
                _ => {}
            }
        }
        Err(CurvatureError::LadderNotStabilized { k_max: LADDER_MAX_K })
    }

    /// Upper bound on `κ(x, y)` from the test potential `f = −d(x, ·)`:
    ///
    /// ```text
    /// (1/d(x,y)) · [ (Σ_k k·|Γ_x^k(y)| − |Γ_x^+(y)|) / d_y + d_x^out / d_x ]
    /// ```
    ///
    /// The sum runs over every bucket `k = 1..=d(x, y)`; the last bucket is
    /// `{x}` when `(y, x)` is an edge.
    pub fn upper_bound(&self, x: VertexId, y: VertexId) -> Result<Rational, CurvatureError> {
        let dxy = self.pair_distance(x, y)?;
        let gamma = gamma_decomposition(self.graph, &self.distances, x, y)?;
        let dx = self.graph.degree(x);
        let dy = self.graph.degree(y);
        let spread = int(gamma.weighted_bucket_sum() as i64) - int(gamma.plus.len() as i64);
        let braced = spread / int(dy.total as i64)
            + Rational::new(BigInt::from(dx.out_degree), BigInt::from(dx.total));
        Ok(braced / int(i64::from(dxy)))
    }
}

pub fn alpha_ricci(
    graph: &DirectedGraph,
    x: VertexId,
    y: VertexId,
    alpha: &Rational,
) -> Result<Rational, CurvatureError> {
    RicciCurvature::new(graph).alpha_ricci(x, y, alpha)
}

pub fn ricci(graph: &DirectedGraph, x: VertexId, y: VertexId) -> Result<Rational, CurvatureError> {
    RicciCurvature::new(graph).ricci(x, y)
}

pub fn oracle_ricci(
    graph: &DirectedGraph,
    x: VertexId,
    y: VertexId,
) -> Result<Rational, CurvatureError> {
    RicciCurvature::new(graph).oracle_ricci(x, y)
}

pub fn ricci_ladder(
    graph: &DirectedGraph,
    x: VertexId,
    y: VertexId,
) -> Result<LadderTrace, CurvatureError> {
    RicciCurvature::new(graph).ricci_ladder(x, y)
}

pub fn yamada_upper_bound(
    graph: &DirectedGraph,
    x: VertexId,
    y: VertexId,
) -> Result<Rational, CurvatureError> {
    RicciCurvature::new(graph).upper_bound(x, y)
}
