//! Exact Ricci curvature of directed graphs.
//!
//! The α-Ricci curvature of a pair `(x, y)` compares the lazy random-walk
//! measures at `x` and `y` through the 1-Wasserstein distance under the
//! directed hop metric. Its `α → 1` limit, scaled by `1/(1 − α)`, is the
//! Ricci curvature `κ(x, y)`. Everything here is exact: masses are rationals,
//! and the limit is taken in one transport solve over the ordered field
//! `ℚ(ε)` truncated at first order.
//!
//! ```
//! use diricci::{families, ricci, ratio};
//!
//! let k5 = families::oriented_complete(5).unwrap();
//! assert_eq!(ricci(&k5, 0, 1).unwrap(), ratio(1, 4));
//! assert_eq!(ricci(&k5, 0, 2).unwrap(), ratio(0, 1));
//! ```

pub mod curvature;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod matching;
pub mod measure;
pub mod scalar;
pub mod transport;
pub mod verify;

pub use curvature::{
    alpha_curvature_report, alpha_ricci, check_condition, curvature_report, oracle_ricci, ricci, ricci_ladder,
    yamada_upper_bound, Condition, ConditionVerdict, CurvatureReport, LadderTrace,
    RicciCurvature, Witness,
};
pub use error::{CurvatureError, FamilyError, FormatError, GraphError, MeasureError, TransportError};
pub use families::TreeSpec;
pub use graph::{DegreeConvention, DegreeTriple, DirectedGraph, DistanceMatrix, DistanceOracle, VertexId};
pub use io::GraphFormat;
pub use measure::{build_walk_measure, SparseMeasure};
pub use scalar::{int, parse_rational, ratio, Infinitesimal, Rational, Scalar};
pub use transport::{oracle_wasserstein, wasserstein, Coupling, LipschitzPotential, TransportResult};
