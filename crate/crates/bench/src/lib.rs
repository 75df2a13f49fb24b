//! Benchmark workloads shared by the criterion harness.

use diricci::families::{circulant, cycle_product, oriented_complete};
use diricci::DirectedGraph;

/// Named graphs of increasing size used by the curvature benchmarks.
pub fn workloads() -> Vec<(String, DirectedGraph)> {
    vec![
        ("tournament-9".into(), oriented_complete(9).unwrap()),
        ("tournament-15".into(), oriented_complete(15).unwrap()),
        ("product-6x6".into(), cycle_product(6, 6).unwrap()),
        ("circulant-31-1-5-11".into(), circulant(31, &[1, 5, 11]).unwrap()),
    ]
}
