//! Adapted Convex Hull Cheapest Insertion (ACHCI) for TSPs with
//! non-Euclidean costs, plus the benchmark harness around it.
//!
//! The pipeline: parse a TSPLIB instance ([`tsplib`]), generate line-segment
//! separators that block straight travel ([`geometry`]), compute true
//! shortest-path costs over the visibility graph ([`shortest_paths`]), embed
//! the cost matrix into the plane with classical MDS ([`mds`]), then build a
//! tour by convex-hull-seeded cheapest insertion using the *true* costs
//! ([`heuristics`]). [`bench`] orchestrates suites and writes reports.

pub mod bench;
pub mod eigen;
pub mod geometry;
pub mod heuristics;
pub mod mds;
pub mod plot;
pub mod shortest_paths;
pub mod tsplib;
