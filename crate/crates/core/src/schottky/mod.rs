//! Schottky groups: ping-pong labeling, reduction to the fundamental domain,
//! the quotient core graph and the high-branching test.

mod branching;
mod core_graph;
mod group;
mod limits;
mod word;

pub use branching::{
    degree_condition, density_condition, high_branched_check, BranchingReport, DegreeCondition, DensityCondition,
    DensityFinding, PairWitness,
};
pub use core_graph::{axis_in_domain, core_vertices_from_words, CoreGraph, Dart, DEFAULT_WORD_LENGTH};
pub use group::{offset_order, Generator, Reduction, SchottkyGroup, DEFAULT_WINDOW};
pub use limits::{axis_approximate, axis_ends, geodesic_window, limit_points, on_axis, DEDUP_DEPTH};
pub use word::{reduced_words, Letter, Word};
