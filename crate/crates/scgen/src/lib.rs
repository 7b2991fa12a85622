//! Generation and verification of strongly chordal graphs.
//!
//! The construction runs in five stages:
//!
//! 1. [`matrix`] — generate a random 0-1 matrix that avoids the two
//!    forbidden 2x2 submatrix patterns (delta1/delta2).
//! 2. [`prune`] — drop all-zero and duplicate rows.
//! 3. [`tree`] — realize the surviving rows as node sets of a rooted
//!    weighted tree on the columns; the pattern-freeness makes every row a
//!    connected subtree and the family pairwise compatible.
//! 4. [`graph`] — build the intersection graph of the rows: one vertex per
//!    row, edges where supports overlap. These graphs are strongly chordal.
//! 5. [`recognition`] — independently verify the result by simple-vertex
//!    elimination, with a factorial ordering-search oracle for
//!    cross-validation on small graphs.
//!
//! [`pipeline`] wires the stages together, emits artifact files, and
//! produces a JSON verification report; the `scgen` binary is a thin CLI
//! over it. With the default `parallel` feature, batch runs and pairwise
//! family/graph checks fan out via rayon; `_seq` variants keep everything
//! single-threaded.

#![forbid(unsafe_code)]

pub mod graph;
pub mod matrix;
pub mod pipeline;
pub mod prune;
pub mod recognition;
pub mod tree;

pub use graph::{intersection_graph, rows_intersect, Graph};
pub use matrix::{
    find_forbidden_submatrix, generate_matrix, scan_forbidden, BitMatrix, GenMode,
    GenerationConfig, Pattern, PatternSet, PatternWitness,
};
pub use pipeline::{run_from_matrix, run_pipeline, run_stages, RunArtifacts, VerificationReport};
pub use prune::{prune, PruneResult};
pub use recognition::{
    brute_force_strong_elimination, is_chordal, is_simple_vertex, is_strongly_chordal,
    EliminationOrder,
};
pub use tree::{
    build_tree, is_compatible_family, is_connected_in_tree, is_full, SubtreeFamily, WeightedTree,
};
