//! Product-structure decompositions of surface-embedded framed multigraphs.
//!
//! Given an embedded frame `G` of Euler genus `g` and a face-size parameter
//! `d`, the pipeline produces a planar graph `H` of treewidth at most 3, a
//! layering and a vertex mapping showing that the framed closure of `G` is
//! contained in the strong product of `H`, a path and a clique `K_l`.

pub mod assemble;
pub mod cli;
pub mod cut;
pub mod embedding;
pub mod error;
pub mod frame;
pub mod frontends;
pub mod generators;
pub mod graph;
pub mod tripods;
pub mod verify;

pub use embedding::{
    bfs_structure, euler_genus, nontree_dual, trace_faces, BfsStructure, Dart, DualGraph,
    EdgeId, EmbeddedMultigraph, FaceSet, VertexId, VerticalPath,
};
pub use error::{Error, Result};
