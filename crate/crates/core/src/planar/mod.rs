//! Plane graphs given by rotation systems, and the structures read off them:
//! faces, clusters of 3-faces, forbidden subgraphs and 3-cycle predicates.

mod cluster;
mod cycles;
mod embedding;
pub mod generate;
mod graph;
mod pattern;
mod triangle;

pub use cluster::{
    extract_clusters, extract_clusters_with, CatalogEntry, Classification, Cluster, ClusterCatalog, ClusterId, RoleMap,
};
pub use cycles::{find_cycle_of_length, has_cycle_of_length};
pub use embedding::{faces_from_rotation, EmbeddingError, Face, FaceId, PlaneGraph};
pub use graph::{Dsu, Edge, Graph, GraphError};
pub use pattern::{contains_pattern, PatternError, PatternGraph};
pub use triangle::{cycle_predicates, cycle_predicates_with, triangle_sides, CyclePredicates, NotATriangle, TriangleSides};

use crate::format::GraphFile;

const BUTTERFLY: &str = include_str!("../../assets/butterfly.json");

/// The butterfly: two copies of shape (10) sharing one 4-type vertex.
pub fn butterfly_pattern() -> PatternGraph {
    let file = GraphFile::from_json(BUTTERFLY).expect("butterfly asset parses");
    PatternGraph::new("butterfly", file.graph().expect("butterfly asset is simple")).expect("butterfly is connected")
}
