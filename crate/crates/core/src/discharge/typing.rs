use serde::{Deserialize, Serialize};

use crate::planar::{Cluster, ClusterId, PlaneGraph};

/// A cluster is special when it has shape (7), (9), (10) or (11) and its
/// `x`, `y`, `z` are internal 4-vertices. With several labelings of the
/// shape, one suffices.
pub fn classify_special_cluster(c: &Cluster, pg: &PlaneGraph) -> bool {
    if !matches!(c.code(), Some(7 | 9 | 10 | 11)) {
        return false;
    }
    c.classification.roles.iter().any(|map| {
        ["x", "y", "z"]
            .iter()
            .all(|r| map.get(r).is_some_and(|v| pg.is_internal(v) && pg.degree(v) == 4))
    })
}

/// Every vertex of a cluster avoids the outer face.
pub fn cluster_is_internal(c: &Cluster, pg: &PlaneGraph) -> bool {
    c.vertices.iter().all(|&v| pg.is_internal(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEntry {
    pub vertex: usize,
    pub cluster: ClusterId,
    /// Number of cluster edges at the vertex.
    pub i_type: usize,
    pub good: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexTyping {
    pub entries: Vec<TypeEntry>,
    pub internal: Vec<bool>,
    pub special_cluster: Vec<bool>,
    pub special6: Vec<bool>,
}

impl VertexTyping {
    pub fn entry(&self, v: usize, c: ClusterId) -> Option<&TypeEntry> {
        self.entries.iter().find(|e| e.vertex == v && e.cluster == c)
    }

    pub fn of_vertex(&self, v: usize) -> impl Iterator<Item = &TypeEntry> + '_ {
        self.entries.iter().filter(move |e| e.vertex == v)
    }
}

pub fn vertex_typing(pg: &PlaneGraph, clusters: &[Cluster]) -> VertexTyping {
    let internal: Vec<bool> = (0..pg.n()).map(|v| pg.is_internal(v)).collect();
    let special_cluster: Vec<bool> = clusters.iter().map(|c| classify_special_cluster(c, pg)).collect();
    let mut entries = Vec::new();
    for c in clusters {
        for &v in &c.vertices {
            entries.push(TypeEntry { vertex: v, cluster: c.id, i_type: c.edges_at(v), good: special_cluster[c.id] });
        }
    }
    let special6 = (0..pg.n())
        .map(|v| {
            if !internal[v] || pg.degree(v) != 6 {
                return false;
            }
            let mine = || entries.iter().filter(move |e| e.vertex == v && e.good);
            let big = mine().any(|e| {
                let c = &clusters[e.cluster];
                e.i_type == 4 && (6..=7).contains(&c.k()) && cluster_is_internal(c, pg)
            });
            let small = mine().any(|e| e.i_type == 2 && (4..=5).contains(&clusters[e.cluster].k()));
            big && small
        })
        .collect();
    VertexTyping { entries, internal, special_cluster, special6 }
}
