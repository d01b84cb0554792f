use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::graph::{Edge, Graph};

pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("rotation covers {got} vertices but the graph has {n}")]
    RotationLength { got: usize, n: usize },
    #[error("rotation at vertex {vertex} does not list exactly its neighbors once each")]
    RotationMismatch { vertex: usize },
    #[error("rotation system is not planar: V - E + F = {euler} on a connected graph")]
    NotPlanar { euler: i64 },
    #[error("outer face walk {0:?} is not a face of the embedding")]
    UnknownOuterFace(Vec<usize>),
}

/// A face of an embedded graph, given by its boundary walk.
///
/// The walk lists the tail of each dart in traversal order with the face on
/// the left, so interior faces run counterclockwise and the outer face
/// clockwise. Its length is the face degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub walk: Vec<usize>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.walk.len()
    }

    /// Darts `(walk[i], walk[i+1])` around the face.
    pub fn darts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.walk.len();
        (0..d).map(move |i| (self.walk[i], self.walk[(i + 1) % d]))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.darts().map(|(a, b)| Edge::new(a, b))
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.walk.contains(&v)
    }

    /// Lexicographically smallest cyclic rotation of the walk.
    pub fn canonical_walk(&self) -> Vec<usize> {
        min_rotation(&self.walk)
    }
}

pub(crate) fn min_rotation(walk: &[usize]) -> Vec<usize> {
    let d = walk.len();
    (0..d)
        .map(|s| (0..d).map(|i| walk[(s + i) % d]).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn validate_rotation(graph: &Graph, rotation: &[Vec<usize>]) -> Result<(), EmbeddingError> {
    if rotation.len() != graph.n() {
        return Err(EmbeddingError::RotationLength { got: rotation.len(), n: graph.n() });
    }
    for (v, rot) in rotation.iter().enumerate() {
        let mut sorted = rot.clone();
        sorted.sort_unstable();
        if sorted.as_slice() != graph.neighbors(v) {
            return Err(EmbeddingError::RotationMismatch { vertex: v });
        }
    }
    Ok(())
}

/// Traces the faces of a rotation system.
///
/// `rotation[v]` lists the neighbors of `v` in counterclockwise order. The
/// successor of dart `u -> v` is `v -> w` where `w` precedes `u` in the
/// rotation at `v`. Faces are numbered in order of their smallest dart.
pub fn faces_from_rotation(graph: &Graph, rotation: &[Vec<usize>]) -> Result<Vec<Face>, EmbeddingError> {
    validate_rotation(graph, rotation)?;
    let position: Vec<HashMap<usize, usize>> = rotation
        .iter()
        .map(|rot| rot.iter().enumerate().map(|(i, &w)| (w, i)).collect())
        .collect();
    let mut used: HashMap<(usize, usize), bool> = HashMap::new();
    let mut faces = Vec::new();
    for u in 0..graph.n() {
        for &v in graph.neighbors(u) {
            if used.contains_key(&(u, v)) {
                continue;
            }
            let mut walk = Vec::new();
            let (mut a, mut b) = (u, v);
            loop {
                used.insert((a, b), true);
                walk.push(a);
                let rot = &rotation[b];
                let i = position[b][&a];
                let w = rot[(i + rot.len() - 1) % rot.len()];
                a = b;
                b = w;
                if (a, b) == (u, v) {
                    break;
                }
            }
            faces.push(Face { id: faces.len(), walk });
        }
    }
    Ok(faces)
}

/// A simple graph together with a planar rotation system and a designated
/// outer face. Immutable once built.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Face>,
    dart_face: HashMap<(usize, usize), FaceId>,
    outer: FaceId,
}

impl PlaneGraph {
    /// Builds the embedding and designates the outer face.
    ///
    /// With no `outer_walk` the outer face is the face of maximum degree,
    /// ties going to the lexicographically smallest canonical walk. A given
    /// walk must match a face boundary up to cyclic rotation.
    pub fn new(graph: Graph, rotation: Vec<Vec<usize>>, outer_walk: Option<&[usize]>) -> Result<Self, EmbeddingError> {
        let faces = faces_from_rotation(&graph, &rotation)?;
        if graph.n() > 0 && graph.is_connected() {
            let euler = graph.n() as i64 - graph.edge_count() as i64 + faces.len().max(1) as i64;
            if euler != 2 {
                return Err(EmbeddingError::NotPlanar { euler });
            }
        }
        let mut dart_face = HashMap::new();
        for f in &faces {
            for d in f.darts() {
                dart_face.insert(d, f.id);
            }
        }
        let outer = match outer_walk {
            Some(walk) => {
                let target = min_rotation(walk);
                faces
                    .iter()
                    .find(|f| f.degree() == walk.len() && f.canonical_walk() == target)
                    .map(|f| f.id)
                    .ok_or_else(|| EmbeddingError::UnknownOuterFace(walk.to_vec()))?
            }
            None => default_outer(&faces),
        };
        Ok(PlaneGraph { graph, rotation, faces, dart_face, outer })
    }

    /// Same embedding with a different outer face.
    pub fn with_outer(&self, outer: FaceId) -> Self {
        assert!(outer < self.faces.len(), "face {outer} does not exist");
        PlaneGraph { outer, ..self.clone() }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn outer_id(&self) -> FaceId {
        self.outer
    }

    pub fn outer_face(&self) -> &Face {
        &self.faces[self.outer]
    }

    /// Face on the left of dart `a -> b`.
    pub fn face_of_dart(&self, a: usize, b: usize) -> FaceId {
        self.dart_face[&(a, b)]
    }

    /// The two faces on either side of an edge (equal for a bridge).
    pub fn faces_of_edge(&self, e: Edge) -> (FaceId, FaceId) {
        (self.face_of_dart(e.lo, e.hi), self.face_of_dart(e.hi, e.lo))
    }

    /// Faces around `v` in counterclockwise order; entry `i` lies between
    /// `rotation(v)[i]` and `rotation(v)[i+1]`.
    pub fn faces_around(&self, v: usize) -> Vec<FaceId> {
        let rot = &self.rotation[v];
        let d = rot.len();
        (0..d).map(|i| self.face_of_dart(rot[(i + 1) % d], v)).collect()
    }

    pub fn outer_vertices(&self) -> BTreeSet<usize> {
        self.outer_face().walk.iter().copied().collect()
    }

    /// A vertex is internal when it is not on the outer face boundary.
    pub fn is_internal(&self, v: usize) -> bool {
        !self.outer_face().contains_vertex(v)
    }

    /// Faces that are not the outer face and have degree 3.
    pub fn interior_triangles(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(move |f| f.id != self.outer && f.degree() == 3)
    }
}

fn default_outer(faces: &[Face]) -> FaceId {
    faces
        .iter()
        .max_by(|a, b| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| b.canonical_walk().cmp(&a.canonical_walk()))
        })
        .map(|f| f.id)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> PlaneGraph {
        // 0,1,2 counterclockwise with 3 in the middle
        let g = Graph::complete(4);
        let rot = vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
        PlaneGraph::new(g, rot, Some(&[0, 2, 1])).unwrap()
    }

    #[test]
    fn k4_has_four_triangles() {
        let pg = k4();
        assert_eq!(pg.faces().len(), 4);
        assert!(pg.faces().iter().all(|f| f.degree() == 3));
        assert_eq!(pg.outer_face().canonical_walk(), vec![0, 2, 1]);
        assert!(!pg.is_internal(0));
        assert!(pg.is_internal(3));
    }

    #[test]
    fn cycle_has_two_faces() {
        let g = Graph::cycle(5);
        let rot = (0..5).map(|i| vec![(i + 1) % 5, (i + 4) % 5]).collect();
        let pg = PlaneGraph::new(g, rot, None).unwrap();
        assert_eq!(pg.faces().len(), 2);
        assert!(pg.faces().iter().all(|f| f.degree() == 5));
    }

    #[test]
    fn missing_neighbor_is_rejected() {
        let g = Graph::complete(3);
        let rot = vec![vec![1], vec![2, 0], vec![0, 1]];
        assert_eq!(
            faces_from_rotation(&g, &rot),
            Err(EmbeddingError::RotationMismatch { vertex: 0 })
        );
    }

    #[test]
    fn nonplanar_rotation_is_rejected() {
        // K4 with one rotation flipped traces a toroidal map
        let g = Graph::complete(4);
        let rot = vec![vec![1, 2, 3], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
        assert!(matches!(PlaneGraph::new(g, rot, None), Err(EmbeddingError::NotPlanar { .. })));
    }

    #[test]
    fn faces_around_vertex_follow_rotation() {
        let pg = k4();
        let around = pg.faces_around(3);
        assert_eq!(around.len(), 3);
        assert!(!around.contains(&pg.outer_id()));
        let around0 = pg.faces_around(0);
        assert!(around0.contains(&pg.outer_id()));
    }
}
