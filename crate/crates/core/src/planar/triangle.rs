use std::collections::BTreeSet;

use thiserror::Error;

use super::cluster::ClusterCatalog;
use super::embedding::{FaceId, PlaneGraph};
use super::graph::{Dsu, Edge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("vertices {0:?} do not form a 3-cycle")]
pub struct NotATriangle(pub [usize; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclePredicates {
    pub separating: bool,
    pub bad: bool,
    pub good: bool,
}

/// The two sides of a 3-cycle: faces and vertices strictly inside and
/// outside. The outside is the side holding the outer face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSides {
    pub interior_faces: Vec<FaceId>,
    pub interior_vertices: Vec<usize>,
    pub exterior_vertices: Vec<usize>,
}

pub fn triangle_sides(pg: &PlaneGraph, c: [usize; 3]) -> Result<TriangleSides, NotATriangle> {
    let g = pg.graph();
    let [a, b, d] = c;
    if a == b || b == d || a == d || !g.has_edge(a, b) || !g.has_edge(b, d) || !g.has_edge(a, d) {
        return Err(NotATriangle(c));
    }
    let cycle = [Edge::new(a, b), Edge::new(b, d), Edge::new(a, d)];
    let mut dsu = Dsu::new(pg.faces().len());
    for e in g.edges() {
        if cycle.contains(e) {
            continue;
        }
        let (f, h) = pg.faces_of_edge(*e);
        dsu.union(f, h);
    }
    let outer_root = dsu.find(pg.outer_id());
    let mut interior_faces = Vec::new();
    let mut inside = BTreeSet::new();
    let mut outside = BTreeSet::new();
    for f in pg.faces() {
        let set = if dsu.find(f.id) == outer_root {
            &mut outside
        } else {
            interior_faces.push(f.id);
            &mut inside
        };
        set.extend(f.walk.iter().copied().filter(|v| !c.contains(v)));
    }
    Ok(TriangleSides {
        interior_faces,
        interior_vertices: inside.into_iter().collect(),
        exterior_vertices: outside.into_iter().collect(),
    })
}

/// Separating, bad and good for the 3-cycle on `c`.
///
/// A 3-cycle is bad when it bounds, together with its interior, a 7-cluster
/// of shape (11) whose outer triangle `u v w` is the cycle itself.
pub fn cycle_predicates(pg: &PlaneGraph, c: [usize; 3]) -> Result<CyclePredicates, NotATriangle> {
    cycle_predicates_with(pg, c, ClusterCatalog::builtin())
}

pub fn cycle_predicates_with(
    pg: &PlaneGraph,
    c: [usize; 3],
    catalog: &ClusterCatalog,
) -> Result<CyclePredicates, NotATriangle> {
    let sides = triangle_sides(pg, c)?;
    let separating = !sides.interior_vertices.is_empty() && !sides.exterior_vertices.is_empty();
    let bad = is_bad(pg, c, &sides, catalog);
    Ok(CyclePredicates { separating, bad, good: !bad })
}

fn is_bad(pg: &PlaneGraph, c: [usize; 3], sides: &TriangleSides, catalog: &ClusterCatalog) -> bool {
    if sides.interior_faces.len() != 7 || sides.interior_vertices.len() != 3 {
        return false;
    }
    if sides.interior_faces.iter().any(|&f| pg.face(f).degree() != 3) {
        return false;
    }
    let triangles: Vec<[usize; 3]> = sides
        .interior_faces
        .iter()
        .map(|&f| {
            let w = &pg.face(f).walk;
            let mut t = [w[0], w[1], w[2]];
            t.sort_unstable();
            t
        })
        .collect();
    let mut vertices: Vec<usize> = c.iter().copied().chain(sides.interior_vertices.iter().copied()).collect();
    vertices.sort_unstable();
    let class = catalog.classify(&vertices, &triangles);
    if class.code != Some(11) {
        return false;
    }
    let mut cyc = c;
    cyc.sort_unstable();
    class.roles.iter().any(|r| {
        let mut outer = [r.get("u").unwrap(), r.get("v").unwrap(), r.get("w").unwrap()];
        outer.sort_unstable();
        outer == cyc
    })
}
