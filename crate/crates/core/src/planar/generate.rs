//! Random plane graphs without 7-cycles or butterflies, grown inside a fixed
//! outer triangle.

use rand::seq::index::sample;
use rand::Rng;

use super::cycles::has_cycle_of_length;
use super::embedding::PlaneGraph;
use super::graph::Graph;
use super::pattern::{contains_pattern, PatternGraph};

/// Outer boundary walk of every generated graph.
pub const OUTER_TRIANGLE: [usize; 3] = [0, 2, 1];

#[derive(Debug, Clone, Copy)]
pub struct GeneratorParams {
    /// Stop once this many vertices exist.
    pub max_vertices: usize,
    /// Growth attempts before giving up on reaching `max_vertices`.
    pub attempts: usize,
    /// Probability of trying a chord instead of a new vertex.
    pub chord_rate: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams { max_vertices: 12, attempts: 400, chord_rate: 0.3 }
    }
}

/// Grows a 2-connected plane graph from the triangle `0 1 2` by adding
/// vertices inside interior faces and chords across them, undoing any step
/// that creates a 7-cycle or a butterfly.
pub fn random_plane_graph<R: Rng>(rng: &mut R, params: &GeneratorParams, butterfly: &PatternGraph) -> PlaneGraph {
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut rot: Vec<Vec<usize>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let mut current = build(&edges, &rot);
    for _ in 0..params.attempts {
        if current.n() >= params.max_vertices {
            break;
        }
        let interior: Vec<usize> = current.faces().iter().filter(|f| f.id != current.outer_id()).map(|f| f.id).collect();
        let walk = current.face(interior[rng.gen_range(0..interior.len())]).walk.clone();
        let (mut e2, mut r2) = (edges.clone(), rot.clone());
        let changed = if rng.gen_bool(params.chord_rate) {
            add_chord(rng, &current, &walk, &mut e2, &mut r2)
        } else {
            add_vertex(rng, &walk, &mut e2, &mut r2);
            true
        };
        if !changed {
            continue;
        }
        let g = Graph::new(r2.len(), e2.iter().copied()).expect("growth keeps the graph simple");
        if has_cycle_of_length(&g, 7) || contains_pattern(&g, butterfly).is_some() {
            continue;
        }
        edges = e2;
        rot = r2;
        current = build(&edges, &rot);
    }
    current
}

fn build(edges: &[(usize, usize)], rot: &[Vec<usize>]) -> PlaneGraph {
    let g = Graph::new(rot.len(), edges.iter().copied()).expect("growth keeps the graph simple");
    PlaneGraph::new(g, rot.to_vec(), Some(&OUTER_TRIANGLE)).expect("growth keeps the embedding planar")
}

// Inserts `x` into the rotation at `a` inside the corner of the face whose
// walk continues from `a` to `next`.
fn insert_in_corner(rot: &mut [Vec<usize>], a: usize, next: usize, x: usize) {
    let pos = rot[a].iter().position(|&w| w == next).expect("walk follows edges");
    rot[a].insert(pos + 1, x);
}

fn add_vertex<R: Rng>(rng: &mut R, walk: &[usize], edges: &mut Vec<(usize, usize)>, rot: &mut Vec<Vec<usize>>) {
    let d = walk.len();
    let m = rng.gen_range(2..=d);
    let mut picks = sample(rng, d, m).into_vec();
    picks.sort_unstable();
    let x = rot.len();
    rot.push(Vec::with_capacity(m));
    for &i in &picks {
        let (a, next) = (walk[i], walk[(i + 1) % d]);
        insert_in_corner(rot, a, next, x);
        rot[x].push(a);
        edges.push((a, x));
    }
}

fn add_chord<R: Rng>(
    rng: &mut R,
    pg: &PlaneGraph,
    walk: &[usize],
    edges: &mut Vec<(usize, usize)>,
    rot: &mut [Vec<usize>],
) -> bool {
    let d = walk.len();
    if d < 4 {
        return false;
    }
    let i = rng.gen_range(0..d);
    let j = (i + rng.gen_range(2..=d - 2)) % d;
    let (a, b) = (walk[i], walk[j]);
    if pg.graph().has_edge(a, b) {
        return false;
    }
    insert_in_corner(rot, a, walk[(i + 1) % d], b);
    insert_in_corner(rot, b, walk[(j + 1) % d], a);
    edges.push((a, b));
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::has_cycle_of_length;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn butterfly() -> PatternGraph {
        crate::planar::butterfly_pattern()
    }

    #[test]
    fn generated_graphs_stay_in_class() {
        let bf = butterfly();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pg = random_plane_graph(&mut rng, &GeneratorParams::default(), &bf);
            assert!(!has_cycle_of_length(pg.graph(), 7));
            assert_eq!(pg.outer_face().canonical_walk(), vec![0, 2, 1]);
            let f = pg.faces().len() as i64;
            assert_eq!(pg.n() as i64 - pg.graph().edge_count() as i64 + f, 2);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let bf = butterfly();
        let a = random_plane_graph(&mut ChaCha8Rng::seed_from_u64(3), &GeneratorParams::default(), &bf);
        let b = random_plane_graph(&mut ChaCha8Rng::seed_from_u64(3), &GeneratorParams::default(), &bf);
        assert_eq!(a.rotations(), b.rotations());
    }
}
