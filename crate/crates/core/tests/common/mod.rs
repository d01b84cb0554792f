#![allow(dead_code)]

use std::path::PathBuf;

use dpcolor::cli::Assets;
use dpcolor::cover::{Color, ColorSet, CoverInstance, ListAssignment, MatchingAssignment, Perm};
use dpcolor::format::GraphFile;
use dpcolor::planar::generate::{random_plane_graph, GeneratorParams};
use dpcolor::planar::{Graph, PlaneGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn asset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets").join(name)
}

pub fn load_asset(name: &str) -> GraphFile {
    GraphFile::from_json(&std::fs::read_to_string(asset(name)).unwrap()).unwrap()
}

/// Colors of `a` and `b` clash on edge `a < b`.
fn clash(inst: &CoverInstance, a: usize, ca: Color, b: usize, cb: Color) -> bool {
    inst.matchings().sigma(a, b).unwrap().apply(ca) == cb
}

/// Counts transversals by trying every assignment of listed colors.
pub fn brute_force(inst: &CoverInstance) -> u64 {
    let n = inst.n();
    let lists: Vec<Vec<Color>> = (0..n).map(|v| inst.lists().colors(v)).collect();
    let mut count = 0;
    let mut pick = vec![0 as Color; n];
    fn go(i: usize, inst: &CoverInstance, lists: &[Vec<Color>], pick: &mut [Color], count: &mut u64) {
        if i == lists.len() {
            let ok = inst.graph().edges().iter().all(|e| !clash(inst, e.lo, pick[e.lo], e.hi, pick[e.hi]));
            *count += u64::from(ok);
            return;
        }
        for &c in &lists[i] {
            pick[i] = c;
            go(i + 1, inst, lists, pick, count);
        }
    }
    go(0, inst, &lists, &mut pick, &mut count);
    count
}

/// Plain list coloring: adjacent vertices get different colors.
pub fn list_colorable(g: &Graph, lists: &[Vec<Color>]) -> bool {
    fn go(v: usize, g: &Graph, lists: &[Vec<Color>], pick: &mut Vec<Color>) -> bool {
        if v == lists.len() {
            return true;
        }
        for &c in &lists[v] {
            if g.neighbors(v).iter().all(|&w| w >= v || pick[w] != c) {
                pick.push(c);
                if go(v + 1, g, lists, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
    go(0, g, lists, &mut Vec::new())
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Random lists: full with probability 1/2, otherwise a random nonempty subset.
pub fn random_lists(rng: &mut ChaCha8Rng, n: usize, k: u8) -> ListAssignment {
    let sets = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                ColorSet::full(k)
            } else {
                let mut s = ColorSet::from_colors((1..=k).filter(|_| rng.gen_bool(0.6)));
                if s.is_empty() {
                    s.insert(rng.gen_range(1..=k));
                }
                s
            }
        })
        .collect();
    ListAssignment::from_sets(k, sets).unwrap()
}

pub fn random_matchings(rng: &mut ChaCha8Rng, g: &Graph, k: u8) -> MatchingAssignment {
    let perms = Perm::all(k);
    let mut m = MatchingAssignment::identity(g, k);
    for e in g.edges() {
        m.set_perm(e.lo, e.hi, perms.choose(rng).unwrap().clone()).unwrap();
    }
    m
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_k: u8) -> CoverInstance {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    let p = rng.gen_range(0.2..0.8);
    let g = random_graph(rng, n, p);
    let lists = random_lists(rng, n, k);
    let m = random_matchings(rng, &g, k);
    CoverInstance::new(g, lists, m).unwrap()
}

/// Generated plane graphs without 7-cycles or butterflies, sizes varying
/// between 4 and `max_vertices`.
pub fn generated_corpus(rng: &mut ChaCha8Rng, count: usize, max_vertices: usize) -> Vec<PlaneGraph> {
    let assets = Assets::load(None).unwrap();
    (0..count)
        .map(|_| {
            let params = GeneratorParams { max_vertices: rng.gen_range(4..=max_vertices), ..Default::default() };
            random_plane_graph(rng, &params, &assets.butterfly)
        })
        .collect()
}

/// Euler's formula and the face-degree sum for a connected plane graph.
pub fn euler_holds(pg: &PlaneGraph) -> bool {
    let (n, e, f) = (pg.n() as i64, pg.graph().edge_count() as i64, pg.faces().len() as i64);
    let degree_sum: usize = pg.faces().iter().map(|f| f.degree()).sum();
    n - e + f == 2 && degree_sum == 2 * pg.graph().edge_count()
}
