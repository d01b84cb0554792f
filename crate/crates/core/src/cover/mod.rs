//! Correspondence coloring: lists, per-edge bijections, transversals.
//!
//! A cover instance on graph `G` with list size `k` has cover vertices
//! `(v, c)` for available colors `c`; `(u, c)` and `(v, sigma(u, v)(c))` are
//! adjacent for every edge `uv`. A transversal picks one available color per
//! vertex with no two picks adjacent.

mod enumerate;
mod solver;
mod straighten;
mod types;

pub use enumerate::{enumerate_matchings, enumerate_matchings_range, MatchingStream};
pub use solver::{extend_precoloring, find_transversal, solve, SolverOptions};
pub use straighten::{is_straight, residual, straighten, Straightened};
pub use types::{
    Color, ColorSet, CoverError, CoverInstance, ListAssignment, MatchingAssignment, Perm, Transversal, MAX_K,
};

/// Exhaustive search over every choice of available colors.
///
/// Returns the number of valid transversals and the first one found in
/// lexicographic order of color vectors.
pub fn exhaustive_transversals(inst: &CoverInstance) -> (u64, Option<Transversal>) {
    let n = inst.n();
    let lists: Vec<Vec<Color>> = (0..n).map(|v| inst.lists().colors(v)).collect();
    if lists.iter().any(Vec::is_empty) {
        return (0, None);
    }
    let mut idx = vec![0usize; n];
    let mut count = 0;
    let mut first = None;
    loop {
        let colors: Vec<Color> = (0..n).map(|v| lists[v][idx[v]]).collect();
        let ok = inst.graph().edges().iter().all(|e| !inst.conflicts(e.lo, colors[e.lo], e.hi, colors[e.hi]));
        if ok {
            count += 1;
            if first.is_none() {
                first = Some(Transversal::complete(&colors));
            }
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return (count, first);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
