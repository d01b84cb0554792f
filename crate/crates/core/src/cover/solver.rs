use crate::planar::{cycle_predicates, triangle_sides, Graph, PlaneGraph};

use super::types::{Color, ColorSet, CoverError, CoverInstance, MatchingAssignment, Transversal};

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverOptions {
    /// Split along a separating good 3-cycle before searching.
    pub decompose_separating: bool,
}

/// Search state shared by the backtracking routines.
struct Search<'a> {
    inst: &'a CoverInstance,
    // colors of `v` blocked by colored neighbors, with multiplicity so
    // that undo is exact
    blocked: Vec<[u8; 16]>,
    color: Vec<Option<Color>>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a CoverInstance) -> Self {
        Search { inst, blocked: vec![[0; 16]; inst.n()], color: vec![None; inst.n()] }
    }

    fn residual(&self, v: usize) -> ColorSet {
        let mut s = self.inst.lists().mask(v);
        for c in s.iter() {
            if self.blocked[v][(c - 1) as usize] > 0 {
                s.remove(c);
            }
        }
        s
    }

    fn assign(&mut self, v: usize, c: Color) {
        self.color[v] = Some(c);
        for (w, sigma) in self.inst.incident(v) {
            self.blocked[*w][(sigma.apply(c) - 1) as usize] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v].take().expect("vertex was colored");
        for (w, sigma) in self.inst.incident(v) {
            self.blocked[*w][(sigma.apply(c) - 1) as usize] -= 1;
        }
    }

    // Fewest residual colors first, ties by smaller id; colors ascending.
    fn backtrack(&mut self, active: &[usize]) -> bool {
        let mut best: Option<(usize, ColorSet)> = None;
        for &v in active {
            if self.color[v].is_some() {
                continue;
            }
            let r = self.residual(v);
            if r.is_empty() {
                return false;
            }
            if best.is_none_or(|(_, b)| r.len() < b.len()) {
                best = Some((v, r));
            }
        }
        let Some((v, r)) = best else { return true };
        for c in r.iter() {
            self.assign(v, c);
            let dead = self.inst.incident(v).iter().any(|(w, _)| self.color[*w].is_none() && self.residual(*w).is_empty());
            if !dead && self.backtrack(active) {
                return true;
            }
            self.unassign(v);
        }
        false
    }
}

/// Extends `partial` to a complete transversal, or returns `None`.
///
/// The caller guarantees that `partial` is independent and uses available
/// colors; `extend_precoloring` checks this. Vertices whose residual list
/// outnumbers their uncolored neighbors are set aside first and colored
/// last, in reverse order.
pub fn find_transversal(inst: &CoverInstance, partial: &Transversal) -> Option<Transversal> {
    let n = inst.n();
    let mut s = Search::new(inst);
    for v in 0..n {
        if let Some(c) = partial.get(v) {
            s.assign(v, c);
        }
    }
    let mut present: Vec<bool> = (0..n).map(|v| partial.get(v).is_none()).collect();
    let mut deferred = Vec::new();
    loop {
        let next = (0..n).find(|&v| {
            present[v] && s.residual(v).len() > inst.graph().neighbors(v).iter().filter(|&&w| present[w]).count()
        });
        let Some(v) = next else { break };
        present[v] = false;
        deferred.push(v);
    }
    let active: Vec<usize> = (0..n).filter(|&v| present[v]).collect();
    if !s.backtrack(&active) {
        return None;
    }
    for &v in deferred.iter().rev() {
        let c = s.residual(v).min().expect("deferred vertex keeps a free color");
        s.assign(v, c);
    }
    Some(Transversal::from_colors(s.color))
}

/// `find_transversal` after checking that `phi` is a valid partial coloring.
pub fn extend_precoloring(inst: &CoverInstance, phi: &Transversal) -> Result<Option<Transversal>, CoverError> {
    if phi.n() != inst.n() {
        return Err(CoverError::UnknownVertex(phi.n()));
    }
    phi.check(inst)?;
    Ok(find_transversal(inst, phi))
}

/// Solver with optional separating-3-cycle decomposition.
///
/// With decomposition on, a separating good 3-cycle `C` splits the search:
/// each coloring of `C` is tried in order, and the sides are solved
/// separately with `C` fixed. The verdict is the same as plain search.
pub fn solve(inst: &CoverInstance, partial: &Transversal, pg: Option<&PlaneGraph>, opts: SolverOptions) -> Option<Transversal> {
    let Some(pg) = pg.filter(|_| opts.decompose_separating) else {
        return find_transversal(inst, partial);
    };
    let Some((c, inside)) = separating_good_triangle(pg) else {
        return find_transversal(inst, partial);
    };
    let k = inst.k();
    for c0 in 1..=k {
        for c1 in 1..=k {
            for c2 in 1..=k {
                let mut phi = partial.clone();
                let mut fits = true;
                for (v, col) in c.iter().zip([c0, c1, c2]) {
                    match phi.get(*v) {
                        Some(p) if p != col => fits = false,
                        _ => phi.set(*v, Some(col)),
                    }
                }
                if !fits || phi.check(inst).is_err() {
                    continue;
                }
                let inner_side: Vec<bool> = (0..inst.n()).map(|v| inside[v] || c.contains(&v)).collect();
                let outer_side: Vec<bool> = inside.iter().map(|&i| !i).collect();
                let inner = find_transversal(&restrict(inst, &inner_side), &phi);
                let Some(inner) = inner else { continue };
                let outer = find_transversal(&restrict(inst, &outer_side), &phi);
                let Some(outer) = outer else { continue };
                let colors = (0..inst.n())
                    .map(|v| if inside[v] { inner.get(v) } else { outer.get(v) })
                    .collect();
                return Some(Transversal::from_colors(colors));
            }
        }
    }
    None
}

// Same lists and matchings, keeping only edges with both ends in `keep`.
fn restrict(inst: &CoverInstance, keep: &[bool]) -> CoverInstance {
    let g = inst.graph();
    let edges = g.edges().iter().filter(|e| keep[e.lo] && keep[e.hi]).map(|e| (e.lo, e.hi));
    let sub = Graph::new(g.n(), edges).expect("subgraph of a simple graph");
    let mut m = MatchingAssignment::identity(&sub, inst.k());
    for e in sub.edges() {
        let sigma = inst.matchings().sigma(e.lo, e.hi).expect("edge of the host");
        m.set_perm(e.lo, e.hi, sigma).expect("edge of the subgraph");
    }
    CoverInstance::new(sub, inst.lists().clone(), m).expect("restriction is consistent")
}

// First separating good 3-cycle by vertex order, with a flag per vertex
// marking its strict interior.
fn separating_good_triangle(pg: &PlaneGraph) -> Option<([usize; 3], Vec<bool>)> {
    let g = pg.graph();
    for a in 0..g.n() {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > b) {
                if !g.has_edge(a, c) {
                    continue;
                }
                let p = cycle_predicates(pg, [a, b, c]).expect("a-b-c is a 3-cycle");
                if p.separating && p.good {
                    let sides = triangle_sides(pg, [a, b, c]).expect("a-b-c is a 3-cycle");
                    let mut inside = vec![false; g.n()];
                    for v in sides.interior_vertices {
                        inside[v] = true;
                    }
                    return Some(([a, b, c], inside));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::ListAssignment;

    #[test]
    fn straight_triangle_with_two_colors_fails() {
        let inst = CoverInstance::straight(Graph::cycle(3), 2);
        assert!(find_transversal(&inst, &Transversal::empty(3)).is_none());
    }

    #[test]
    fn one_twisted_edge_makes_triangle_colorable() {
        let g = Graph::cycle(3);
        let mut m = MatchingAssignment::identity(&g, 2);
        m.set(0, 1, &[2, 1]).unwrap();
        let inst = CoverInstance::new(g, ListAssignment::full(3, 2), m).unwrap();
        let t = find_transversal(&inst, &Transversal::empty(3)).unwrap();
        assert!(t.is_valid_for(&inst));
    }

    #[test]
    fn k4_center_gets_fourth_color() {
        let inst = CoverInstance::straight(Graph::complete(4), 4);
        let phi = Transversal::from_colors(vec![Some(1), Some(2), Some(3), None]);
        let t = extend_precoloring(&inst, &phi).unwrap().unwrap();
        assert_eq!(t.get(3), Some(4));
    }

    #[test]
    fn conflicting_precoloring_is_an_error() {
        let inst = CoverInstance::straight(Graph::complete(3), 3);
        let phi = Transversal::from_colors(vec![Some(1), Some(1), None]);
        assert!(matches!(extend_precoloring(&inst, &phi), Err(CoverError::NotIndependent(_))));
    }

    #[test]
    fn empty_precoloring_matches_plain_search() {
        let inst = CoverInstance::straight(Graph::petersen(), 3);
        let a = extend_precoloring(&inst, &Transversal::empty(10)).unwrap();
        assert_eq!(a, find_transversal(&inst, &Transversal::empty(10)));
        assert!(a.unwrap().is_valid_for(&inst));
    }
}
